"""Transform callables evaluable at complex / extended-precision points.

Numerical Laplace inversion needs the transforms on contours in the complex
plane (Talbot) or at extended precision on the real axis (Gaver-Stehfest), so
the targets here are built on mpmath rather than the float64 kernels of
:mod:`besqint.laws`.  The float64 implementations are cross-checked against
these in the test suite; everything downstream of an `invert` call goes
through this module.

All callables take the standard transform variable s (of exp(-s * t)) as an
mpmath mpf/mpc and return an mpmath number.  The library-wide convention
lam = 2 s translates between the two.
"""

from __future__ import annotations

from typing import Callable

import mpmath as mp

from .errors import RegimeViolationError
from .laws import BesqParams, SigmaQuery, resolve_branch

__all__ = [
    "sigma_mgf",
    "cdf_target",
    "density_target",
    "jump_target",
    "digital_target",
    "z4_mgf",
]

MpFunc = Callable[[mp.mpf], mp.mpf]


def _w(nu: float, p: float, alpha: float, kind: str, t: float, lam) -> mp.mpf:
    """Kernel t^(-nu/2) C_alpha(sqrt(lam)/(p+1) t^((p+1)/2)); lam may be complex."""
    c = mp.sqrt(lam) / (p + 1)
    if t == 0.0:
        if kind == "I":
            return (c / 2) ** alpha / mp.gamma(alpha + 1)
        return mp.gamma(alpha) / 2 * (c / 2) ** (-alpha)
    tm = mp.mpf(t)
    z = c * tm ** mp.mpf(0.5 * (p + 1))
    f = mp.besseli if kind == "I" else mp.besselk
    return tm ** mp.mpf(-0.5 * nu) * f(alpha, z)


def sigma_mgf(params: BesqParams, x: float, y: float) -> MpFunc:
    """s -> E_x[exp(-s Sigma)], the transform in the standard s-variable."""
    branch = resolve_branch(params, x, y)  # validates the regime up front
    nu, p = params.nu, params.p
    alpha = abs(nu) / (p + 1) if branch == "K" else nu / (p + 1)
    if branch == "K" and y == 0.0 and nu >= 0.0:
        raise RegimeViolationError("level 0 unreachable for nu >= 0: transform is 0")

    def f(s):
        lam = 2 * s
        return _w(nu, p, alpha, branch, x, lam) / _w(nu, p, alpha, branch, y, lam)

    return f


def cdf_target(params: BesqParams, x: float, y: float) -> MpFunc:
    """Transform of the distribution function of Sigma: mgf(s)/s."""
    mgf = sigma_mgf(params, x, y)
    return lambda s: mgf(s) / s


def density_target(params: BesqParams, x: float, y: float) -> MpFunc:
    """Transform of the density of Sigma: the mgf itself."""
    return sigma_mgf(params, x, y)


def jump_target(params: BesqParams, x: float, direction: str) -> MpFunc:
    """Transform (in s) of the jump tail pi-bar(x, .); matches
    :func:`besqint.laws.jump_measure_transform` at lam = 2 s."""
    nu, p = params.nu, params.p
    p1 = p + 1
    alpha = nu / p1
    if direction == "forward":
        if nu < 0 or x < 0:
            raise RegimeViolationError("forward jump transform requires nu >= 0, x >= 0")
        if x == 0.0:
            if p > 0:
                return lambda s: mp.mpf(0)
            if p == 0:
                return lambda s: mp.mpf(1) / (2 * (nu + 1))
            raise RegimeViolationError("forward jump transform diverges at x=0 for p < 0")

        def f(s):
            lam = 2 * s
            z = mp.sqrt(lam) / p1 * mp.mpf(x) ** mp.mpf(0.5 * p1)
            return p1 * z * mp.besseli(alpha + 1, z) / mp.besseli(alpha, z) / (lam * x)

        return f
    if direction == "reversed":
        if not 0 < nu <= 1 or not 0 <= x < 1:
            raise RegimeViolationError("reversed jump transform requires nu in (0,1], x in [0,1)")
        t = 1.0 - x

        def f(s):
            lam = 2 * s
            z = mp.sqrt(lam) / p1 * mp.mpf(t) ** mp.mpf(0.5 * p1)
            return p1 * z * mp.besselk(alpha - 1, z) / mp.besselk(alpha, z) / (lam * t)

        return f
    raise ValueError(f"direction must be 'forward' or 'reversed', got {direction!r}")


def digital_target(params: BesqParams, x: float, y: float, rate: float = 1.0) -> MpFunc:
    """Transform (in mu) of the digital price k -> E[1{Sigma <= k} exp(-rate Sigma)].

    Integrating exp(-mu k) over k >= Sigma produces the 1/mu factor in front
    of the shifted transform: (1/mu) E[exp(-(mu + rate) Sigma)].
    """
    mgf = sigma_mgf(params, x, y)
    return lambda mu: mgf(mu + rate) / mu


def z4_mgf(x: float) -> MpFunc:
    """s -> E[exp(-s Z4_x)] through the time-reversed kernel representation."""
    if not 0.0 <= x < 1.0:
        raise RegimeViolationError(f"requires x in [0, 1), got {x}")
    params = BesqParams(nu=-1.0, p=1.0)
    SigmaQuery(params, x=1.0, y=1.0 - x, lam=1.0)  # validates levels
    return sigma_mgf(params, 1.0, 1.0 - x)
