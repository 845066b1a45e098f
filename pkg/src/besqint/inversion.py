"""Numerical Laplace inversion: Gaver-Stehfest and fixed Talbot.

Both methods run in mpmath working precision because the Gaver-Stehfest
weights alternate with huge magnitudes and the Talbot sum cancels by about
e^(2M/5).  Transform callables must accept mpf arguments; Talbot additionally
requires evaluation at complex points (mpc) along its contour.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import mpmath as mp

from .errors import NonFiniteInputError, UnstableInversionError
from .laws import BesqParams
from . import transforms

__all__ = [
    "InversionConfig",
    "GAVER_STEHFEST",
    "TALBOT",
    "invert",
    "invert_checked",
    "cdf_sigma",
    "sigma_density",
    "jump_density",
    "z4_density",
]

GAVER_STEHFEST = "gaver-stehfest"
TALBOT = "talbot"

_ENV_DIGITS = "BESQINT_PRECISION_DIGITS"


@dataclass(frozen=True)
class InversionConfig:
    """Method, order (Gaver-Stehfest, even) or node count (Talbot), precision."""

    method: str = TALBOT
    order_or_nodes: int = 32
    working_precision_digits: int | None = None

    def __post_init__(self):
        if self.method not in (GAVER_STEHFEST, TALBOT):
            raise ValueError(f"unknown inversion method {self.method!r}")
        n = self.order_or_nodes
        if self.method == GAVER_STEHFEST:
            if n < 2 or n % 2:
                raise ValueError(f"Gaver-Stehfest order must be even and >= 2, got {n}")
            if self.working_precision_digits is not None and n > self.working_precision_digits / 1.3:
                raise ValueError(
                    f"Gaver-Stehfest order {n} exceeds the cap for "
                    f"{self.working_precision_digits} working digits (order <= digits/1.3)"
                )
        else:
            if n < 8:
                raise ValueError(f"Talbot needs at least 8 nodes, got {n}")

    @property
    def digits(self) -> int:
        if self.working_precision_digits is not None:
            return self.working_precision_digits
        env = os.environ.get(_ENV_DIGITS)
        if env:
            return max(int(env), 16)
        if self.method == GAVER_STEHFEST:
            return max(30, int(2.6 * self.order_or_nodes))
        return max(24, int(1.3 * self.order_or_nodes))


def gs_config(order: int = 16, digits: int | None = None) -> InversionConfig:
    return InversionConfig(method=GAVER_STEHFEST, order_or_nodes=order,
                           working_precision_digits=digits)


@lru_cache(maxsize=32)
def _stehfest_weights(order: int, digits: int) -> tuple:
    half = order // 2
    with mp.workdps(digits):
        V = []
        for k in range(1, order + 1):
            terms = [
                mp.power(j, half) * mp.fac(2 * j)
                / (mp.fac(half - j) * mp.fac(j) * mp.fac(j - 1)
                   * mp.fac(k - j) * mp.fac(2 * j - k))
                for j in range((k + 1) // 2, min(k, half) + 1)
            ]
            V.append(mp.power(-1, k + half) * mp.fsum(terms))
        return tuple(V)


def _invert_gs(f_hat, t: float, cfg: InversionConfig) -> float:
    V = _stehfest_weights(cfg.order_or_nodes, cfg.digits)
    with mp.workdps(cfg.digits):
        tt = mp.mpf(t)
        ln2 = mp.ln2
        vals = [V[k - 1] * f_hat(k * ln2 / tt) for k in range(1, cfg.order_or_nodes + 1)]
        return float(mp.fsum(vals) * ln2 / tt)


def _invert_talbot(f_hat, t: float, cfg: InversionConfig) -> float:
    M = cfg.order_or_nodes
    with mp.workdps(cfg.digits):
        tt = mp.mpf(t)
        r = mp.mpf(2) * M / (5 * tt)
        total = mp.exp(r * tt) * f_hat(r) / 2
        for k in range(1, M):
            theta = mp.pi * k / M
            cot = mp.cot(theta)
            s_k = r * theta * (cot + 1j)
            sigma = theta + (theta * cot - 1) * cot
            total += (mp.exp(tt * s_k) * f_hat(s_k) * (1 + 1j * sigma)).real
        return float(total * r / M)


def invert(f_hat: Callable, t: float, cfg: InversionConfig | None = None) -> float:
    """Pointwise inverse Laplace transform estimate of f_hat at abscissa t > 0."""
    if not (math.isfinite(t) and t > 0.0):
        raise NonFiniteInputError(f"inversion abscissa must be finite and > 0, got {t}")
    cfg = cfg or InversionConfig()
    out = _invert_gs(f_hat, t, cfg) if cfg.method == GAVER_STEHFEST else _invert_talbot(f_hat, t, cfg)
    if not math.isfinite(out):
        raise UnstableInversionError(f"inversion returned {out} at t={t}")
    return out


def invert_checked(
    f_hat: Callable,
    t: float,
    cfg: InversionConfig | None = None,
    cross_tol: float = 1e-6,
) -> tuple[float, float]:
    """Invert with both methods; return (value, discrepancy).

    The value comes from cfg's method; the companion run uses the other method
    at a comparable accuracy target.  Raises when the two disagree beyond
    cross_tol (absolute, or relative for large values).
    """
    cfg = cfg or InversionConfig()
    if cfg.method == TALBOT:
        other = gs_config(order=48)
    else:
        other = InversionConfig(method=TALBOT, order_or_nodes=max(32, cfg.order_or_nodes))
    a = invert(f_hat, t, cfg)
    b = invert(f_hat, t, other)
    disc = abs(a - b)
    scale = max(abs(a), abs(b))
    bad = disc > cross_tol * max(1.0, scale)
    if 1e-250 < scale < 1e-8:
        # deep-tail values: absolute agreement is vacuous, ask for relative
        bad = bad or disc > 0.05 * scale
    if bad:
        raise UnstableInversionError(
            f"cross-method disagreement {disc:.3g} at t={t} "
            f"({cfg.method}={a:.12g}, {other.method}={b:.12g})"
        )
    return a, disc


# ---------------------------------------------------------------------------
# library inversion targets
# ---------------------------------------------------------------------------

def cdf_sigma(
    params: BesqParams,
    x: float,
    y: float,
    t: float,
    cfg: InversionConfig | None = None,
    cross_check: bool = False,
) -> float:
    """P_x[Sigma <= t], by inverting mgf(s)/s.

    For nu > 0 with y < x this is the distribution of the defective law and
    saturates below 1.
    """
    target = transforms.cdf_target(params, x, y)
    if cross_check:
        val, _ = invert_checked(target, t, cfg)
    else:
        val = invert(target, t, cfg)
    if val < -1e-6 or val > 1.0 + 1e-6:
        raise UnstableInversionError(f"CDF estimate {val} outside [0, 1] at t={t}")
    return min(max(val, 0.0), 1.0)


def sigma_density(
    params: BesqParams, x: float, y: float, t: float, cfg: InversionConfig | None = None
) -> float:
    """Density of Sigma at t, by inverting the mgf itself."""
    return invert(transforms.density_target(params, x, y), t, cfg)


def jump_density(
    params: BesqParams,
    x: float,
    b: float,
    direction: str,
    cfg: InversionConfig | None = None,
    cross_check: bool = False,
) -> float:
    """Jump tail pi-bar(x, b) (forward) or its time-reversed analog (reversed)."""
    if b <= 0:
        raise NonFiniteInputError(f"jump abscissa b must be > 0, got {b}")
    target = transforms.jump_target(params, x, direction)
    if cross_check:
        val, _ = invert_checked(target, b, cfg)
    else:
        val = invert(target, b, cfg)
    if val < -1e-8:
        raise UnstableInversionError(f"jump density estimate {val} < 0 at b={b}")
    return max(val, 0.0)


def z4_density(x: float, t: float, cfg: InversionConfig | None = None) -> float:
    """Density at t of the dimension-4 reversed functional at level x."""
    return invert(transforms.z4_mgf(x), t, cfg)
