"""Closed-form laws of the accumulated power functional of a squared Bessel process.

For a squared Bessel process X of index nu (dimension delta = 2(nu+1)) and the
functional Sigma = integral of X^p up to the first hitting time of level y,
every public value here is built from the kernel

    w(t) = t^(-nu/2) * C_alpha( sqrt(lam)/(p+1) * t^((p+1)/2) )

where C is K (downward passage, alpha = |nu|/(p+1)) or I (upward passage,
alpha = nu/(p+1), signed).  The Laplace transform convention throughout is

    laplace_sigma(q) = E_x[ exp(-(lam/2) * Sigma) ] = w(x) / w(y).

All ratios are computed as differences of log magnitudes; K and I are never
formed linearly.
"""

from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad, solve_ivp

from . import bessel
from .errors import (
    DegenerateConditioningError,
    NonFiniteInputError,
    OdeFailureError,
    OrientationError,
    QuadratureFailureError,
    RegimeViolationError,
)

__all__ = [
    "BesqParams",
    "SigmaQuery",
    "BarrierQuery",
    "K_BRANCH",
    "I_BRANCH",
    "kernel_w",
    "resolve_branch",
    "is_defective",
    "laplace_sigma",
    "log_laplace_sigma",
    "laplace_hitting_time",
    "equivalent_hitting_params",
    "scale_tilde",
    "joint_max_laplace",
    "conditional_max_laplace",
    "joint_r_sigma_laplace",
    "mean_sigma",
    "jump_measure_transform",
    "scaling_identity_check",
    "besq_scale",
    "barrier_prob",
    "z4_transform",
    "kernel_perturbation",
]

K_BRANCH = "K"
I_BRANCH = "I"

# validation hook: relative perturbation injected into the K kernel, used by
# `cli validate --inject-kernel-perturbation` to prove oracle sensitivity
_kernel_log_perturbation = 0.0


@contextlib.contextmanager
def kernel_perturbation(eps: float):
    """Temporarily multiply the K kernel by 1 + eps * z/(1+z).

    For sensitivity checks only: the factor depends on the argument so the
    perturbation cannot cancel inside kernel ratios.
    """
    global _kernel_log_perturbation
    old = _kernel_log_perturbation
    _kernel_log_perturbation = eps
    try:
        yield
    finally:
        _kernel_log_perturbation = old


def _perturb_log_k(z: float) -> float:
    if _kernel_log_perturbation == 0.0:
        return 0.0
    return math.log1p(_kernel_log_perturbation * z / (1.0 + z))


@dataclass(frozen=True)
class BesqParams:
    """Index nu, power exponent p; the dimension delta = 2(nu+1) is derived."""

    nu: float
    p: float

    def __post_init__(self):
        if not (math.isfinite(self.nu) and math.isfinite(self.p)):
            raise NonFiniteInputError(f"nu and p must be finite, got ({self.nu}, {self.p})")
        if self.nu < -1.0:
            raise RegimeViolationError(f"nu must be >= -1, got {self.nu}")
        if self.p <= -1.0:
            raise RegimeViolationError(f"p must be > -1, got {self.p}")

    @property
    def delta(self) -> float:
        return 2.0 * (self.nu + 1.0)

    @classmethod
    def from_delta(cls, delta: float, p: float) -> "BesqParams":
        return cls(nu=0.5 * delta - 1.0, p=p)


@dataclass(frozen=True)
class SigmaQuery:
    """One transform evaluation: start x, target y, variable lam (of exp(-(lam/2) Sigma))."""

    params: BesqParams
    x: float
    y: float
    lam: float

    def __post_init__(self):
        for name, v in (("x", self.x), ("y", self.y), ("lam", self.lam)):
            if not math.isfinite(v):
                raise NonFiniteInputError(f"{name} must be finite, got {v}")
        if self.x < 0 or self.y < 0:
            raise NonFiniteInputError("levels x, y must be >= 0")
        if self.lam < 0:
            raise NonFiniteInputError(f"lam must be >= 0, got {self.lam}")


@dataclass(frozen=True)
class BarrierQuery:
    """A SigmaQuery joint with a max barrier (a > x >= y) or min barrier (a < x <= y)."""

    base: SigmaQuery
    a: float

    def __post_init__(self):
        if not math.isfinite(self.a) or self.a < 0:
            raise NonFiniteInputError(f"barrier must be finite and >= 0, got {self.a}")
        x, y = self.base.x, self.base.y
        if not (self.a > x >= y or self.a < x <= y):
            raise OrientationError(
                f"barrier a={self.a} must satisfy a > x >= y (max) or a < x <= y (min), "
                f"got x={x}, y={y}"
            )

    @property
    def is_max_barrier(self) -> bool:
        return self.a > self.base.x


# ---------------------------------------------------------------------------
# kernel w and branch selection
# ---------------------------------------------------------------------------

def _order(params: BesqParams, branch: str) -> float:
    if branch == K_BRANCH:
        return abs(params.nu) / (params.p + 1.0)
    return params.nu / (params.p + 1.0)


def _zfactor(params: BesqParams, lam: float) -> float:
    return math.sqrt(lam) / (params.p + 1.0)


def resolve_branch(params: BesqParams, x: float, y: float) -> str:
    """Branch for the passage x -> y, validating the regime hypotheses."""
    if y <= x:
        return K_BRANCH
    ok = (
        params.nu >= 0.0
        or (params.p >= 0.0 and -1.0 < params.nu < 0.0)
        or (params.nu == -1.0 and params.p > 0.0)
    )
    if not ok:
        raise RegimeViolationError(
            f"upward passage (y={y} > x={x}) with nu={params.nu}, p={params.p} is outside "
            "the valid regime: it requires nu >= 0, or p >= 0 with -1 < nu < 0, "
            "or nu = -1 with p > 0"
        )
    return I_BRANCH


def kernel_w(params: BesqParams, x: float, lam: float, branch: str) -> float:
    """log w(x) for the requested branch; finite limits at x=0 where they exist."""
    if branch not in (K_BRANCH, I_BRANCH):
        raise ValueError(f"branch must be '{K_BRANCH}' or '{I_BRANCH}'")
    if not (math.isfinite(x) and x >= 0.0):
        raise NonFiniteInputError(f"x must be finite and >= 0, got {x}")
    if not (math.isfinite(lam) and lam > 0.0):
        raise NonFiniteInputError(f"lam must be finite and > 0 here, got {lam}")
    alpha = _order(params, branch)
    c = _zfactor(params, lam)
    if x == 0.0:
        if branch == I_BRANCH:
            # I_a(z) ~ (z/2)^a / Gamma(a+1) makes w finite and positive at 0
            return alpha * math.log(0.5 * c) - math.lgamma(alpha + 1.0)
        if params.nu < 0.0:
            # K_a(z) ~ Gamma(a)/2 * (z/2)^(-a): the powers of x cancel exactly
            return math.lgamma(alpha) - math.log(2.0) - alpha * math.log(0.5 * c)
        return math.inf  # ratio against it vanishes: level 0 unreachable for nu >= 0
    z = c * x ** (0.5 * (params.p + 1.0))
    if branch == I_BRANCH:
        return -0.5 * params.nu * math.log(x) + bessel.log_i(alpha, z)
    return -0.5 * params.nu * math.log(x) + bessel.log_k(alpha, z) + _perturb_log_k(z)


def _kernel_drift_term(params: BesqParams, t: float, lam: float, branch: str) -> float:
    """(p+1) * z * C'(z)/C(z) at z = z(t), written cancellation-free via ratios."""
    alpha = _order(params, branch)
    z = _zfactor(params, lam) * t ** (0.5 * (params.p + 1.0))
    if branch == I_BRANCH:
        return params.nu + (params.p + 1.0) * z * bessel.i_ratio(alpha, z)
    return -abs(params.nu) - (params.p + 1.0) * z * bessel.k_ratio(alpha, z)


# ---------------------------------------------------------------------------
# Laplace transforms of Sigma and of hitting times
# ---------------------------------------------------------------------------

def is_defective(params: BesqParams, x: float, y: float) -> bool:
    """True when the transform carries mass at Sigma = infinity (transient, downward)."""
    return params.nu > 0.0 and y < x


def log_laplace_sigma(q: SigmaQuery) -> float:
    """log E_x[exp(-(lam/2) Sigma)]; stays finite deep in the lam -> infinity regime."""
    if q.lam == 0.0 or q.x == q.y:
        return 0.0
    branch = resolve_branch(q.params, q.x, q.y)
    lw_x = kernel_w(q.params, q.x, q.lam, branch)
    lw_y = kernel_w(q.params, q.y, q.lam, branch)
    if math.isinf(lw_y):
        return -math.inf
    return lw_x - lw_y


def laplace_sigma(q: SigmaQuery) -> float:
    """E_x[exp(-(lam/2) Sigma)] as the kernel ratio w(x)/w(y).

    For nu > 0 and y < x the process may never reach y; the returned value is
    then the defective transform (see :func:`is_defective`).
    """
    return math.exp(log_laplace_sigma(q))


def laplace_hitting_time(nu: float, x: float, y: float, lam: float) -> float:
    """E_x[exp(-(lam/2) R_y)] for a squared Bessel process of index nu > -1."""
    if nu <= -1.0:
        raise RegimeViolationError(f"hitting-time transform requires nu > -1, got {nu}")
    return laplace_sigma(SigmaQuery(BesqParams(nu=nu, p=0.0), x=x, y=y, lam=lam))


def equivalent_hitting_params(q: SigmaQuery) -> tuple[float, float, float]:
    """(delta*, x*, y*) of the hitting time equal in law to Sigma under q.

    Sigma for (nu, p, x, y) has the same law as the first hitting time of y*
    by a squared Bessel process of dimension delta* started at x*.
    """
    p1 = q.params.p + 1.0
    nu_star = q.params.nu / p1
    return 2.0 * (nu_star + 1.0), q.x ** p1 / p1 ** 2, q.y ** p1 / p1 ** 2


def scaling_identity_check(params: BesqParams, y: float, lam: float) -> float:
    """|transform(0 -> y, lam) - transform(0 -> 1, lam * y^(p+1))|; zero in exact arithmetic."""
    lhs = laplace_sigma(SigmaQuery(params, x=0.0, y=y, lam=lam))
    rhs = laplace_sigma(SigmaQuery(params, x=0.0, y=1.0, lam=lam * y ** (params.p + 1.0)))
    return abs(lhs - rhs)


def mean_sigma(params: BesqParams, x: float, y: float) -> float:
    """E_x[Sigma] for transient upward passage: (y^(p+1)-x^(p+1)) / (2(p+1)(p+nu+1))."""
    if params.nu <= 0.0:
        raise RegimeViolationError(f"mean formula requires nu > 0, got nu={params.nu}")
    if not 0.0 <= x <= y:
        raise RegimeViolationError(f"mean formula requires 0 <= x <= y, got x={x}, y={y}")
    p1 = params.p + 1.0
    return (y ** p1 - x ** p1) / (2.0 * p1 * (params.p + params.nu + 1.0))


# ---------------------------------------------------------------------------
# scale function of the transformed diffusion and barrier laws
# ---------------------------------------------------------------------------

def _eta(branch: str, alpha: float, z: float) -> float:
    # log of the scale-density integrand 1/(z C_alpha(z)^2)
    logc = bessel.log_k(alpha, z) if branch == K_BRANCH else bessel.log_i(alpha, z)
    return -math.log(z) - 2.0 * logc


def _eta_zero_limit_shifted(branch: str, alpha: float) -> float:
    # limit of eta(z) - sigma*log(z) as z -> 0, sigma = 2a-1 (K) or -1-2a (I)
    if branch == K_BRANCH:
        # K_a(z) ~ Gamma(a)/2 (z/2)^-a for a > 0
        return -2.0 * (math.lgamma(alpha) - math.log(2.0) + alpha * math.log(2.0))
    # I_a(z) ~ (z/2)^a / Gamma(a+1)
    return 2.0 * (math.lgamma(alpha + 1.0) + alpha * math.log(2.0))


def _quad_checked(f, a: float, b: float, what: str) -> float:
    res, err = quad(f, a, b, epsabs=1e-14, epsrel=1e-11, limit=400)
    if not math.isfinite(res) or err > max(1e-12, 5e-8 * abs(res)):
        raise QuadratureFailureError(
            f"{what}: quadrature on [{a:.6g}, {b:.6g}] returned {res:.6g} "
            f"with error estimate {err:.3g}"
        )
    return res


def _log_scale_integral(branch: str, alpha: float, z1: float, z2: float) -> float:
    """log of the integral of 1/(z C_alpha(z)^2) dz over [z1, z2], 0 <= z1 < z2.

    The integrand spans an astronomical dynamic range, so the bulk is located
    with coarse probes, clipped at 300 nats below its peak (truncation below
    e^-300 relative), and integrated in scaled form.  An algebraic endpoint
    singularity at z=0 is removed by the substitution zeta = z^(sigma+1).
    """
    if not z2 > z1 >= 0.0:
        raise NonFiniteInputError(f"need 0 <= z1 < z2, got ({z1}, {z2})")
    pieces = []  # log values, combined at the end

    lo = z1
    if z1 == 0.0:
        gamma = 2.0 * alpha if branch == K_BRANCH else -2.0 * alpha
        if gamma <= 0.0:
            raise QuadratureFailureError(
                f"scale integrand not integrable at 0 for branch {branch}, order {alpha}"
            )
        zs = min(z2, 1.0)
        sigma = gamma - 1.0
        shift0 = _eta_zero_limit_shifted(branch, alpha)

        def g(zeta: float) -> float:
            z = zeta ** (1.0 / gamma)
            return math.exp(_eta(branch, alpha, z) - sigma * math.log(z) - shift0)

        val = _quad_checked(g, 0.0, zs ** gamma, "scale integral (singular piece)")
        pieces.append(shift0 - math.log(gamma) + math.log(val))
        lo = zs
        if lo >= z2:
            return pieces[0]

    # probe the remaining interval for the location of the mass
    npro = 160
    grid = np.geomspace(lo, z2, npro) if lo > 0 else np.linspace(lo, z2, npro)
    etas = np.array([_eta(branch, alpha, z) for z in grid])
    mx = float(etas.max())
    above = etas >= mx - 300.0
    i0 = int(np.argmax(above))
    i1 = len(grid) - 1 - int(np.argmax(above[::-1]))

    def edge(zin: float, zout: float) -> float:
        # bisect eta(z) = mx - 300 between an inside and an outside probe
        target = mx - 300.0
        for _ in range(80):
            zm = 0.5 * (zin + zout)
            if _eta(branch, alpha, zm) >= target:
                zin = zm
            else:
                zout = zm
            if abs(zin - zout) <= 1e-6 * (abs(zin) + 1e-300):
                break
        return zin

    zl = grid[i0] if i0 == 0 else edge(grid[i0], grid[i0 - 1])
    zr = grid[i1] if i1 == len(grid) - 1 else edge(grid[i1], grid[i1 + 1])

    def f(z: float) -> float:
        return math.exp(_eta(branch, alpha, z) - mx)

    val = _quad_checked(f, zl, zr, "scale integral")
    pieces.append(mx + math.log(val))
    if len(pieces) == 1:
        return pieces[0]
    m = max(pieces)
    return m + math.log(sum(math.exp(v - m) for v in pieces))


def scale_tilde(q: SigmaQuery, branch: str) -> float:
    """Scale function of the transformed diffusion: integral from 1 to x of dt/(t u(sqrt t)^2).

    Strictly increasing in x; computed by adaptive quadrature in the variable
    z(t) where the integrand is a pure Bessel expression.
    """
    if q.lam <= 0.0:
        raise NonFiniteInputError("scale_tilde requires lam > 0")
    alpha = _order(q.params, branch)
    c = _zfactor(q.params, q.lam)
    p1 = q.params.p + 1.0

    def zmap(t: float) -> float:
        return c * t ** (0.5 * p1)

    x = q.x
    if x == 1.0:
        return 0.0
    if x > 1.0:
        logval = _log_scale_integral(branch, alpha, zmap(1.0), zmap(x))
        sign = 1.0
    else:
        logval = _log_scale_integral(branch, alpha, zmap(x), zmap(1.0))
        sign = -1.0
    logval -= math.log(0.5 * p1)
    if logval > 700.0:
        raise QuadratureFailureError(
            f"scale_tilde overflows linear scale (log value {logval:.3g}); "
            "use barrier ratios instead"
        )
    return sign * math.exp(logval)


def joint_max_laplace(bq: BarrierQuery) -> float:
    """E_x[ 1{barrier not hit before y} * exp(-(lam/2) Sigma) ].

    Max barrier (a > x >= y): the event is {max X before R_y < a}; min barrier
    (a < x <= y): the event is {min X before R_y > a}.  Value is the kernel
    ratio times the scale-function increment ratio of the transformed diffusion.
    """
    q = bq.base
    if q.lam == 0.0:
        # plain barrier probability
        return barrier_prob(q.params.nu, q.x, q.y, bq.a)
    if q.x == q.y:
        return 1.0
    params = q.params
    if bq.is_max_barrier:
        branch = K_BRANCH
    else:
        branch = resolve_branch(params, q.x, q.y)  # validates I-branch regime
        if branch == K_BRANCH:  # x == y handled above; a < x <= y means I
            branch = I_BRANCH
    alpha = _order(params, branch)
    c = _zfactor(params, q.lam)
    p1 = params.p + 1.0

    def zmap(t: float) -> float:
        return c * t ** (0.5 * p1)

    if bq.is_max_barrier:
        z_num = (zmap(q.x), zmap(bq.a))
        z_den = (zmap(q.y), zmap(bq.a))
    else:
        if bq.a == 0.0 and alpha >= 0.0:
            # scale integral diverges at 0: the event has full mass
            return laplace_sigma(q)
        z_num = (zmap(bq.a), zmap(q.x))
        z_den = (zmap(bq.a), zmap(q.y))
    log_num = _log_scale_integral(branch, alpha, *z_num)
    log_den = _log_scale_integral(branch, alpha, *z_den)
    lw_x = kernel_w(params, q.x, q.lam, branch)
    lw_y = kernel_w(params, q.y, q.lam, branch)
    return math.exp(lw_x - lw_y + log_num - log_den)


def besq_scale(nu: float, x: float) -> float:
    """Natural scale function of the squared Bessel process of index nu."""
    if nu > 0.0:
        return -(x ** -nu) if x > 0.0 else -math.inf
    if nu == 0.0:
        return math.log(x) if x > 0.0 else -math.inf
    return x ** -nu if x > 0.0 else 0.0


def barrier_prob(nu: float, x: float, y: float, a: float) -> float:
    """Probability of reaching y before a, started from x between them."""
    if a == 0.0 and nu >= 0.0:
        return 1.0  # level 0 unreachable
    sx, sy, sa = besq_scale(nu, x), besq_scale(nu, y), besq_scale(nu, a)
    if math.isinf(sy):
        return 0.0
    return (sx - sa) / (sy - sa)


def conditional_max_laplace(bq: BarrierQuery) -> float:
    """E_x[exp(-(lam/2) Sigma) | barrier not hit before y]."""
    prob = barrier_prob(bq.base.params.nu, bq.base.x, bq.base.y, bq.a)
    if not math.isfinite(prob) or prob <= 1e-300:
        raise DegenerateConditioningError(
            f"conditioning event has probability {prob!r}; conditional law undefined"
        )
    if bq.base.lam == 0.0:
        return 1.0
    return joint_max_laplace(bq) / prob


# ---------------------------------------------------------------------------
# joint transform of (R_y, Sigma) by Riccati shooting
# ---------------------------------------------------------------------------

def _ode_drift(params: BesqParams, t: float, lam: float, branch: str) -> float:
    return 2.0 * (_kernel_drift_term(params, t, lam, branch) + 1.0)


def joint_r_sigma_laplace(q: SigmaQuery, r: float) -> float:
    """E_x[exp(-r R_y - (lam/2) Sigma)].

    The second factor beyond the kernel ratio is a ratio of a monotone
    r-harmonic function of the transformed diffusion, obtained by integrating
    the log-derivative (Riccati) form of its second-order ODE: outward from
    the regular singular point at 0 on the upward branch, inward from a point
    where the decaying solution dominates by e^40 on the downward branch.
    """
    if not (math.isfinite(r) and r >= 0.0):
        raise NonFiniteInputError(f"r must be finite and >= 0, got {r}")
    if r == 0.0:
        return laplace_sigma(q)
    if q.lam == 0.0:
        return laplace_hitting_time(q.params.nu, q.x, q.y, 2.0 * r)
    if q.x == q.y:
        return 1.0
    params = q.params
    branch = resolve_branch(params, q.x, q.y)
    c = _zfactor(params, q.lam)
    p1 = params.p + 1.0

    if branch == K_BRANCH:
        # start where the decaying solution dominates by e^40: z(t_hi) = z(x) + 20
        z_hi = c * q.x ** (0.5 * p1) + 20.0
        t_hi = (z_hi / c) ** (2.0 / p1)
        t_lo = max(q.y, 1e-10 * q.x)  # floor keeps the 1/t terms integrable when y = 0
        span = (t_hi, t_lo)
        record = [q.x, t_lo]
    else:
        t0 = max((q.x if q.x > 0.0 else q.y) * 1e-8, 1e-290)
        span = (t0, q.y)
        record = [q.x, q.y] if q.x > t0 else [q.y]

    def rhs(t, u):
        m = u[1]
        b = _ode_drift(params, t, q.lam, branch)
        return [m, (r - b * m) / (2.0 * t) - m * m]

    m0 = r / _ode_drift(params, span[0], q.lam, branch)
    sol = solve_ivp(rhs, span, [0.0, m0], t_eval=record, method="LSODA",
                    rtol=1e-11, atol=1e-13)
    if not sol.success or sol.y.shape[1] != len(record):
        raise OdeFailureError(f"joint transform ODE failed: {sol.message}")
    if len(record) == 2:
        log_ratio = sol.y[0][0] - sol.y[0][1]
    else:
        # x at (or below) the series start where the solution is normalized to 1
        log_ratio = -sol.y[0][0]
    lw_x = kernel_w(params, q.x, q.lam, branch)
    lw_y = kernel_w(params, q.y, q.lam, branch)
    return math.exp(lw_x - lw_y + log_ratio)


# ---------------------------------------------------------------------------
# jump measure transforms and the time-reversed example
# ---------------------------------------------------------------------------

def jump_measure_transform(params: BesqParams, x: float, lam: float, direction: str) -> float:
    """Laplace transform (in lam/2) of the jump tail of the level-indexed functional.

    direction="forward": (2/lam) w'(x)/w(x) on the upward kernel, nu >= 0.
    direction="reversed": -(2/lam) w'(1-x)/w(1-x) on the time-reversed kernel
    t^(nu/2) K(z(t)), nu in (0, 1], x in [0, 1).
    """
    if not (math.isfinite(lam) and lam > 0.0):
        raise NonFiniteInputError(f"lam must be > 0, got {lam}")
    p1 = params.p + 1.0
    c = _zfactor(params, lam)
    if direction == "forward":
        if params.nu < 0.0:
            raise RegimeViolationError(f"forward direction requires nu >= 0, got {params.nu}")
        if x < 0.0:
            raise NonFiniteInputError(f"x must be >= 0, got {x}")
        alpha = params.nu / p1
        if x == 0.0:
            if params.p > 0.0:
                return 0.0
            if params.p == 0.0:
                return 1.0 / (2.0 * (params.nu + 1.0))
            raise NonFiniteInputError("forward transform diverges at x=0 for p < 0")
        z = c * x ** (0.5 * p1)
        # (2/lam) w'/w = (p+1) z I_{a+1}(z)/I_a(z) / (lam x), cancellation-free
        return p1 * z * bessel.i_ratio(alpha, z) / (lam * x)
    if direction == "reversed":
        if not 0.0 < params.nu <= 1.0:
            raise RegimeViolationError(f"reversed direction requires nu in (0, 1], got {params.nu}")
        if not 0.0 <= x < 1.0:
            raise RegimeViolationError(f"reversed direction requires x in [0, 1), got {x}")
        alpha = params.nu / p1
        t = 1.0 - x
        z = c * t ** (0.5 * p1)
        return p1 * z * bessel.k_ratio(alpha, z) / (lam * t)
    raise ValueError(f"direction must be 'forward' or 'reversed', got {direction!r}")


def z4_transform(x: float, lam: float) -> float:
    """E[exp(-lam * Z4_x)] for the dimension-4 time-reversed functional on [0, 1).

    Z4_x is, in law, the accumulated level (p=1) of a 0-dimensional squared
    Bessel process run from 1 down to 1-x; its transform is that of a Brownian
    first hitting time of x/2.
    """
    if not 0.0 <= x < 1.0:
        raise RegimeViolationError(f"requires x in [0, 1), got {x}")
    if lam < 0.0:
        raise NonFiniteInputError(f"lam must be >= 0, got {lam}")
    if lam == 0.0 or x == 0.0:
        return 1.0
    return laplace_sigma(SigmaQuery(BesqParams(nu=-1.0, p=1.0), x=1.0, y=1.0 - x, lam=2.0 * lam))
