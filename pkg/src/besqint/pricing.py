"""Interest-rate derivative prices driven by the accumulated-power functional.

The short rate is X^p; one unit of accumulated interest is exp(Sigma), and
payoffs settle at the first passage time of the level y.  Discounting uses
exp(-rate * Sigma) with rate = 1 by default (rescale Sigma uniformly for
other flat rates).

Digital prices are Laplace inversions of (1/mu) E[exp(-(mu+rate) Sigma)]; the
1/mu factor comes from integrating exp(-mu k) over k >= Sigma.  Put prices on
accumulated interest integrate exp(u) D(u) du up to log K, which reproduces
E[(K - exp(Sigma))^+ exp(-Sigma)] exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import quad

from . import simulate
from .errors import NonFiniteInputError, OrientationError, QuadratureFailureError
from .inversion import InversionConfig, cdf_sigma, invert, invert_checked
from .laws import BarrierQuery, BesqParams, SigmaQuery, joint_max_laplace
from .transforms import digital_target

__all__ = [
    "OptionSpec",
    "price_digital",
    "price_digital_report",
    "price_put_accumulated",
    "price_put_accumulated_report",
    "small_strike_asymptote",
    "small_strike_series",
    "price_put_max_rate",
    "price_put_max_rate_report",
    "digital_consistency_report",
    "mc_check_digital",
    "mc_check_put",
    "mc_check_max_put",
]

DIGITAL = "digital"
PUT_ACCUMULATED = "put_accumulated"
PUT_MAX_RATE = "put_max_rate"

# Gauss-Legendre panel used for the put integral (nodes on [-1, 1])
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


@dataclass(frozen=True)
class OptionSpec:
    """Contract descriptor: payoff kind, process parameters, start/target levels."""

    kind: str
    params: BesqParams
    x: float
    y: float
    strike: float | None = None
    rate: float = 1.0

    def __post_init__(self):
        if self.kind not in (DIGITAL, PUT_ACCUMULATED, PUT_MAX_RATE):
            raise ValueError(f"unknown option kind {self.kind!r}")
        if self.kind == PUT_ACCUMULATED and (self.strike is None or self.strike < 1.0):
            raise NonFiniteInputError("accumulated-interest put needs strike K >= 1")
        if self.kind == PUT_MAX_RATE:
            if self.strike is None or not self.y < self.x < self.strike:
                raise OrientationError("max-rate put needs y < x < K")
        if self.rate <= 0:
            raise NonFiniteInputError(f"discount rate must be > 0, got {self.rate}")


def _tail_config(spec: OptionSpec, u: float) -> InversionConfig:
    """Talbot configuration able to resolve the exp(-const/u) tail at abscissa u.

    The contour scale r t = 2M/5 must dominate the saddle position const/u,
    and the working precision must absorb both exp(r t) and the value itself.
    """
    sb = -small_strike_asymptote(spec)
    need = sb / max(u, 1e-12)
    nodes = max(32, int(math.ceil(1.6 * need / 32.0)) * 32)
    nodes = min(nodes, 4096)
    digits = int((0.4 * nodes + 1.2 * need) / math.log(10.0)) + 50
    return InversionConfig(method="talbot", order_or_nodes=nodes,
                           working_precision_digits=digits)


def price_digital(spec: OptionSpec, k: float, cfg: InversionConfig | None = None) -> float:
    """Price of the payoff 1{Sigma <= k} at time R_y, discounted by exp(-rate Sigma)."""
    if k < 0:
        raise NonFiniteInputError(f"threshold must be >= 0, got {k}")
    if k == 0.0:
        return 0.0 if spec.x != spec.y else 1.0
    target = digital_target(spec.params, spec.x, spec.y, spec.rate)
    val = invert(target, k, cfg if cfg is not None else _tail_config(spec, k))
    return min(max(val, 0.0), 1.0)


def price_digital_report(
    spec: OptionSpec, k: float, cfg: InversionConfig | None = None
) -> tuple[float, float]:
    """(price, error estimate), the latter the cross-method inversion discrepancy."""
    if k <= 0.0:
        return price_digital(spec, k, cfg), 0.0
    target = digital_target(spec.params, spec.x, spec.y, spec.rate)
    val, disc = invert_checked(target, k, cfg if cfg is not None else _tail_config(spec, k))
    return min(max(val, 0.0), 1.0), disc


def _put_integral(spec: OptionSpec, log_k: float, cfg: InversionConfig | None) -> float:
    # integral of e^u D(u) du over [0, log K]: D spans many orders of magnitude
    # (D(u) ~ exp(-const/u) near 0), so integrate over geometric panels from the
    # top and stop once a panel is negligible
    target = digital_target(spec.params, spec.x, spec.y, spec.rate)
    total = 0.0
    hi = log_k
    for _ in range(60):
        lo = hi / 2.0
        mid = 0.5 * (hi + lo)
        half = 0.5 * (hi - lo)
        panel_cfg = cfg if cfg is not None else _tail_config(spec, lo)
        vals = [
            math.exp(u) * max(invert(target, u, panel_cfg), 0.0)
            for u in mid + half * _GL_NODES
        ]
        panel = half * float(np.dot(_GL_WEIGHTS, vals))
        total += panel
        hi = lo
        if panel <= 1e-13 * max(total, 1e-300) or hi < 1e-308:
            break
    return total


def price_put_accumulated(spec: OptionSpec, cfg: InversionConfig | None = None) -> float:
    """E[(K - exp(Sigma))^+ exp(-rate Sigma)] as the integral of e^u D(u) up to log K."""
    K = spec.strike
    if K == 1.0:
        return 0.0
    return _put_integral(spec, math.log(K), cfg)


def price_put_accumulated_report(
    spec: OptionSpec, cfg: InversionConfig | None = None
) -> tuple[float, float]:
    """(price, error estimate).

    The error estimate propagates the cross-method discrepancy of the digital
    integrand, sampled at the top of the integration range where the mass sits,
    through the integral's length.
    """
    price = price_put_accumulated(spec, cfg)
    lk = math.log(spec.strike)
    if lk == 0.0:
        return price, 0.0
    target = digital_target(spec.params, spec.x, spec.y, spec.rate)
    _, disc = invert_checked(target, lk, cfg if cfg is not None else _tail_config(spec, lk))
    return price, disc * (spec.strike - 1.0)


def small_strike_asymptote(spec: OptionSpec) -> float:
    """Limit of log K * log P(K) as K decreases to 1 (how fast the put expires worthless)."""
    p1 = spec.params.p + 1.0
    gap = spec.x ** (0.5 * p1) - spec.y ** (0.5 * p1)
    return -gap * gap / (2.0 * p1 * p1)


def small_strike_series(
    spec: OptionSpec, log_strikes: Sequence[float], cfg: InversionConfig | None = None
) -> list[tuple[float, float]]:
    """(log K, log K * log P) along a grid of small log-strikes."""
    out = []
    for lk in sorted(log_strikes, reverse=True):
        price = _put_integral(spec, float(lk), cfg)
        if price <= 0:
            continue
        out.append((float(lk), float(lk) * math.log(price)))
    return out


def price_put_max_rate(spec: OptionSpec) -> float:
    """Price of (K - max X before R_y)^+ at R_y, discounted by exp(-Sigma).

    The barrier decomposition integrates the joint transform at the discount
    rate over barrier levels a in [x, K]; the kernel ratio is a-independent.
    """
    return price_put_max_rate_report(spec)[0]


def price_put_max_rate_report(spec: OptionSpec) -> tuple[float, float]:
    """(price, quadrature error estimate) for the max-rate put."""
    K = spec.strike
    lam = 2.0 * spec.rate
    q = SigmaQuery(spec.params, spec.x, spec.y, lam)

    def integrand(a: float) -> float:
        if a <= spec.x:
            return 0.0
        return joint_max_laplace(BarrierQuery(q, a))

    val, err = quad(integrand, spec.x, K, epsabs=1e-10, epsrel=1e-8, limit=100)
    if not math.isfinite(val) or err > max(1e-8, 1e-5 * abs(val)):
        raise QuadratureFailureError(
            f"max-rate put quadrature error {err:.3g} for value {val:.6g}"
        )
    return val, err


def digital_consistency_report(
    spec: OptionSpec, z: float, cfg: InversionConfig | None = None
) -> tuple[float, float]:
    """Both sides of the printed digital/CDF identity, which do not agree.

    Returns (integral of e^u D(u) du over [0, z],  P[Sigma <= z]).  The first
    equals E[1{Sigma<=z}(K e^{-Sigma}-1)]-type put mass, not the distribution
    function; both are exposed so the gap is measurable rather than assumed.
    """
    lhs = _put_integral(spec, z, cfg)
    rhs = cdf_sigma(spec.params, spec.x, spec.y, z, cfg)
    return lhs, rhs


# ---------------------------------------------------------------------------
# Monte Carlo cross-checks
# ---------------------------------------------------------------------------

def mc_check_digital(
    spec: OptionSpec, k: float, cfg: simulate.PathConfig
) -> simulate.PayoffEstimate:
    def payoff(s):
        sig = np.where(np.isnan(s.sigma), np.inf, s.sigma)
        return (sig <= k) * np.exp(-spec.rate * np.where(np.isinf(sig), 0.0, sig))

    return simulate.estimate_payoff(spec.params, spec.x, spec.y, cfg, payoff,
                                    censored_payoff_bound=0.0)


def mc_check_put(spec: OptionSpec, cfg: simulate.PathConfig) -> simulate.PayoffEstimate:
    K = spec.strike

    def payoff(s):
        sig = np.where(np.isnan(s.sigma), np.inf, s.sigma)
        val = np.clip(K - np.exp(sig), 0.0, None) * np.exp(-spec.rate * sig)
        return np.where(np.isinf(sig), 0.0, val)

    return simulate.estimate_payoff(spec.params, spec.x, spec.y, cfg, payoff,
                                    censored_payoff_bound=0.0)


def mc_check_max_put(spec: OptionSpec, cfg: simulate.PathConfig) -> simulate.PayoffEstimate:
    K = spec.strike
    # the sampled running max understates the true one by ~ 0.5826 sigma sqrt(h)
    # (diffusion continuity correction); compensate inside the payoff
    beta = 0.5826

    def payoff(s):
        sig = np.where(np.isnan(s.sigma), np.inf, s.sigma)
        m = s.max_level + beta * 2.0 * np.sqrt(np.maximum(s.max_level, 0.0)) * math.sqrt(cfg.step)
        val = np.clip(K - m, 0.0, None) * np.exp(-spec.rate * sig)
        return np.where(np.isinf(sig), 0.0, val)

    return simulate.estimate_payoff(spec.params, spec.x, spec.y, cfg, payoff,
                                    censored_payoff_bound=0.0)
