"""Small-deviation limits and the iterated-logarithm experiment.

The transform-scale rate and the small-ball constant are index-free: they
depend only on (p, x, y).  The empirical counterparts evaluate the closed-form
transforms directly on a lambda grid (inversion is never used for the
lambda -> infinity regime, which stays stable in log scale), or invert the
distribution function on a shrinking abscissa grid for the Tauberian check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import RegimeViolationError, UnstableInversionError
from .inversion import InversionConfig
from .laws import BesqParams, SigmaQuery, log_laplace_sigma
from .simulate import PathConfig, run_paths_levels

__all__ = [
    "SmallBallTarget",
    "small_ball_targets",
    "lt_rate_empirical",
    "tauberian_empirical",
    "lil_phi",
    "lil_experiment",
    "LilResult",
]


@dataclass(frozen=True)
class SmallBallTarget:
    """Index-free limits: transform log-rate, small-ball constant, liminf constant."""

    lt_rate: float
    sb_constant: float
    lil_constant: float


def small_ball_targets(params: BesqParams, x: float, y: float) -> SmallBallTarget:
    """Exact-arithmetic targets for the (p, x, y) small-deviation problem."""
    p = params.p
    if p <= 0:
        raise RegimeViolationError(f"small-deviation scaling requires p > 0, got {p}")
    if x < 0 or y < 0:
        raise RegimeViolationError("levels must be >= 0")
    p1 = p + 1.0
    gap = x ** (0.5 * p1) - y ** (0.5 * p1)
    return SmallBallTarget(
        lt_rate=-math.sqrt(2.0) / p1 * abs(gap),
        sb_constant=gap * gap / (2.0 * p1 * p1),
        lil_constant=1.0 / (2.0 * p1 * p1),
    )


def lt_rate_empirical(
    params: BesqParams, x: float, y: float, lambda_grid: Sequence[float]
) -> list[tuple[float, float]]:
    """(lam, lam^(-1/2) log E[exp(-lam Sigma)]) along the grid.

    The grid variable is the plain exponential-rate lam; in the library's
    half-rate convention that is the transform evaluated at 2 lam.
    """
    out = []
    for lam in lambda_grid:
        logval = log_laplace_sigma(SigmaQuery(params, x=x, y=y, lam=2.0 * lam))
        out.append((float(lam), logval / math.sqrt(lam)))
    return out


def tauberian_empirical(
    params: BesqParams,
    x: float,
    y: float,
    eps_grid: Sequence[float],
    cfg: InversionConfig | None = None,
) -> list[tuple[float, float]]:
    """(eps, eps^p log P[Sigma <= eps^p]) for the norm-scale grid eps.

    The probabilities sit ever deeper in the exp(-const/t) tail, so each point
    is inverted with a Talbot contour scaled to the tail depth and witnessed
    by a Gaver-Stehfest run; points where the two disagree by more than half a
    nat in log scale (or come out nonpositive) are dropped.  Callers read the
    smallest surviving eps as the closest stable approach to the limit.
    """
    from . import transforms
    from .inversion import GAVER_STEHFEST, TALBOT, invert

    out = []
    p = params.p
    p1 = p + 1.0
    sb = (x ** (0.5 * p1) - y ** (0.5 * p1)) ** 2 / (2.0 * p1 * p1)
    target = transforms.cdf_target(params, x, y)
    # the witness's reach into the tail scales with order * ln 2 nats
    witness_cfg = InversionConfig(method=GAVER_STEHFEST, order_or_nodes=96)
    for eps in sorted(eps_grid, reverse=True):
        t = float(eps) ** p
        if cfg is not None:
            main_cfg = cfg
        else:
            need = sb / t
            nodes = max(32, int(math.ceil(1.6 * need / 32.0)) * 32)
            digits = int((0.4 * nodes + 1.2 * need) / math.log(10.0)) + 50
            main_cfg = InversionConfig(method=TALBOT, order_or_nodes=min(nodes, 4096),
                                       working_precision_digits=digits)
        try:
            prob = invert(target, t, main_cfg)
            check = invert(target, t, witness_cfg)
        except UnstableInversionError:
            continue
        if prob <= 0.0 or check <= 0.0:
            continue
        if abs(math.log(prob) - math.log(check)) > 0.5:
            continue
        out.append((float(eps), t * math.log(prob)))
    return out


def lil_phi(y: float, p: float) -> float:
    """Normalizer y^(p+1) / log log y, defined for y > e."""
    ll = math.log(math.log(y))
    if ll <= 0:
        raise RegimeViolationError(f"normalizer needs log log y > 0, i.e. y > e; got {y}")
    return y ** (p + 1.0) / ll


@dataclass(frozen=True)
class LilResult:
    """Normalized series Sigma/phi per (path, level) and per-path tail minima."""

    y_grid: np.ndarray
    ratios: np.ndarray
    proxies: np.ndarray
    censored_fraction: float

    @property
    def median_proxy(self) -> float:
        return float(np.median(self.proxies))


def lil_experiment(
    params: BesqParams, cfg: PathConfig, y_grid: Sequence[float]
) -> LilResult:
    """Per-path liminf proxies: min over the tail half of the grid of Sigma/phi.

    A statistical smoke test of the almost-sure liminf constant, not a limit
    verification: the convergence is log-log slow, so acceptance bands around
    1/(2(p+1)^2) are deliberately wide.
    """
    if params.p <= 0:
        raise RegimeViolationError(f"requires p > 0, got {params.p}")
    grid = np.asarray(sorted(y_grid), dtype=float)
    if grid[0] <= math.e:
        raise RegimeViolationError("y grid must start above e for log log y > 0")
    sig_at, censored = run_paths_levels(params, 0.0, grid, cfg)
    phis = np.array([lil_phi(y, params.p) for y in grid])
    ratios = sig_at / phis
    tail = ratios[:, grid.size // 2:]
    ok = ~np.isnan(tail).any(axis=1)
    proxies = tail[ok].min(axis=1)
    return LilResult(grid, ratios, proxies, float(1.0 - ok.mean()))
