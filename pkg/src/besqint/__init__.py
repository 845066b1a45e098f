"""Integral functionals of squared Bessel processes.

Closed-form Laplace transforms of the accumulated power of a squared Bessel
process up to a first passage time, their numerical inversion into
distributions and jump densities, an exact-transition Monte Carlo engine used
as an independent oracle, small-deviation asymptotics, and interest-rate
derivative pricing built on top.
"""

__version__ = "0.1.0"

from .bessel import BesselEval, bessel_i, bessel_k, log_derivative_i, log_derivative_k
from .laws import (
    BarrierQuery,
    BesqParams,
    SigmaQuery,
    conditional_max_laplace,
    equivalent_hitting_params,
    joint_max_laplace,
    joint_r_sigma_laplace,
    kernel_w,
    laplace_hitting_time,
    laplace_sigma,
    mean_sigma,
    jump_measure_transform,
    scale_tilde,
    scaling_identity_check,
    z4_transform,
)
from .inversion import InversionConfig, cdf_sigma, invert, invert_checked, jump_density
from .simulate import PathConfig, PathSummaries, besq_step, estimate_laplace, run_paths
from .asymptotics import SmallBallTarget, lil_experiment, lt_rate_empirical, small_ball_targets
from .pricing import (
    OptionSpec,
    price_digital,
    price_put_accumulated,
    price_put_max_rate,
    small_strike_asymptote,
)

__all__ = [
    "__version__",
    "BesselEval", "bessel_i", "bessel_k", "log_derivative_i", "log_derivative_k",
    "BesqParams", "SigmaQuery", "BarrierQuery",
    "kernel_w", "laplace_sigma", "laplace_hitting_time", "equivalent_hitting_params",
    "scale_tilde", "joint_max_laplace", "conditional_max_laplace",
    "joint_r_sigma_laplace", "mean_sigma", "jump_measure_transform",
    "scaling_identity_check", "z4_transform",
    "InversionConfig", "invert", "invert_checked", "cdf_sigma", "jump_density",
    "PathConfig", "PathSummaries", "besq_step", "run_paths", "estimate_laplace",
    "SmallBallTarget", "small_ball_targets", "lt_rate_empirical", "lil_experiment",
    "OptionSpec", "price_digital", "price_put_accumulated", "price_put_max_rate",
    "small_strike_asymptote",
]
