"""Exception and warning types shared across the library."""


class BesqintError(Exception):
    """Base class for all library errors."""


class NonFiniteInputError(BesqintError, ValueError):
    """An argument is NaN/inf or outside the function's domain."""


class UnsupportedOrderError(BesqintError, ValueError):
    """Bessel order outside the supported range (I needs order >= -1)."""


class RegimeViolationError(BesqintError, ValueError):
    """Parameters fall outside the hypotheses under which a formula is valid."""


class OrientationError(BesqintError, ValueError):
    """Barrier level inconsistent with the start/target orientation."""


class DegenerateConditioningError(BesqintError, ArithmeticError):
    """Conditioning event has (numerically) zero probability."""


class QuadratureFailureError(BesqintError, ArithmeticError):
    """Adaptive quadrature did not converge to the requested tolerance."""


class OdeFailureError(BesqintError, ArithmeticError):
    """ODE integration for the joint transform failed."""


class UnstableInversionError(BesqintError, ArithmeticError):
    """Cross-method disagreement (or non-physical output) in Laplace inversion."""


class LinearOverflowError(BesqintError, OverflowError):
    """A log-scale quantity was requested in linear scale but overflows float64."""


class RngFailureError(BesqintError, RuntimeError):
    """Random number generation failed."""


class CensoredMajorityWarning(UserWarning):
    """More than half of the simulated paths hit the censoring horizon."""
