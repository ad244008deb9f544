"""Exception and warning types shared across the package."""


class PoleError(ValueError):
    """Argument sits on a pole of a Gamma-type function."""


class NonConvergenceError(ArithmeticError):
    """A series or quadrature failed to reach its tolerance."""


class UnsupportedParameterError(ValueError):
    """Parameters fall outside the supported evaluation domain."""


class StencilError(ValueError):
    """Finite-difference stencil overlaps a non-smooth point."""


class GridTooCoarseError(ArithmeticError):
    """Quadrature grid cannot resolve the integrand to tolerance."""


class ReducedAccuracyWarning(UserWarning):
    """Result returned with fewer reliable digits than requested."""
