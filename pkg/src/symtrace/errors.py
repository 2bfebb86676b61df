"""Exception types raised across the package."""


class NormSpecError(ValueError):
    """Malformed or out-of-range norm descriptor."""


class DimensionError(ValueError):
    """Vector or matrix shape does not match the norm dimension."""


class ZeroVectorError(ValueError):
    """The zero vector has no norming direction."""


class NonSmoothPointError(ValueError):
    """The norm is not differentiable at the requested point.

    ``margin`` carries the smoothness margin that triggered the refusal.
    """

    def __init__(self, message, margin=0.0):
        super().__init__(message)
        self.margin = margin


class NotSymmetricError(ValueError):
    """Operation needs a norm invariant under signed permutations."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature exhausted its node budget."""
