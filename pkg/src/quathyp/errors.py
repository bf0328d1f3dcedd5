"""Exception types shared across the package."""


class QuatHypError(Exception):
    """Base class for package errors."""


class DimensionMismatch(QuatHypError, ValueError):
    pass


class RankDeficient(QuatHypError, ValueError):
    pass


class NotInGroup(QuatHypError, ValueError):
    """Matrix fails the indefinite form check."""


class DegenerateRadius(QuatHypError, ValueError):
    """Cartan radius too small for stable K-components."""


class NonUnitQuaternion(QuatHypError, ValueError):
    pass


class PoleAtNonpositiveInteger(QuatHypError, ValueError):
    pass


class ParameterPole(QuatHypError, ValueError):
    pass


class SpectralPole(QuatHypError, ValueError):
    """Spectral parameter sits on a pole of a c-function or of the second solution."""


class QuadratureNonConvergence(QuatHypError, RuntimeError):
    pass
