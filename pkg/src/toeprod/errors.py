"""Exception hierarchy shared by all modules."""


class ToeprodError(Exception):
    """Base class for numerical failures raised by this package."""


class QuadratureNotConverged(ToeprodError):
    pass


class NotRealValued(ToeprodError, ValueError):
    pass


class BandTooSmall(ToeprodError):
    pass


class DegenerateSection(ToeprodError, ValueError):
    pass


class NotHermitian(ToeprodError, ValueError):
    pass


class NoConvergence(ToeprodError):
    pass


class NotPositiveSemidefinite(ToeprodError, ValueError):
    pass


class Singular(ToeprodError):
    pass


class GNotNonnegative(ToeprodError, ValueError):
    pass


class EigenvalueInsideEssentialSpectrum(ToeprodError):
    pass


class OutsideDomain(ToeprodError, ValueError):
    pass


class DomainViolation(ToeprodError):
    pass


class BeyondSpectralEdge(ToeprodError, ValueError):
    pass


class DegenerateCount(UserWarning):
    """Warning: a Monte Carlo tail estimate saw zero exceedances."""
