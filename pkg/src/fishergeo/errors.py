"""Exception hierarchy shared by the library and the CLI."""


class FisherGeometryError(Exception):
    """Base class for all library errors."""


class DomainError(FisherGeometryError, ValueError):
    """An input lies outside the domain of the requested operation."""


class InvalidParameter(DomainError):
    pass


class DimensionMismatch(DomainError):
    pass


class DegenerateGeodesic(DomainError):
    pass


class InvalidCovariance(DomainError):
    pass


class InvalidMetric(DomainError):
    pass


class NotOnSubmanifold(DomainError):
    pass


class NumericFailure(FisherGeometryError, RuntimeError):
    """A numerical procedure (quadrature, iteration) failed to converge."""
