"""Custom exceptions for the application."""

from typing import Optional


class AppError(Exception):
    """Base exception for all application-specific exceptions."""

    pass


class GeometryError(AppError):
    """Raised when a numerical contract of a geometric operation fails."""

    pass


class DimensionError(GeometryError):
    """Raised when operand shapes do not match."""

    pass


class TangencyError(GeometryError):
    """Raised when a vector or matrix is not tangent where it must be."""

    def __init__(self, message: str, residual: Optional[float] = None):
        super().__init__(message)
        self.residual = residual


class DomainError(GeometryError):
    """Raised when a point lies outside the domain of a field or chart."""

    pass


class MetricError(GeometryError):
    """Raised when a conformal factor is not positive."""

    pass


class InvarianceError(GeometryError):
    """Raised when an operator does not preserve the subspace it is restricted to."""

    def __init__(self, message: str, residual: Optional[float] = None):
        super().__init__(message)
        self.residual = residual


class DegeneracyError(GeometryError):
    """Raised when a basis or projector has the wrong rank."""

    pass


class PreconditionError(GeometryError):
    """Raised when an operation is called outside its stated preconditions."""

    pass


class ServiceError(AppError):
    """Raised when a service operation fails due to business logic."""

    pass


class ConfigurationError(ServiceError):
    """Raised when a run configuration names unknown suites, fields or keys."""

    pass


class ReportError(ServiceError):
    """Raised when a report cannot be written or read."""

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(message)
        self.path = path
