"""riemannpi: prime counting through the psi explicit formula over zeta zeros."""

from .precision import BigReal, PrecisionPolicy, DEFAULT_POLICY
from .errors import (
    RiemannpiError,
    ConfigurationError,
    DataIntegrityError,
    DomainError,
    RangeLimitError,
    ResourceError,
    PrecisionEscalationError,
)

__version__ = "0.1.0"

__all__ = [
    "BigReal",
    "PrecisionPolicy",
    "DEFAULT_POLICY",
    "RiemannpiError",
    "ConfigurationError",
    "DataIntegrityError",
    "DomainError",
    "RangeLimitError",
    "ResourceError",
    "PrecisionEscalationError",
    "__version__",
]
