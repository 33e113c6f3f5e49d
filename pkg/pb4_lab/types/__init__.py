from .enums import CertificateStatus, Exactness, Extension, Region, Subcommand
from .exceptions import (
    CertificateError,
    ConfigurationError,
    GridMismatchError,
    MapError,
    Pb4LabError,
    ResolutionError,
    SupportError,
    UnsupportedError,
    ValidationError,
)

__all__ = [
    "CertificateStatus",
    "Exactness",
    "Extension",
    "Region",
    "Subcommand",
    "Pb4LabError",
    "ValidationError",
    "ConfigurationError",
    "GridMismatchError",
    "ResolutionError",
    "SupportError",
    "MapError",
    "UnsupportedError",
    "CertificateError",
]
