class Pb4LabError(Exception):
    """Base exception for pb4-lab"""
    pass


class ValidationError(Pb4LabError):
    """Raised when a parameter violates a precondition"""
    pass


class ConfigurationError(Pb4LabError):
    """Raised when a run configuration is malformed or incomplete"""
    pass


class GridMismatchError(Pb4LabError):
    """Raised when fields or masks do not share a grid"""
    pass


class ResolutionError(Pb4LabError):
    """Raised when a grid is too coarse, too small or misaligned for a construction"""
    pass


class SupportError(Pb4LabError):
    """Raised when a function is not supported where a construction requires it"""
    pass


class MapError(Pb4LabError):
    """Raised when a coordinate map fails its area-preservation check"""
    pass


class UnsupportedError(Pb4LabError):
    """Raised when no value is defined for the requested case"""
    pass


class CertificateError(Pb4LabError):
    """Raised when a certificate or convergence check fails"""
    pass
