from enum import Enum


class Exactness(Enum):
    EXACT = "exact"
    LOWER_BOUND_ONLY = "lower_bound_only"


class CertificateStatus(Enum):
    LOWER_RESPECTED = "lower_respected"
    GAP = "gap"


class Extension(Enum):
    """How a piecewise profile continues beyond its end knots"""
    CONSTANT = "constant"
    LINEAR = "linear"


class Region(Enum):
    """Where a Stokes integral is taken; MASK is any other node set"""
    INSIDE = "inside"
    COMPLEMENT = "complement"
    MASK = "mask"


class Subcommand(Enum):
    FORMULA = "formula"
    VERIFY_UPPER = "verify-upper"
    VERIFY_LOWER = "verify-lower"
    STOKES = "stokes"
    FLEX = "flex"
    HIGHDIM_DECAY = "highdim-decay"
    CURVE = "curve"
    OPTIMIZE = "optimize"
    INVARIANCE = "invariance"
