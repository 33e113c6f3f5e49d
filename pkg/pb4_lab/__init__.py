"""
pb4-lab - numerical lab for L_q Poisson bracket invariants of quadrilaterals and curves

Closed-form values, explicit admissible pairs with computed bracket norms,
certificates, flexibility and high-codimension constructions, and a direct
optimizer over discretized pairs.
"""

__version__ = "0.1.0"

from .curves import pb4_curve_formula, separating_pair
from .optimizer import minimize, rectangle_model
from .quadrilateral import build_pair, pb4_formula, verify_lower, verify_upper
from .types.config import CylinderModel, GridPolicy, HighDimSpec, LabSettings, QuadProblem
from .types.enums import CertificateStatus, Exactness, Region, Subcommand
from .types.exceptions import Pb4LabError

__all__ = [
    "pb4_formula",
    "pb4_curve_formula",
    "build_pair",
    "verify_upper",
    "verify_lower",
    "separating_pair",
    "rectangle_model",
    "minimize",
    "QuadProblem",
    "CylinderModel",
    "GridPolicy",
    "HighDimSpec",
    "LabSettings",
    "CertificateStatus",
    "Exactness",
    "Region",
    "Subcommand",
    "Pb4LabError",
]
