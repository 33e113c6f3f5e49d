"""pb4^q of a quadrilateral: closed forms, explicit pairs and certificates"""
from .certificates import (
    LOWER_TOL,
    UPPER_TOL,
    is_converging,
    region_label,
    region_mask,
    require_converging,
    require_passed,
    stokes_defect,
    verify_lower,
    verify_upper,
)
from .construction import (
    AdmissiblePair,
    FunctionPair,
    SideMasks,
    analytic_bracket,
    build_pair,
    check_admissible,
    is_supported_in,
    model_grid,
    perturb_pair,
    quad_profiles,
    side_masks,
)
from .formula import formula_limit_table, holder_region_bounds, pb4_formula, power_mean_value
from .invariance import INVARIANCE_TOL, symp_invariance_check
from .mesh import FineZone, GradedAxis, ModelMesh, graded_axis

__all__ = [
    "pb4_formula",
    "power_mean_value",
    "holder_region_bounds",
    "formula_limit_table",
    "FunctionPair",
    "AdmissiblePair",
    "SideMasks",
    "check_admissible",
    "model_grid",
    "ModelMesh",
    "GradedAxis",
    "FineZone",
    "graded_axis",
    "side_masks",
    "quad_profiles",
    "build_pair",
    "analytic_bracket",
    "perturb_pair",
    "is_supported_in",
    "verify_upper",
    "verify_lower",
    "stokes_defect",
    "region_mask",
    "region_label",
    "is_converging",
    "require_converging",
    "require_passed",
    "LOWER_TOL",
    "UPPER_TOL",
    "symp_invariance_check",
    "INVARIANCE_TOL",
]
