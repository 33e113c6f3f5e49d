"""pb4^q of simple closed curves: separating (cylinder model) and non-separating (flat torus)"""
from .cylinder import (
    AnnulusModel,
    bump_pair,
    component_areas,
    curve_row,
    cylinder_grid,
    cylinder_to_annulus,
    field_on_curve,
)
from .formula import pb4_curve_formula
from .pairs import (
    SeparatingPair,
    component_stokes,
    curve_report,
    default_partition,
    nonseparating_pair,
    partition_independence,
    rotate_partition,
    separating_pair,
    shifted_points,
)

__all__ = [
    "pb4_curve_formula",
    "AnnulusModel",
    "cylinder_grid",
    "curve_row",
    "component_areas",
    "cylinder_to_annulus",
    "bump_pair",
    "field_on_curve",
    "SeparatingPair",
    "default_partition",
    "rotate_partition",
    "separating_pair",
    "component_stokes",
    "curve_report",
    "partition_independence",
    "nonseparating_pair",
    "shifted_points",
]
