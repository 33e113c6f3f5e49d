"""Numeric substrate: grids, fields, brackets, norms, maps and field I/O"""
from .calculus import (
    gradient_magnitude,
    hamiltonian_vector_field,
    integrate,
    lq_integral,
    lq_norm,
    modulus_of_continuity,
    poisson_bracket,
)
from .field_io import dump_field, dumps_field, load_field, loads_field
from .grid import (
    INF,
    STANDARD_DENSITY,
    ExtendedExponent,
    Grid2D,
    NodeMask,
    ScalarField,
    SymplecticDensity,
    aligned_axis,
    constant_field,
    make_grid,
    rectangle_mask,
    sample,
)
from .maps import AffineMap, AreaPreservingMap, CylinderToAnnulusMap, image_grid, transport
from .parallel import parallel_map, thread_count

__all__ = [
    "INF",
    "STANDARD_DENSITY",
    "ExtendedExponent",
    "Grid2D",
    "NodeMask",
    "ScalarField",
    "SymplecticDensity",
    "aligned_axis",
    "constant_field",
    "make_grid",
    "rectangle_mask",
    "sample",
    "poisson_bracket",
    "hamiltonian_vector_field",
    "gradient_magnitude",
    "integrate",
    "lq_integral",
    "lq_norm",
    "modulus_of_continuity",
    "dump_field",
    "dumps_field",
    "load_field",
    "loads_field",
    "AreaPreservingMap",
    "AffineMap",
    "CylinderToAnnulusMap",
    "image_grid",
    "transport",
    "parallel_map",
    "thread_count",
]
