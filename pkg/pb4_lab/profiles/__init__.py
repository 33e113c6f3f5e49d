"""One-dimensional profiles and their moment quadrature"""
from .base import (
    PiecewiseProfile,
    Profile1D,
    RadialDecayProfile,
    check_radial_base,
    cutoff,
    default_radial_base,
    identity_window,
    mollify,
    plateau,
    profile_from_dict,
    profile_from_json,
    profile_to_json,
    radial_decay,
    ramp_u1,
    smooth_step,
)
from .quadrature import (
    decay_bound,
    field_moment_bound,
    integrate_piecewise,
    profile_lq_of_derivative,
    radial_moment,
    radial_volume_moment,
    sup_derivative,
)

__all__ = [
    "Profile1D",
    "PiecewiseProfile",
    "RadialDecayProfile",
    "smooth_step",
    "cutoff",
    "plateau",
    "identity_window",
    "ramp_u1",
    "mollify",
    "default_radial_base",
    "check_radial_base",
    "radial_decay",
    "profile_from_dict",
    "profile_from_json",
    "profile_to_json",
    "integrate_piecewise",
    "profile_lq_of_derivative",
    "radial_moment",
    "radial_volume_moment",
    "sup_derivative",
    "decay_bound",
    "field_moment_bound",
]
