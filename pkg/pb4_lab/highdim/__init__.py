"""Vanishing of pb4^q in high codimension"""
from .vanishing import (
    VanishingProfile,
    bracket_bound,
    decay_curve,
    dense_grad_estimate,
    field_lq_bound,
    field_lq_estimate,
    grad_lq_bound,
    grad_lq_estimate,
    product_lower_bound,
    unit_sphere_volume,
    vanishing_profile,
)

__all__ = [
    "VanishingProfile",
    "vanishing_profile",
    "unit_sphere_volume",
    "grad_lq_estimate",
    "grad_lq_bound",
    "field_lq_estimate",
    "field_lq_bound",
    "decay_curve",
    "bracket_bound",
    "dense_grad_estimate",
    "product_lower_bound",
]
