"""Poisson brackets, Hamiltonian vector fields, weighted integrals and L_q norms"""
import logging
import math
from typing import Optional, Tuple

import numpy as np
from scipy import ndimage

from ..types.exceptions import ValidationError
from .grid import (
    STANDARD_DENSITY,
    ExponentLike,
    ExtendedExponent,
    NodeMask,
    ScalarField,
    SymplecticDensity,
)
from .stencils import stencil_for

logger = logging.getLogger(__name__)


def poisson_bracket(
    F: ScalarField, G: ScalarField, density: SymplecticDensity = STANDARD_DENSITY
) -> ScalarField:
    """
    {F, G} = -(F_x G_y - F_y G_x) / w, so that {F, G} w dx^dy = -dF ^ dG.

    Swapping F and G evaluates the same two products in the opposite
    order of subtraction, so antisymmetry holds bit for bit.
    """
    F.grid.require_same(G.grid)
    stencil = stencil_for(F.grid)
    Fx, Fy = stencil.gradient(F.values)
    Gx, Gy = stencil.gradient(G.values)
    w = density.on(F.grid)
    return ScalarField(F.grid, -(Fx * Gy - Fy * Gx) / w)


def hamiltonian_vector_field(
    F: ScalarField, density: SymplecticDensity = STANDARD_DENSITY
) -> Tuple[ScalarField, ScalarField]:
    """sgrad F with w(sgrad F, .) = -dF, i.e. (-F_y, F_x) / w"""
    stencil = stencil_for(F.grid)
    Fx, Fy = stencil.gradient(F.values)
    w = density.on(F.grid)
    return ScalarField(F.grid, -Fy / w), ScalarField(F.grid, Fx / w)


def gradient_magnitude(F: ScalarField) -> ScalarField:
    Fx, Fy = stencil_for(F.grid).gradient(F.values)
    return ScalarField(F.grid, np.hypot(Fx, Fy))


def _mask_values(f: ScalarField, mask: Optional[NodeMask]) -> Optional[np.ndarray]:
    if mask is None:
        return None
    f.grid.require_same(mask.grid, "field and mask")
    return mask.values


def integrate(
    f: ScalarField, mask: Optional[NodeMask] = None, density: SymplecticDensity = STANDARD_DENSITY
) -> float:
    """Signed midpoint quadrature of f * w over the masked nodes"""
    selected = _mask_values(f, mask)
    integrand = f.values * density.on(f.grid)
    if selected is not None:
        integrand = np.where(selected, integrand, 0.0)
    return float(np.sum(integrand) * f.grid.cell_area)


def lq_integral(
    f: ScalarField,
    q: float,
    density: SymplecticDensity = STANDARD_DENSITY,
    mask: Optional[NodeMask] = None,
) -> float:
    """The q-th power of the L_q norm, for finite q"""
    if math.isinf(q):
        raise ValidationError("lq_integral needs a finite exponent")
    return integrate(f.with_values(np.abs(f.values) ** q), mask, density)


def lq_norm(
    f: ScalarField,
    q: ExponentLike,
    density: SymplecticDensity = STANDARD_DENSITY,
    mask: Optional[NodeMask] = None,
) -> float:
    """(integral of |f|^q w)^(1/q) by the midpoint rule; q = INF gives max |f|"""
    exponent = ExtendedExponent.coerce(q)
    if exponent.is_inf:
        selected = _mask_values(f, mask)
        values = np.abs(f.values) if selected is None else np.abs(f.values[selected])
        return float(values.max()) if values.size else 0.0
    return lq_integral(f, exponent.value, density, mask) ** (1.0 / exponent.value)


def modulus_of_continuity(f: ScalarField, radius: float) -> float:
    """
    Sampled modulus of continuity at the given radius.

    Largest oscillation (max - min) of f over windows of nodes whose
    axis-aligned bounding box has diagonal at most radius. Every pair in
    such a window is within radius, so the value never exceeds the
    pairwise modulus.
    """
    if radius < 0:
        raise ValidationError(f"radius must be nonnegative, got {radius}")
    grid = f.grid
    side = radius / math.sqrt(2.0)
    size = (int(math.floor(side / grid.hy + 1e-9)) + 1, int(math.floor(side / grid.hx + 1e-9)) + 1)
    modes = ("wrap" if grid.periodic_y else "nearest", "wrap" if grid.periodic_x else "nearest")
    upper = ndimage.maximum_filter(f.values, size=size, mode=modes)
    lower = ndimage.minimum_filter(f.values, size=size, mode=modes)
    logger.debug("modulus window %s nodes at radius %g", size, radius)
    return float(np.max(upper - lower))
