"""
Commuting approximants of a non-commuting pair.

On every cell, F~ = phi F + (1 - phi) F(x0) is constant on Q2 and G~ = psi G
lives in Q2, so where G~ is non-zero F~ is locally constant and the pair
commutes. On the grid, phi = 1 on the outer node ring of each cell, and
psi vanishes on the next one; the one-ring gap makes the central-stencil
bracket vanish exactly.
"""
import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..core.calculus import lq_norm, modulus_of_continuity, poisson_bracket
from ..core.grid import Bounds, ExponentLike, ExtendedExponent, Grid2D, ScalarField
from ..core.parallel import parallel_map
from ..profiles.base import smooth_step
from ..types.exceptions import SupportError, UnsupportedError
from ..types.responses import FlexReport
from ..validation.preconditions import require_that
from .cells import AxisLayout, CellDecomposition, decompose, layout

logger = logging.getLogger(__name__)

SUPPORT_TOL = 1e-8


def _thresholds(rings: int, h: float) -> Tuple[float, float, float, float]:
    """Edge distances (a, b, c, d): phi drops between a and b, psi rises between c and d"""
    a = 0.6 * h
    span = rings * h - 1.7 * h
    b = a + 0.5 * span
    c = b + h
    d = rings * h - 0.1 * h
    return a, b, c, d


def _ramp(lo: float, hi: float, distance: np.ndarray) -> np.ndarray:
    # exact 0 and 1 outside (lo, hi); stencil equality depends on it
    step = smooth_step(lo, hi, 0.25 * (hi - lo)).value(distance)
    return np.where(distance <= lo, 0.0, np.where(distance >= hi, 1.0, step))


def _axis_factors(axis: AxisLayout) -> Tuple[np.ndarray, np.ndarray]:
    """(s, b): s = 1 where phi may vanish, b = 1 where psi may be 1; both 0 off the cells"""
    a, b, c, d = _thresholds(axis.rings, axis.spacing)
    s = np.where(axis.inside, _ramp(a, b, axis.distance), 0.0)
    t = np.where(axis.inside, _ramp(c, d, axis.distance), 0.0)
    return s, t


def default_support(grid: Grid2D, delta: float) -> Bounds:
    """The grid rectangle shrunk by one cell of side delta"""
    return (grid.x_min + delta, grid.x_max - delta, grid.y_min + delta, grid.y_max - delta)


def cutoffs(cells: CellDecomposition, grid: Grid2D) -> Tuple[np.ndarray, np.ndarray]:
    """(phi, psi) as (ny, nx) arrays"""
    ax, ay = layout(cells, grid)
    sx, bx = _axis_factors(ax)
    sy, by = _axis_factors(ay)
    phi = 1.0 - np.outer(sy, sx)
    psi = np.outer(by, bx)
    return phi, psi


def require_supported(G: ScalarField, cells: CellDecomposition, tol: float = SUPPORT_TOL) -> None:
    """G must vanish (relative to its sup) off the decomposed support"""
    X, Y = G.grid.mesh()
    x0, x1, y0, y1 = cells.support
    outside = (X < x0) | (X > x1) | (Y < y0) | (Y > y1)
    scale = max(G.sup(), 1.0)
    leak = float(np.max(np.abs(G.values[outside]))) if np.any(outside) else 0.0
    if leak > tol * scale:
        raise SupportError(f"G reaches {leak:.3e} outside the decomposed support {cells.support}")


def flatten_F(F: ScalarField, cells: CellDecomposition) -> ScalarField:
    """F on the outer ring of each cell, the center value F(x0) on Q2, F off the cells"""
    phi, _ = cutoffs(cells, F.grid)
    ax, ay = layout(cells, F.grid)
    centers = F.values[np.ix_(ay.center, ax.center)]
    return F.with_values(phi * F.values + (1.0 - phi) * centers)


def localize_G(G: ScalarField, cells: CellDecomposition) -> ScalarField:
    """psi G: G on Q3, 0 off Q2 and off the cells"""
    require_supported(G, cells)
    _, psi = cutoffs(cells, G.grid)
    return G.with_values(psi * G.values)


def flex_pair(F: ScalarField, G: ScalarField, cells: CellDecomposition) -> Tuple[ScalarField, ScalarField]:
    F.grid.require_same(G.grid)
    return flatten_F(F, cells), localize_G(G, cells)


def flex_report(
    F: ScalarField,
    G: ScalarField,
    delta: float,
    eps_cell: float,
    q: ExponentLike,
    support: Optional[Bounds] = None,
) -> FlexReport:
    """One step of the approximating sequence, with the distances and their bounds"""
    exponent = ExtendedExponent.coerce(q)
    if exponent.is_inf:
        raise UnsupportedError("no commuting approximation is constructed for an L_inf target of G")
    F.grid.require_same(G.grid)
    cells = decompose(support or default_support(F.grid, delta), delta, eps_cell)
    F_new, G_new = flex_pair(F, G, cells)
    bracket = poisson_bracket(F_new, G_new)
    sup_dist = (F_new - F).sup()
    lq_dist = lq_norm(G_new - G, exponent)
    modulus = modulus_of_continuity(F, cells.delta * math.sqrt(2.0))
    lq_bound = G.sup() * (cells.volume * eps_cell) ** (1.0 / exponent.value)
    logger.info(
        "flex delta=%g eps_cell=%g: sup|F~-F|=%.3g, |G~-G|_q=%.3g, max bracket %.3g",
        delta, eps_cell, sup_dist, lq_dist, bracket.sup(),
    )
    return FlexReport(
        sup_dist_F=sup_dist,
        lq_dist_G=lq_dist,
        max_bracket=bracket.sup(),
        delta=cells.delta,
        eps_cell=eps_cell,
        q=exponent.value,
        modulus_bound=modulus,
        lq_bound=lq_bound,
    )


def flex_sequence(
    F: ScalarField,
    G: ScalarField,
    deltas: Sequence[float],
    eps_cells: Sequence[float],
    q: ExponentLike,
) -> List[FlexReport]:
    """Reports along the steps (delta_k, eps_k); steps are independent and run in parallel"""
    require_that(len(deltas) == len(eps_cells), "delta and eps_cell schedules differ in length")
    return parallel_map(lambda step: flex_report(F, G, step[0], step[1], q), list(zip(deltas, eps_cells)))


def locally_constant_where(F: ScalarField, G: ScalarField) -> bool:
    """At every node where G != 0, F equals its four stencil neighbors exactly"""
    values = F.values
    grid = F.grid
    nonzero = G.values != 0.0
    checks = []
    for axis, periodic in ((1, grid.periodic_x), (0, grid.periodic_y)):
        for shift in (1, -1):
            neighbor = np.roll(values, shift, axis=axis)
            same = neighbor == values
            if not periodic:
                edge = [slice(None), slice(None)]
                edge[axis] = 0 if shift == 1 else -1
                same[tuple(edge)] = True
            checks.append(same)
    return bool(np.all(np.logical_and.reduce(checks)[nonzero]))
