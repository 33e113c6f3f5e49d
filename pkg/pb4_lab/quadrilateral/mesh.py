"""
Graded tensor meshes for the quadrilateral construction.

Fields live on a computational grid with unit spacing, nodes at whole
coordinates xi = 0 .. n - 1. The physical node lines are
X(xi) = X(0) + integral_0^xi s, where the spacing s is a mollified
piecewise-linear profile: constant and fine inside the zones around the
transitions of the pair, graded up to the coarse spacing in between.

Differencing on the unit grid gives dF/dxi = X'(xi) dF/dx. The bracket
and the quadrature become physical once the area density is the
discrete Jacobian X'(xi) Y'(eta), taken with the same stencil that
differentiates the fields, so fields linear in x are differentiated
exactly.
"""
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from typing_extensions import Self

from ..core.grid import (
    STANDARD_DENSITY,
    Bounds,
    FieldFunction,
    Grid2D,
    NodeMask,
    ScalarField,
    SymplecticDensity,
    make_grid,
)
from ..core.stencils import derivative_matrix
from ..profiles.base import PiecewiseProfile
from ..validation.preconditions import require_that

logger = logging.getLogger(__name__)

RAMP_CELLS = 16
MIN_GAP_CELLS = 16


@dataclass(frozen=True)
class FineZone:
    """Physical interval meshed at the fine step; anchors become node lines"""

    lo: float
    hi: float
    anchors: Tuple[float, ...] = ()

    def __post_init__(self):
        require_that(self.lo < self.hi, f"empty fine zone [{self.lo}, {self.hi}]")
        for a in self.anchors:
            require_that(self.lo <= a <= self.hi, f"anchor {a} outside zone [{self.lo}, {self.hi}]")


@dataclass(frozen=True)
class GradedAxis:
    """Node coordinates of one axis with their discrete Jacobian"""

    nodes: np.ndarray
    jacobian: np.ndarray
    coarse_step: float
    fine_step: float

    @property
    def count(self) -> int:
        return int(self.nodes.size)

    @classmethod
    def uniform(cls, nodes: np.ndarray, step: float) -> Self:
        return cls(np.asarray(nodes, dtype=float), np.full(len(nodes), float(step)), float(step), float(step))


def _merge(zones: Sequence[FineZone], fine: float) -> List[FineZone]:
    """Sort zones and fuse neighbours closer than MIN_GAP_CELLS fine steps"""
    merged: List[FineZone] = []
    for zone in sorted(zones, key=lambda z: z.lo):
        if merged and zone.lo - merged[-1].hi < MIN_GAP_CELLS * fine:
            last = merged.pop()
            zone = FineZone(last.lo, max(last.hi, zone.hi), last.anchors + zone.anchors)
        merged.append(zone)
    return merged


def _zone_nodes(zone: FineZone, fine: float) -> Tuple[np.ndarray, float]:
    """Equally spaced nodes covering the zone, through every anchor"""
    if len(zone.anchors) > 1:
        span = max(zone.anchors) - min(zone.anchors)
        step = span / math.ceil(span / fine - 1e-9)
    else:
        step = fine
    origin = min(zone.anchors) if zone.anchors else zone.lo
    k_lo = math.floor((zone.lo - origin) / step + 1e-9)
    k_hi = math.ceil((zone.hi - origin) / step - 1e-9)
    nodes = origin + step * np.arange(k_lo, k_hi + 1, dtype=float)
    for a in zone.anchors:
        nodes[round((a - origin) / step) - k_lo] = a
    return nodes, step


def graded_axis(zones: Sequence[FineZone], fine: float, coarse: float) -> GradedAxis:
    """
    Fine nodes over each zone, graded gaps between them.

    A gap of length L between zones of steps h_l and h_r gets
    n = min(floor(L / max(h_l, h_r)), ceil(L / coarse) + RAMP_CELLS) cells;
    its spacing ramps from h_l up to a plateau over r cells and back down
    to h_r. The plateau value makes the spacing integrate to L exactly.
    """
    require_that(0.0 < fine <= coarse, f"need 0 < fine <= coarse, got {fine}, {coarse}")
    pieces = [_zone_nodes(z, fine) for z in _merge(zones, fine)]
    gaps = []
    for (left, h_l), (right, h_r) in zip(pieces, pieces[1:]):
        L = float(right[0] - left[-1])
        n = min(math.floor(L / max(h_l, h_r) + 1e-9), math.ceil(L / coarse - 1e-9) + RAMP_CELLS)
        gaps.append((L, n, h_l, h_r))
    r = min([RAMP_CELLS] + [(n - 1) // 3 for _, n, _, _ in gaps])
    require_that(r >= 2, f"fine zones too close for a graded gap: {[g[1] for g in gaps]} cells")
    w = 0.25 * r

    knots_t: List[float] = [0.0]
    knots_y: List[float] = [pieces[0][1]]
    xi = float(pieces[0][0].size - 1)
    slots = [(0, pieces[0][0])]
    for (L, n, h_l, h_r), (right, _) in zip(gaps, pieces[1:]):
        plateau = (L - 0.5 * (h_l + h_r) * (r + w)) / (n - r - w)
        knots_t += [xi + w, xi + r, xi + n - r, xi + n - w]
        knots_y += [h_l, plateau, plateau, h_r]
        xi += n
        slots.append((int(round(xi)), right))
        xi += right.size - 1
    count = int(round(xi)) + 1

    spacing = PiecewiseProfile(knots_t, knots_y, w if len(knots_t) > 1 else 0.0)
    nodes = pieces[0][0][0] + spacing.integral(0.0, np.arange(count, dtype=float))
    for start, exact in slots:
        nodes[start:start + exact.size] = exact
    require_that(bool(np.all(np.diff(nodes) > 0)), "graded nodes must increase")
    jacobian = derivative_matrix(count, 1.0, False) @ nodes
    fine_step = max(step for _, step in pieces)
    return GradedAxis(nodes, np.asarray(jacobian), coarse, fine_step)


class ModelMesh:
    """
    Tensor mesh the quadrilateral pair is sampled on.

    `grid` is the grid fields live on and `density` the area form the
    bracket and the integrals are taken with; xs and ys are the physical
    node lines. A uniform mesh is a plain Grid2D with the standard density.
    """

    def __init__(self, grid: Grid2D, x_axis: GradedAxis, y_axis: GradedAxis, density: SymplecticDensity):
        require_that(
            grid.shape == (y_axis.count, x_axis.count),
            f"grid shape {grid.shape} does not match axes ({y_axis.count}, {x_axis.count})",
        )
        self.grid = grid
        self.x_axis, self.y_axis = x_axis, y_axis
        self.density = density

    @classmethod
    def uniform(cls, grid: Grid2D) -> Self:
        return cls(grid, GradedAxis.uniform(grid.xs, grid.hx), GradedAxis.uniform(grid.ys, grid.hy), STANDARD_DENSITY)

    @classmethod
    def graded(cls, x_axis: GradedAxis, y_axis: GradedAxis) -> Self:
        nx, ny = x_axis.count, y_axis.count
        grid = make_grid((-0.5, nx - 0.5, -0.5, ny - 0.5), nx, ny)
        jx, jy = x_axis.jacobian, y_axis.jacobian

        def jacobian(xi, eta):
            return jx[np.rint(xi).astype(int)] * jy[np.rint(eta).astype(int)]

        return cls(grid, x_axis, y_axis, SymplecticDensity(jacobian))

    @property
    def is_uniform(self) -> bool:
        return self.density.is_uniform

    @property
    def xs(self) -> np.ndarray:
        return self.x_axis.nodes

    @property
    def ys(self) -> np.ndarray:
        return self.y_axis.nodes

    @property
    def shape(self) -> Tuple[int, int]:
        return self.grid.shape

    @property
    def bounds(self) -> Bounds:
        """Physical rectangle covered by the cells around the nodes"""
        jx, jy = self.x_axis.jacobian, self.y_axis.jacobian
        return (
            float(self.xs[0] - 0.5 * jx[0]), float(self.xs[-1] + 0.5 * jx[-1]),
            float(self.ys[0] - 0.5 * jy[0]), float(self.ys[-1] + 0.5 * jy[-1]),
        )

    @property
    def coarse_steps(self) -> Tuple[float, float]:
        return self.x_axis.coarse_step, self.y_axis.coarse_step

    @property
    def fine_step(self) -> float:
        """Largest spacing inside the fine zones"""
        return max(self.x_axis.fine_step, self.y_axis.fine_step)

    def mesh(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.xs, self.ys, indexing="xy")

    def sample(self, f: FieldFunction) -> ScalarField:
        """Evaluate a vectorized function of the physical (x, y) at the nodes"""
        X, Y = self.mesh()
        with np.errstate(all="ignore"):
            values = np.broadcast_to(np.asarray(f(X, Y), dtype=float), self.grid.shape)
        return ScalarField(self.grid, values)

    def rectangle_mask(self, x_lo: float, x_hi: float, y_lo: float, y_hi: float) -> NodeMask:
        """Nodes inside the closed physical rectangle, with a tolerance of 1e-9 local cells"""
        tx = 1e-9 * self.x_axis.jacobian
        ty = 1e-9 * self.y_axis.jacobian
        in_x = (self.xs >= x_lo - tx) & (self.xs <= x_hi + tx)
        in_y = (self.ys >= y_lo - ty) & (self.ys <= y_hi + ty)
        return NodeMask(self.grid, np.outer(in_y, in_x))

    def physical_grid(self, cells: Optional[int] = None) -> Grid2D:
        """Uniform grid over the same physical rectangle; cells across the longer side"""
        if self.is_uniform and cells is None:
            return self.grid
        x0, x1, y0, y1 = self.bounds
        cells = cells or max(self.grid.nx, self.grid.ny)
        h = max(x1 - x0, y1 - y0) / cells
        return make_grid((x0, x1, y0, y1), max(4, math.ceil((x1 - x0) / h)), max(4, math.ceil((y1 - y0) / h)))

    def __repr__(self) -> str:
        kind = "uniform" if self.is_uniform else "graded"
        return f"ModelMesh({kind}, {self.grid.nx}x{self.grid.ny}, bounds={self.bounds})"
