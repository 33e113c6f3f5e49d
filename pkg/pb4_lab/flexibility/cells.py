"""
Rectangular cell decompositions with nested inner regions Q3 in Q2 in Q1 in Q.

Region Qk is the cell shrunk by a margin mu_k on every side, with
mu_1 < mu_2 < mu_3 and mu_3 chosen so that Q minus Q3 takes the
fraction eps_cell of the cell volume.
"""
import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..core.grid import Bounds, Grid2D
from ..types.exceptions import ResolutionError, ValidationError
from ..validation.preconditions import require, require_that
from ..validators.base import POSITIVE, RangeValidator

logger = logging.getLogger(__name__)

_EPS_CELL = RangeValidator(min_val=0.0, max_val=0.5, min_inclusive=False, max_inclusive=False)

# node rings a cell needs between its edge and Q3
MIN_INNER_RINGS = 2


@dataclass(frozen=True)
class CellDecomposition:
    support: Bounds
    delta: float
    eps_cell: float
    kx: int
    ky: int

    @property
    def dx(self) -> float:
        return (self.support[1] - self.support[0]) / self.kx

    @property
    def dy(self) -> float:
        return (self.support[3] - self.support[2]) / self.ky

    @property
    def count(self) -> int:
        return self.kx * self.ky

    @property
    def diameter(self) -> float:
        return math.hypot(self.dx, self.dy)

    @property
    def volume(self) -> float:
        x0, x1, y0, y1 = self.support
        return (x1 - x0) * (y1 - y0)

    @property
    def inner_ratio(self) -> float:
        """mu_3 / cell side: solves 1 - (1 - 2 r)^2 = eps_cell"""
        return 0.5 * (1.0 - math.sqrt(1.0 - self.eps_cell))

    def margins(self) -> Tuple[Tuple[float, float], Tuple[float, float], Tuple[float, float]]:
        """(mu_1, mu_2, mu_3), each as an (x, y) pair"""
        r = self.inner_ratio
        mu3 = (r * self.dx, r * self.dy)
        return (
            (mu3[0] / 3.0, mu3[1] / 3.0),
            (2.0 * mu3[0] / 3.0, 2.0 * mu3[1] / 3.0),
            mu3,
        )

    def cell_bounds(self, i: int, j: int) -> Bounds:
        require_that(0 <= i < self.kx and 0 <= j < self.ky, f"no cell ({i}, {j})")
        x0, _, y0, _ = self.support
        return (x0 + i * self.dx, x0 + (i + 1) * self.dx, y0 + j * self.dy, y0 + (j + 1) * self.dy)

    def region_bounds(self, i: int, j: int, level: int) -> Bounds:
        """Q (level 0), Q1, Q2 or Q3 of cell (i, j)"""
        require_that(level in (0, 1, 2, 3), f"level must be 0..3, got {level}")
        x0, x1, y0, y1 = self.cell_bounds(i, j)
        if level == 0:
            return (x0, x1, y0, y1)
        mx, my = self.margins()[level - 1]
        return (x0 + mx, x1 - mx, y0 + my, y1 - my)

    def volume_fraction(self) -> float:
        """Vol(Q minus Q3) / Vol(Q), equal to eps_cell"""
        r = self.inner_ratio
        return 1.0 - (1.0 - 2.0 * r) ** 2


def decompose(support: Bounds, delta: float, eps_cell: float) -> CellDecomposition:
    """Tile support with rectangles of sides at most delta"""
    require("delta", delta, POSITIVE)
    require("eps_cell", eps_cell, _EPS_CELL)
    x0, x1, y0, y1 = (float(v) for v in support)
    require_that(x0 < x1 and y0 < y1, f"degenerate support {support}")
    lx, ly = x1 - x0, y1 - y0
    if delta > min(lx, ly):
        raise ValidationError(f"delta={delta} is larger than a support edge ({min(lx, ly)})")
    kx, ky = math.ceil(lx / delta - 1e-9), math.ceil(ly / delta - 1e-9)
    cells = CellDecomposition((x0, x1, y0, y1), float(delta), float(eps_cell), kx, ky)
    logger.debug("decomposed %s into %dx%d cells", support, kx, ky)
    return cells


@dataclass(frozen=True)
class AxisLayout:
    """Per-node data along one grid axis: owning cell, edge distance, cell-center node"""

    cell: np.ndarray
    distance: np.ndarray
    center: np.ndarray
    rings: int
    spacing: float

    @property
    def inside(self) -> np.ndarray:
        return self.cell >= 0


def _axis_layout(
    lo: float, h: float, n: int, periodic: bool, start: float, side: float, cells: int, r: float, axis: str
) -> AxisLayout:
    offset = (start - lo) / h
    per_cell = side / h
    if abs(offset - round(offset)) > 1e-6 or abs(per_cell - round(per_cell)) > 1e-6:
        raise ResolutionError(f"cell edges along {axis} do not fall on node boundaries (h={h:g}, side={side:g})")
    first, k = int(round(offset)), int(round(per_cell))
    margin = 0 if periodic else 2
    if first < margin or first + cells * k > n - margin:
        raise ResolutionError(f"decomposed support along {axis} must stay {margin} nodes inside the grid")
    rings = int(math.floor(r * k + 1e-9))
    if rings < MIN_INNER_RINGS:
        raise ResolutionError(
            f"{k} nodes per cell along {axis} leave {rings} inner ring(s); need {MIN_INNER_RINGS}"
        )
    idx = np.arange(n) - first
    cell = np.where((idx >= 0) & (idx < cells * k), idx // k, -1)
    local = np.where(cell >= 0, idx - cell * k, 0)
    distance = np.minimum(local + 0.5, k - local - 0.5) * h
    center = np.where(cell >= 0, first + cell * k + k // 2, np.arange(n))
    return AxisLayout(cell, distance, center, rings, h)


def layout(cells: CellDecomposition, grid: Grid2D) -> Tuple[AxisLayout, AxisLayout]:
    """Realize the decomposition on grid nodes; raises ResolutionError when misaligned"""
    r = cells.inner_ratio
    x0, _, y0, _ = cells.support
    ax = _axis_layout(grid.x_min, grid.hx, grid.nx, grid.periodic_x, x0, cells.dx, cells.kx, r, "x")
    ay = _axis_layout(grid.y_min, grid.hy, grid.ny, grid.periodic_y, y0, cells.dy, cells.ky, r, "y")
    return ax, ay
