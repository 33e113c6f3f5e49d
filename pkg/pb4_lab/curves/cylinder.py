"""
The cylinder model Z = (0, (A + B) / 2 pi) x S^1 of a separating curve,
and its area-preserving picture as a planar annulus.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..core.grid import Grid2D, ScalarField, make_grid, sample
from ..core.maps import CylinderToAnnulusMap, image_grid
from ..profiles.base import plateau
from ..quadrilateral.construction import FunctionPair
from ..types.config import TWO_PI, CylinderModel
from ..validation.preconditions import require
from ..validators.base import IntegerValidator, POSITIVE

logger = logging.getLogger(__name__)

AREA_TOL = 0.005


def cylinder_grid(model: CylinderModel, cells: int = 512, angular_cells: Optional[int] = None) -> Grid2D:
    """
    t across the cylinder (non-periodic), theta periodic.

    The t spacing divides t* so that the curve is a row of nodes; all
    nodes lie strictly inside (0, (A + B) / 2 pi).
    """
    require("cells", cells, IntegerValidator(min_val=16))
    h = model.length / cells
    ht = model.t_star / max(1, round(model.t_star / h))
    nt = int(math.floor(model.length / ht - 0.5 - 1e-9))
    n_theta = angular_cells or cells
    return make_grid((0.5 * ht, (nt + 0.5) * ht, 0.0, TWO_PI), nt, n_theta, periodic_x=False, periodic_y=True)


def curve_row(model: CylinderModel, grid: Grid2D) -> int:
    """Index of the node column sitting on t = t*"""
    return int(np.argmin(np.abs(grid.xs - model.t_star)))


def component_areas(model: CylinderModel, grid: Grid2D) -> Tuple[float, float]:
    """Areas of t < t* and t > t*: exact overlaps of the node cells with each side"""
    lo = grid.xs - 0.5 * grid.hx
    hi = grid.xs + 0.5 * grid.hx
    below = np.clip(np.minimum(hi, model.t_star) - lo, 0.0, grid.hx)
    above = grid.hx - below
    circumference = grid.y_max - grid.y_min
    # the end strips (0, x_min) and (x_max, length) carry no nodes
    inner = (float(np.sum(below)) + grid.x_min) * circumference
    outer = (float(np.sum(above)) + model.length - grid.x_max) * circumference
    return inner, outer


@dataclass(frozen=True)
class AnnulusModel:
    """The annulus picture of the cylinder and the numerical checks on it"""

    phi: CylinderToAnnulusMap
    curve_radius: float
    outer_radius: float
    curve_radius_defect: float
    inner_area: float
    outer_area: float
    determinant_defect: float

    def areas_match(self, model: CylinderModel, tol: float = AREA_TOL) -> bool:
        return abs(self.inner_area - model.A) <= tol * model.A and abs(self.outer_area - model.B) <= tol * model.B


def cylinder_to_annulus(model: CylinderModel, eps: float, cells: int = 1024) -> AnnulusModel:
    """
    (t, theta) -> r (cos theta, sin theta), r^2 = eps^2 + 2 t.

    The curve t* goes to the circle of radius sqrt(eps^2 + A / pi), the
    outer end to radius sqrt(eps^2 + (A + B) / pi). Component areas are
    measured by midpoint counting on a Cartesian grid over the image.
    """
    require("eps", eps, POSITIVE)
    phi = CylinderToAnnulusMap(eps, (0.0, model.length))
    source = cylinder_grid(model, max(64, cells // 4))
    determinant_defect = phi.check_area_preserving(source)

    theta = np.linspace(0.0, TWO_PI, 721)
    X, Y = phi.forward(np.full_like(theta, model.t_star), theta)
    curve_radius = math.sqrt(eps ** 2 + model.A / math.pi)
    radius_defect = float(np.max(np.abs(np.hypot(X, Y) - curve_radius)))

    target = image_grid(phi, source, cells, pad=0.01)
    Xg, Yg = target.mesh()
    t, _, valid = phi.inverse(Xg, Yg)
    inner = float(np.count_nonzero(valid & (t < model.t_star))) * target.cell_area
    outer = float(np.count_nonzero(valid & (t >= model.t_star))) * target.cell_area
    logger.info("annulus areas %.6g / %.6g for A=%g, B=%g", inner, outer, model.A, model.B)
    return AnnulusModel(
        phi=phi,
        curve_radius=curve_radius,
        outer_radius=math.sqrt(eps ** 2 + (model.A + model.B) / math.pi),
        curve_radius_defect=radius_defect,
        inner_area=inner,
        outer_area=outer,
        determinant_defect=determinant_defect,
    )


def bump_pair(model: CylinderModel, grid: Grid2D) -> FunctionPair:
    """
    F = a(t) (1 + cos theta) / 2, G = b(t) (1 + sin theta) / 2 with
    overlapping plateaus a, b well inside the cylinder.
    """
    L = model.length
    a = plateau(0.3 * L, 0.5 * L, 0.2 * L)
    b = plateau(0.4 * L, 0.6 * L, 0.2 * L)

    def F_fn(t, theta):
        return a(t) * 0.5 * (1.0 + np.cos(theta))

    def G_fn(t, theta):
        return b(t) * 0.5 * (1.0 + np.sin(theta))

    return FunctionPair(sample(grid, F_fn), sample(grid, G_fn), F_fn, G_fn)


def field_on_curve(field: ScalarField, model: CylinderModel) -> np.ndarray:
    """Values of a cylinder field along the curve row, indexed by theta"""
    return field.values[:, curve_row(model, field.grid)]
