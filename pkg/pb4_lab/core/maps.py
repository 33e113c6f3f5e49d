"""Closed-form area-preserving coordinate maps and transport of functions along them"""
import logging
import math
from abc import ABC, abstractmethod
from typing import Optional, Sequence, Tuple

import numpy as np
from typing_extensions import Self

from ..types.config import TWO_PI
from ..types.exceptions import MapError
from ..validation.preconditions import require
from ..validators.base import POSITIVE
from .grid import Bounds, FieldFunction, Grid2D, ScalarField, make_grid

logger = logging.getLogger(__name__)

Points = Tuple[np.ndarray, np.ndarray]


class AreaPreservingMap(ABC):
    """A diffeomorphism onto its image with unit Jacobian determinant"""

    name: str = "map"

    @property
    def is_identity(self) -> bool:
        return False

    @abstractmethod
    def forward(self, x: np.ndarray, y: np.ndarray) -> Points:
        pass

    @abstractmethod
    def inverse(self, X: np.ndarray, Y: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Preimages and a mask of points that have one"""
        pass

    def image_bounds(self, grid: Grid2D) -> Bounds:
        """Bounding box of the image of the grid rectangle"""
        s = np.linspace(0.0, 1.0, 257)
        edges_x = np.concatenate([
            grid.x_min + s * (grid.x_max - grid.x_min),
            grid.x_min + s * (grid.x_max - grid.x_min),
            np.full_like(s, grid.x_min),
            np.full_like(s, grid.x_max),
        ])
        edges_y = np.concatenate([
            np.full_like(s, grid.y_min),
            np.full_like(s, grid.y_max),
            grid.y_min + s * (grid.y_max - grid.y_min),
            grid.y_min + s * (grid.y_max - grid.y_min),
        ])
        X, Y = self.forward(edges_x, edges_y)
        return (float(X.min()), float(X.max()), float(Y.min()), float(Y.max()))

    def jacobian_determinant(self, x: np.ndarray, y: np.ndarray, step: float = 1e-6) -> np.ndarray:
        """Central-difference Jacobian determinant of forward at the given points"""
        Xp, Yp = self.forward(x + step, y)
        Xm, Ym = self.forward(x - step, y)
        Xq, Yq = self.forward(x, y + step)
        Xr, Yr = self.forward(x, y - step)
        dXdx, dYdx = (Xp - Xm) / (2 * step), (Yp - Ym) / (2 * step)
        dXdy, dYdy = (Xq - Xr) / (2 * step), (Yq - Yr) / (2 * step)
        return dXdx * dYdy - dXdy * dYdx

    def check_area_preserving(self, grid: Grid2D, tol: float = 1e-6) -> float:
        """Largest |det - 1| over the grid nodes; raises MapError above tol"""
        X, Y = grid.mesh()
        defect = float(np.max(np.abs(self.jacobian_determinant(X, Y) - 1.0)))
        if defect > tol:
            raise MapError(f"{self.name} is not area preserving: max |det - 1| = {defect:.3e}")
        logger.debug("%s determinant defect %.3e", self.name, defect)
        return defect


class AffineMap(AreaPreservingMap):
    """z -> M z + c; the identity and shears are the cases used here"""

    def __init__(self, matrix: Sequence[Sequence[float]], offset: Sequence[float] = (0.0, 0.0), name: str = "affine"):
        self.matrix = np.array(matrix, dtype=float)
        self.offset = np.array(offset, dtype=float)
        if self.matrix.shape != (2, 2) or self.offset.shape != (2,):
            raise MapError("affine map needs a 2x2 matrix and a 2-vector offset")
        det = float(np.linalg.det(self.matrix))
        if det == 0.0:
            raise MapError("affine map matrix is singular")
        self._inv = np.linalg.inv(self.matrix)
        self.name = name

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.matrix, np.eye(2)) and not np.any(self.offset))

    @classmethod
    def identity(cls) -> Self:
        return cls(((1.0, 0.0), (0.0, 1.0)), name="identity")

    @classmethod
    def shear(cls, k: float = 1.0) -> Self:
        """(x, y) -> (x + k y, y)"""
        return cls(((1.0, k), (0.0, 1.0)), name=f"shear({k:g})")

    def forward(self, x, y):
        (a, b), (c, d) = self.matrix
        return a * x + b * y + self.offset[0], c * x + d * y + self.offset[1]

    def inverse(self, X, Y):
        (a, b), (c, d) = self._inv
        u, v = X - self.offset[0], Y - self.offset[1]
        return a * u + b * v, c * u + d * v, np.ones(np.shape(X), dtype=bool)


class CylinderToAnnulusMap(AreaPreservingMap):
    """
    (t, theta) -> r (cos theta, sin theta) with r^2 = eps^2 + 2 t.

    In the area coordinates (rho, alpha) = (r^2 / 2, theta) of the plane the
    map is the translation (t, theta) -> (eps^2 / 2 + t, theta).
    """

    name = "cylinder-to-annulus"

    def __init__(self, eps: float, t_range: Tuple[float, float]):
        require("eps", eps, POSITIVE)
        self.eps = float(eps)
        self.t_range = (float(t_range[0]), float(t_range[1]))

    def radius(self, t):
        return np.sqrt(self.eps ** 2 + 2.0 * np.asarray(t, dtype=float))

    def area_coordinates(self, t, theta) -> Points:
        """(rho, alpha) of the image point"""
        return self.eps ** 2 / 2.0 + np.asarray(t, dtype=float), np.asarray(theta, dtype=float) % TWO_PI

    def forward(self, t, theta):
        r = self.radius(t)
        return r * np.cos(theta), r * np.sin(theta)

    def inverse(self, X, Y):
        t = (X ** 2 + Y ** 2 - self.eps ** 2) / 2.0
        theta = np.mod(np.arctan2(Y, X), TWO_PI)
        valid = (t > self.t_range[0]) & (t < self.t_range[1])
        return t, theta, valid

    def image_bounds(self, grid: Grid2D) -> Bounds:
        R = float(self.radius(self.t_range[1]))
        return (-R, R, -R, R)


def transport(
    source: FieldFunction, phi: AreaPreservingMap, grid: Grid2D, fill: float = 0.0
) -> ScalarField:
    """Sample source o phi^-1 on grid; points without a preimage get fill"""
    X, Y = grid.mesh()
    x, y, valid = phi.inverse(X, Y)
    with np.errstate(all="ignore"):
        values = np.asarray(source(np.where(valid, x, 0.0), np.where(valid, y, 0.0)), dtype=float)
    values = np.broadcast_to(values, grid.shape)
    return ScalarField(grid, np.where(valid, values, fill))


def image_grid(phi: AreaPreservingMap, grid: Grid2D, cells: Optional[int] = None, pad: float = 0.02) -> Grid2D:
    """A non-periodic grid over the padded image bounding box, cells across the longer side"""
    x0, x1, y0, y1 = phi.image_bounds(grid)
    px, py = pad * (x1 - x0), pad * (y1 - y0)
    x0, x1, y0, y1 = x0 - px, x1 + px, y0 - py, y1 + py
    cells = cells or max(grid.nx, grid.ny)
    h = max(x1 - x0, y1 - y0) / cells
    nx = max(4, int(math.ceil((x1 - x0) / h)))
    ny = max(4, int(math.ceil((y1 - y0) / h)))
    return make_grid((x0, x0 + nx * h, y0, y0 + ny * h), nx, ny)
