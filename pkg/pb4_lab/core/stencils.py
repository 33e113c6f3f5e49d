"""
Second-order difference operators as sparse matrices.

Periodic axes use the wrapped central stencil; non-periodic axes use the
central stencil inside and the one-sided second-order stencil at the two
end nodes. Keeping the operators as matrices gives the optimizer their
exact adjoints for free.
"""
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy import sparse

from .grid import Grid2D


@lru_cache(maxsize=64)
def derivative_matrix(n: int, h: float, periodic: bool) -> sparse.csr_matrix:
    """First-derivative operator on n cell-centered nodes with spacing h"""
    c = 1.0 / (2.0 * h)
    rows, cols, data = [], [], []
    for i in range(n):
        if periodic or 0 < i < n - 1:
            rows += [i, i]
            cols += [(i - 1) % n, (i + 1) % n]
            data += [-c, c]
        elif i == 0:
            rows += [0, 0, 0]
            cols += [0, 1, 2]
            data += [-3.0 * c, 4.0 * c, -c]
        else:
            rows += [i, i, i]
            cols += [n - 3, n - 2, n - 1]
            data += [c, -4.0 * c, 3.0 * c]
    return sparse.csr_matrix((data, (rows, cols)), shape=(n, n))


class GridStencil:
    """Partial derivatives of (ny, nx) arrays on a fixed grid, and their transposes"""

    def __init__(self, grid: Grid2D):
        self.grid = grid
        self.Dx = derivative_matrix(grid.nx, grid.hx, grid.periodic_x)
        self.Dy = derivative_matrix(grid.ny, grid.hy, grid.periodic_y)
        self.DxT = self.Dx.T.tocsr()
        self.DyT = self.Dy.T.tocsr()

    def ddx(self, values: np.ndarray) -> np.ndarray:
        return np.asarray(self.Dx @ values.T).T

    def ddy(self, values: np.ndarray) -> np.ndarray:
        return np.asarray(self.Dy @ values)

    def ddx_adjoint(self, values: np.ndarray) -> np.ndarray:
        return np.asarray(self.DxT @ values.T).T

    def ddy_adjoint(self, values: np.ndarray) -> np.ndarray:
        return np.asarray(self.DyT @ values)

    def gradient(self, values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return self.ddx(values), self.ddy(values)


@lru_cache(maxsize=16)
def stencil_for(grid: Grid2D) -> GridStencil:
    return GridStencil(grid)
