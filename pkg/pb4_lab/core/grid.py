"""
Grids, sampled scalar fields, node masks and the area density.

Values of a field are stored as an array of shape (ny, nx) with
values[j, i] the sample at (xs[i], ys[j]); rows follow y, columns follow x.
"""
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple, Union

import numpy as np
from typing_extensions import Self

from ..types.exceptions import GridMismatchError, ValidationError
from ..validation.parsing import parse_extended_real
from ..validation.preconditions import require
from ..validators.base import EXPONENT, IntegerValidator

INF = math.inf

Bounds = Tuple[float, float, float, float]
FieldFunction = Callable[[np.ndarray, np.ndarray], Union[np.ndarray, float]]

_COUNT = IntegerValidator(min_val=4)


@dataclass(frozen=True)
class ExtendedExponent:
    """An exponent q in [1, INF]; INF selects the supremum norm"""

    value: float

    def __post_init__(self):
        require("q", self.value, EXPONENT)
        object.__setattr__(self, "value", float(self.value))

    @property
    def is_inf(self) -> bool:
        return math.isinf(self.value)

    @classmethod
    def coerce(cls, q: Union["ExtendedExponent", float, int, str]) -> Self:
        if isinstance(q, cls):
            return q
        if isinstance(q, str):
            return cls(parse_extended_real(q))
        return cls(q)

    def __str__(self) -> str:
        return "inf" if self.is_inf else repr(self.value)


ExponentLike = Union[ExtendedExponent, float, int, str]


@dataclass(frozen=True)
class Grid2D:
    """Rectangular grid of cell-centered nodes, optionally periodic per axis"""

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int
    ny: int
    periodic_x: bool = False
    periodic_y: bool = False

    def __post_init__(self):
        for name, lo, hi in (("x", self.x_min, self.x_max), ("y", self.y_min, self.y_max)):
            if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
                raise ValidationError(f"Degenerate {name}-bounds: [{lo}, {hi}]")
        require("nx", self.nx, _COUNT)
        require("ny", self.ny, _COUNT)
        object.__setattr__(self, "nx", int(self.nx))
        object.__setattr__(self, "ny", int(self.ny))

    @property
    def hx(self) -> float:
        return (self.x_max - self.x_min) / self.nx

    @property
    def hy(self) -> float:
        return (self.y_max - self.y_min) / self.ny

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.ny, self.nx)

    @property
    def cell_area(self) -> float:
        return self.hx * self.hy

    @property
    def area(self) -> float:
        return (self.x_max - self.x_min) * (self.y_max - self.y_min)

    @property
    def bounds(self) -> Bounds:
        return (self.x_min, self.x_max, self.y_min, self.y_max)

    @property
    def xs(self) -> np.ndarray:
        return self.x_min + (np.arange(self.nx) + 0.5) * self.hx

    @property
    def ys(self) -> np.ndarray:
        return self.y_min + (np.arange(self.ny) + 0.5) * self.hy

    def mesh(self) -> Tuple[np.ndarray, np.ndarray]:
        """Node coordinates as two (ny, nx) arrays"""
        return np.meshgrid(self.xs, self.ys, indexing="xy")

    def refined(self, factor: int = 2) -> Self:
        return Grid2D(
            self.x_min, self.x_max, self.y_min, self.y_max,
            self.nx * factor, self.ny * factor, self.periodic_x, self.periodic_y,
        )

    def require_same(self, other: "Grid2D", what: str = "fields") -> None:
        if self != other:
            raise GridMismatchError(f"{what} live on different grids: {self} vs {other}")


def make_grid(
    bounds: Bounds, nx: int, ny: int, periodic_x: bool = False, periodic_y: bool = False
) -> Grid2D:
    """Build a grid over the rectangle bounds = (x_min, x_max, y_min, y_max)"""
    x_min, x_max, y_min, y_max = (float(b) for b in bounds)
    return Grid2D(x_min, x_max, y_min, y_max, nx, ny, periodic_x, periodic_y)


def aligned_axis(lo: float, hi: float, step: float) -> Tuple[float, float, int]:
    """
    Axis bounds whose node centers are the integer multiples of step covering [lo, hi].

    Returns (axis_min, axis_max, count).
    """
    j_lo = math.floor(lo / step + 1e-9)
    j_hi = math.ceil(hi / step - 1e-9)
    return (j_lo - 0.5) * step, (j_hi + 0.5) * step, j_hi - j_lo + 1


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Real samples at the nodes of a grid; immutable once built"""

    grid: Grid2D
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != self.grid.shape:
            raise ValidationError(
                f"values have shape {values.shape}, grid expects {self.grid.shape}"
            )
        bad = np.argwhere(~np.isfinite(values))
        if bad.size:
            j, i = bad[0]
            raise ValidationError(f"non-finite sample at node (i={i}, j={j})")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def with_values(self, values: np.ndarray) -> Self:
        return type(self)(self.grid, values)

    def _other(self, other: Union["ScalarField", float]) -> Union[np.ndarray, float]:
        if isinstance(other, ScalarField):
            self.grid.require_same(other.grid)
            return other.values
        return float(other)

    def __add__(self, other: Union["ScalarField", float]) -> "ScalarField":
        return self.with_values(self.values + self._other(other))

    __radd__ = __add__

    def __sub__(self, other: Union["ScalarField", float]) -> "ScalarField":
        return self.with_values(self.values - self._other(other))

    def __mul__(self, other: Union["ScalarField", float]) -> "ScalarField":
        return self.with_values(self.values * self._other(other))

    __rmul__ = __mul__

    def __neg__(self) -> "ScalarField":
        return self.with_values(-self.values)

    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))


@dataclass(frozen=True, eq=False)
class NodeMask:
    """Boolean selection of grid nodes"""

    grid: Grid2D
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=bool)
        if values.shape != self.grid.shape:
            raise GridMismatchError(
                f"mask has shape {values.shape}, grid expects {self.grid.shape}"
            )
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def full(cls, grid: Grid2D) -> Self:
        return cls(grid, np.ones(grid.shape, dtype=bool))

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.values))

    def __and__(self, other: "NodeMask") -> "NodeMask":
        self.grid.require_same(other.grid, "masks")
        return NodeMask(self.grid, self.values & other.values)

    def __or__(self, other: "NodeMask") -> "NodeMask":
        self.grid.require_same(other.grid, "masks")
        return NodeMask(self.grid, self.values | other.values)

    def __invert__(self) -> "NodeMask":
        return NodeMask(self.grid, ~self.values)

    def isdisjoint(self, other: "NodeMask") -> bool:
        return not np.any(self.values & other.values)


def rectangle_mask(grid: Grid2D, x_lo: float, x_hi: float, y_lo: float, y_hi: float) -> NodeMask:
    """Nodes inside the closed rectangle, with a relative tolerance of 1e-9 cells"""
    tx, ty = 1e-9 * grid.hx, 1e-9 * grid.hy
    X, Y = grid.mesh()
    inside = (X >= x_lo - tx) & (X <= x_hi + tx) & (Y >= y_lo - ty) & (Y <= y_hi + ty)
    return NodeMask(grid, inside)


@dataclass(frozen=True)
class SymplecticDensity:
    """Area form w dx^dy; weight None means the constant 1"""

    weight: Optional[FieldFunction] = None

    @property
    def is_uniform(self) -> bool:
        return self.weight is None

    def on(self, grid: Grid2D) -> Union[np.ndarray, float]:
        if self.weight is None:
            return 1.0
        X, Y = grid.mesh()
        w = np.broadcast_to(np.asarray(self.weight(X, Y), dtype=float), grid.shape)
        bad = np.argwhere(~(w > 0) | ~np.isfinite(w))
        if bad.size:
            j, i = bad[0]
            raise ValidationError(f"density weight not positive at node (i={i}, j={j})")
        return w


STANDARD_DENSITY = SymplecticDensity()


def sample(grid: Grid2D, f: FieldFunction) -> ScalarField:
    """Evaluate a vectorized function of (x, y) at the grid nodes"""
    X, Y = grid.mesh()
    with np.errstate(all="ignore"):
        values = np.broadcast_to(np.asarray(f(X, Y), dtype=float), grid.shape)
    return ScalarField(grid, values)


def constant_field(grid: Grid2D, value: float) -> ScalarField:
    return ScalarField(grid, np.full(grid.shape, float(value)))
