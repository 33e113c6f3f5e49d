import math
import os
from dataclasses import dataclass
from typing import Optional, Tuple

from typing_extensions import Self

from ..validation.parsing import parse_extended_real
from ..validation.preconditions import require, require_that
from ..validators.base import (
    EXPONENT,
    POSITIVE,
    POSITIVE_OR_INF,
    FunctionValidator,
    IntegerValidator,
    RangeValidator,
)
from .exceptions import ConfigurationError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class RampSpec:
    """Widths of the slope-controlled ramp: peak at A, support (0, C), margin eps"""

    A: float
    C: float
    eps: float

    def __post_init__(self):
        require("A", self.A, POSITIVE)
        require("eps", self.eps, POSITIVE)
        require("C", self.C, RangeValidator(min_val=self.A, min_inclusive=False))
        require_that(
            8.0 * self.eps < min(self.A, self.C - self.A),
            f"eps={self.eps} too large: need 8*eps < min(A, C - A) = {min(self.A, self.C - self.A)}",
        )


@dataclass(frozen=True)
class QuadProblem:
    """A quadrilateral instance: Pi = [0, A] x [0, 1] inside a surface of area B"""

    A: float
    B: float
    q: float
    eps: float
    C: float

    def __post_init__(self):
        object.__setattr__(self, "B", parse_extended_real(self.B))
        object.__setattr__(self, "q", parse_extended_real(self.q))
        require("A", self.A, POSITIVE)
        require("B", self.B, POSITIVE_OR_INF)
        require("q", self.q, EXPONENT)
        require_that(self.A < self.B, f"need A < B, got A={self.A}, B={self.B}")
        require_that(
            self.A < self.C < self.B,
            f"need A < C < B, got A={self.A}, C={self.C}, B={self.B}",
        )
        # validates the ramp invariants
        self.ramp

    @property
    def ramp(self) -> RampSpec:
        return RampSpec(self.A, self.C, self.eps)

    @property
    def support(self) -> Tuple[float, float, float, float]:
        """The rectangle K = [-eps, C + eps] x [-2 eps, 1 + 2 eps]"""
        e = self.eps
        return (-e, self.C + e, -2.0 * e, 1.0 + 2.0 * e)


@dataclass(frozen=True)
class GridPolicy:
    """
    How construction meshes are laid out.

    cells sets the coarse spacing across the longer side of K, cells_per_eps
    the fine spacing around the eps-wide transitions, margin_cells the fine
    cells added beyond K.
    """

    cells: int = 512
    margin_cells: int = 4
    cells_per_eps: int = 16

    def __post_init__(self):
        require("cells", self.cells, IntegerValidator(min_val=16))
        require("margin_cells", self.margin_cells, IntegerValidator(min_val=2))
        require("cells_per_eps", self.cells_per_eps, IntegerValidator(min_val=8))


@dataclass(frozen=True)
class HighDimSpec:
    """Single-chart model X1 = [0, b]^d x {0} in R^(2n) with a radial profile of the normal distance"""

    n: int
    d: int
    q: float
    b: float = 1.0
    alpha: float = 1.0
    delta: float = 1.0
    base_plateau: float = 0.25
    base_support: float = 0.5
    base_width: float = 1.0 / 32.0

    def __post_init__(self):
        require("n", self.n, IntegerValidator(min_val=2))
        require("d", self.d, IntegerValidator(min_val=0, max_val=2 * self.n - 2))
        require("q", self.q, RangeValidator(min_val=1.0, max_val=float(self.m)))
        require("b", self.b, POSITIVE)
        require("alpha", self.alpha, RangeValidator(min_val=0.0, max_val=1.0, min_inclusive=False))
        require("delta", self.delta, POSITIVE)
        require_that(
            0.0 < self.base_plateau < self.base_support <= 0.5,
            "base profile needs 0 < plateau < support <= 1/2",
        )

    @property
    def m(self) -> int:
        """Codimension 2n - d"""
        return 2 * self.n - self.d


@dataclass(frozen=True)
class CylinderModel:
    """Z = (0, (A + B) / 2 pi) x S^1 with form dt^dtheta; the curve sits at t* = A / 2 pi"""

    A: float
    B: float

    def __post_init__(self):
        require("A", self.A, POSITIVE)
        require("B", self.B, POSITIVE)

    @property
    def length(self) -> float:
        return (self.A + self.B) / TWO_PI

    @property
    def t_star(self) -> float:
        return self.A / TWO_PI


_ANGLE = FunctionValidator(math.isfinite, "angles must be finite reals")


@dataclass(frozen=True)
class CurvePartition:
    """Four cyclically ordered angles splitting a circle into arcs D1..D4

    D1 = [a1, a2], D2 = [a2, a3], D3 = [a3, a4], D4 = [a4, a1 + 2 pi].
    """

    angles: Tuple[float, float, float, float]

    def __post_init__(self):
        require_that(len(self.angles) == 4, "a partition needs exactly four angles")
        for a in self.angles:
            require("angle", a, _ANGLE)
        start = self.angles[0] % TWO_PI
        unwrapped = [start]
        for a in self.angles[1:]:
            step = (a - self.angles[0]) % TWO_PI
            unwrapped.append(start + step)
        require_that(
            all(b > a for a, b in zip(unwrapped, unwrapped[1:])),
            f"angles {self.angles} are not strictly increasing modulo 2 pi",
        )
        object.__setattr__(self, "angles", tuple(float(a) for a in unwrapped))

    @property
    def arc_lengths(self) -> Tuple[float, float, float, float]:
        a1, a2, a3, a4 = self.angles
        return (a2 - a1, a3 - a2, a4 - a3, a1 + TWO_PI - a4)

    def rotated(self, angle: float) -> Self:
        return CurvePartition(tuple(a + angle for a in self.angles))


@dataclass
class LabSettings:
    """Process-level settings read from the environment"""

    threads: Optional[int] = None
    log_level: str = "WARNING"

    @classmethod
    def from_env(cls) -> Self:
        raw_threads = os.environ.get("PB4_THREADS")
        threads = None
        if raw_threads:
            try:
                threads = int(raw_threads)
            except ValueError:
                raise ConfigurationError(f"PB4_THREADS must be a positive integer, got: {raw_threads}")
            if threads < 1:
                raise ConfigurationError(f"PB4_THREADS must be a positive integer, got: {raw_threads}")
        return cls(threads=threads, log_level=os.environ.get("PB4_LOG_LEVEL", "WARNING").upper())
