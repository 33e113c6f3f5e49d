"""
One-dimensional profiles.

A piecewise-linear skeleton through knots (t_k, y_k) is written as

    p(t) = y_0 + s_left (t - t_0) + sum_k ds_k R_w(t - t_k)

where ds_k is the slope jump at knot k and R_w is a C^2 smoothing of
max(x, 0) that equals it outside [-w, w]. With w = 0 this is the raw
skeleton, so mollification only changes p inside the windows around the
knots. The transition polynomial is the smoothstep 3u^2 - 2u^3.
"""
import math
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
from pydantic_core import from_json, to_json
from typing_extensions import Self

from ..types.enums import Extension
from ..types.exceptions import ValidationError
from ..validation.preconditions import require, require_that
from ..validators.base import NONNEGATIVE, POSITIVE, RangeValidator


def _smooth_heaviside(u: np.ndarray) -> np.ndarray:
    u = np.clip(u, 0.0, 1.0)
    return u * u * (3.0 - 2.0 * u)


def _smooth_relu(x: np.ndarray, width: float) -> np.ndarray:
    """Equals max(x, 0) outside [-width, width]; C^2 everywhere when width > 0"""
    if width == 0.0:
        return np.maximum(x, 0.0)
    u = np.clip((x + width) / (2.0 * width), 0.0, 1.0)
    inner = 2.0 * width * (u ** 3 - 0.5 * u ** 4)
    return np.where(x >= width, x, np.where(x <= -width, 0.0, inner))


def _smooth_relu_integral(x: np.ndarray, width: float) -> np.ndarray:
    """Antiderivative of _smooth_relu vanishing left of -width"""
    if width == 0.0:
        return 0.5 * np.maximum(x, 0.0) ** 2
    u = np.clip((x + width) / (2.0 * width), 0.0, 1.0)
    inner = 4.0 * width * width * (0.25 * u ** 4 - 0.1 * u ** 5)
    outer = 0.5 * x * x + 0.1 * width * width
    return np.where(x >= width, outer, np.where(x <= -width, 0.0, inner))


def _smooth_relu_derivative(x: np.ndarray, width: float) -> np.ndarray:
    if width == 0.0:
        return np.where(x > 0.0, 1.0, np.where(x < 0.0, 0.0, 0.5))
    return _smooth_heaviside((x + width) / (2.0 * width))


class Profile1D(ABC):
    """A real function of one variable with its derivative"""

    kind: str = "profile"

    @abstractmethod
    def value(self, t) -> np.ndarray:
        pass

    @abstractmethod
    def derivative(self, t) -> np.ndarray:
        pass

    @abstractmethod
    def support(self) -> Tuple[float, float]:
        """Closed interval outside which the profile vanishes (may be infinite)"""
        pass

    @abstractmethod
    def breaks(self) -> np.ndarray:
        """Points where the formula changes; quadrature splits there"""
        pass

    @property
    @abstractmethod
    def width(self) -> float:
        """Smallest transition width, the resolution scale of the profile"""
        pass

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        pass

    def __call__(self, t) -> np.ndarray:
        return self.value(t)


class PiecewiseProfile(Profile1D):
    """Mollified piecewise-linear skeleton through the given knots"""

    kind = "piecewise"

    def __init__(
        self,
        knots_t: Sequence[float],
        knots_y: Sequence[float],
        width: float = 0.0,
        left: Extension = Extension.CONSTANT,
        right: Extension = Extension.CONSTANT,
    ):
        t = np.asarray(knots_t, dtype=float)
        y = np.asarray(knots_y, dtype=float)
        require_that(t.ndim == 1 and t.size >= 1 and t.shape == y.shape, "need matching 1-D knot lists")
        require_that(bool(np.all(np.isfinite(t)) and np.all(np.isfinite(y))), "knots must be finite")
        require_that(bool(np.all(np.diff(t) > 0)), f"knot abscissae must increase strictly: {t.tolist()}")
        require("width", width, NONNEGATIVE)
        self.knots_t, self.knots_y = t, y
        self._width = float(width)
        self.left, self.right = Extension(left), Extension(right)

        seg = np.diff(y) / np.diff(t) if t.size > 1 else np.zeros(0)
        self.segment_slopes = seg
        first = seg[0] if seg.size else 0.0
        last = seg[-1] if seg.size else 0.0
        self.left_slope = first if self.left is Extension.LINEAR else 0.0
        self.right_slope = last if self.right is Extension.LINEAR else 0.0
        slopes = np.concatenate([[self.left_slope], seg, [self.right_slope]])
        jumps = np.diff(slopes)
        keep = jumps != 0.0
        self._kinks = t[keep]
        self._jumps = jumps[keep]

    @property
    def width(self) -> float:
        return self._width

    @property
    def max_slope(self) -> float:
        slopes = np.concatenate([[self.left_slope, self.right_slope], self.segment_slopes])
        return float(np.max(np.abs(slopes)))

    @property
    def max_slope_jump(self) -> float:
        return float(np.max(np.abs(self._jumps))) if self._jumps.size else 0.0

    @property
    def shortest_segment(self) -> float:
        return float(np.min(np.diff(self.knots_t))) if self.knots_t.size > 1 else math.inf

    @property
    def _right_start(self) -> float:
        """Past this point p is exactly the right extension"""
        return float(self._kinks[-1] + self._width) if self._kinks.size else -math.inf

    def value(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = self.knots_y[0] + self.left_slope * (t - self.knots_t[0])
        for knot, jump in zip(self._kinks, self._jumps):
            out = out + jump * _smooth_relu(t - knot, self._width)
        # the jump sum cancels only up to rounding; pin the tail to its exact line
        tail = self.knots_y[-1] + self.right_slope * (t - self.knots_t[-1])
        return np.where(t >= self._right_start, tail, out)

    def derivative(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.full(t.shape, self.left_slope)
        for knot, jump in zip(self._kinks, self._jumps):
            out = out + jump * _smooth_relu_derivative(t - knot, self._width)
        return np.where(t > self._right_start, self.right_slope, out)

    def integral(self, a, b) -> np.ndarray:
        """Exact integral of p over [a, b]"""
        return self._antiderivative(b) - self._antiderivative(a)

    def _antiderivative(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        s = t - self.knots_t[0]
        out = self.knots_y[0] * s + 0.5 * self.left_slope * s * s
        for knot, jump in zip(self._kinks, self._jumps):
            out = out + jump * _smooth_relu_integral(t - knot, self._width)
        return out

    def support(self) -> Tuple[float, float]:
        if not self._kinks.size:
            zero = self.knots_y[0] == 0.0 and self.left_slope == 0.0
            return (0.0, 0.0) if zero else (-math.inf, math.inf)
        lo = -math.inf
        hi = math.inf
        if self.left is Extension.CONSTANT and self.knots_y[0] == 0.0:
            lo = float(self._kinks[0] - self._width)
        if self.right is Extension.CONSTANT and self.knots_y[-1] == 0.0:
            hi = float(self._kinks[-1] + self._width)
        return (lo, hi)

    def breaks(self) -> np.ndarray:
        if self._width == 0.0:
            return self._kinks.copy()
        return np.unique(np.concatenate([self._kinks - self._width, self._kinks + self._width]))

    def segments(self) -> List[Tuple[str, float, float]]:
        """(kind, start, end) for the constant, linear and transition stretches"""
        w = self._width
        out: List[Tuple[str, float, float]] = []
        start = -math.inf
        for knot in self._kinks:
            out.append((self._stretch_kind(start, knot - w), start, float(knot - w)))
            if w > 0:
                out.append(("transition", float(knot - w), float(knot + w)))
            start = float(knot + w)
        out.append((self._stretch_kind(start, math.inf), start, math.inf))
        return out

    def _stretch_kind(self, start: float, end: float) -> str:
        if math.isinf(start):
            point = end - 1.0 if math.isfinite(end) else 0.0
        elif math.isinf(end):
            point = start + 1.0
        else:
            point = 0.5 * (start + end)
        slope = float(self.derivative(np.array([point]))[0])
        return "constant" if slope == 0.0 else "linear"

    def with_width(self, width: float) -> Self:
        return type(self)(self.knots_t, self.knots_y, width, self.left, self.right)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "breakpoints": self.knots_t.tolist(),
            "values": self.knots_y.tolist(),
            "width": self._width,
            "left": self.left.value,
            "right": self.right.value,
            "segments": [list(s) for s in self.segments()],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> Self:
        return cls(
            data["breakpoints"], data["values"], data.get("width", 0.0),
            Extension(data.get("left", "constant")), Extension(data.get("right", "constant")),
        )


class RadialDecayProfile(Profile1D):
    """r -> base((r / scale)^alpha) for r >= 0"""

    kind = "radial"

    def __init__(self, base: PiecewiseProfile, alpha: float, scale: float = 1.0):
        require("alpha", alpha, RangeValidator(min_val=0.0, max_val=1.0, min_inclusive=False))
        require("scale", scale, POSITIVE)
        self.base, self.alpha, self.scale = base, float(alpha), float(scale)

    @property
    def width(self) -> float:
        br = self.breaks()
        gaps = np.diff(br)
        return float(gaps[gaps > 0].min()) if gaps.size else self.base.width

    def _s(self, r) -> np.ndarray:
        return (np.abs(np.asarray(r, dtype=float)) / self.scale) ** self.alpha

    def value(self, r) -> np.ndarray:
        return self.base.value(self._s(r))

    def derivative(self, r) -> np.ndarray:
        r = np.abs(np.asarray(r, dtype=float))
        x = r / self.scale
        safe = np.where(x > 0.0, x, 1.0)
        chain = self.alpha * safe ** (self.alpha - 1.0) / self.scale
        return np.where(x > 0.0, self.base.derivative(safe ** self.alpha) * chain, 0.0)

    def support(self) -> Tuple[float, float]:
        end = self.base.support()[1]
        return (0.0, self.scale * end ** (1.0 / self.alpha))

    def breaks(self) -> np.ndarray:
        br = self.base.breaks()
        br = br[br > 0.0]
        return self.scale * br ** (1.0 / self.alpha)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "alpha": self.alpha, "scale": self.scale, "base": self.base.to_dict()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> Self:
        return cls(PiecewiseProfile.from_dict(data["base"]), data["alpha"], data.get("scale", 1.0))


def mollify(p: PiecewiseProfile, width: float) -> PiecewiseProfile:
    """Smooth the kinks of p over windows of half-width `width`"""
    require("width", width, POSITIVE)
    if width >= 0.5 * p.shortest_segment:
        raise ValidationError(
            f"mollification width {width} must be below half the shortest segment ({p.shortest_segment})"
        )
    return p.with_width(width)


def smooth_step(t0: float, t1: float, width: float) -> PiecewiseProfile:
    """0 for t <= t0, 1 for t >= t1, monotone and C^1 in between"""
    require_that(t0 < t1, f"need t0 < t1, got {t0}, {t1}")
    require("width", width, RangeValidator(min_val=0.0, max_val=0.5 * (t1 - t0), min_inclusive=False, max_inclusive=False))
    return PiecewiseProfile([t0 + width, t1 - width], [0.0, 1.0], width)


def cutoff(t0: float, t1: float, width: float) -> PiecewiseProfile:
    """1 for t <= t0, 0 for t >= t1"""
    require_that(t0 < t1, f"need t0 < t1, got {t0}, {t1}")
    require("width", width, RangeValidator(min_val=0.0, max_val=0.5 * (t1 - t0), min_inclusive=False, max_inclusive=False))
    return PiecewiseProfile([t0 + width, t1 - width], [1.0, 0.0], width)


def plateau(lo: float, hi: float, margin: float) -> PiecewiseProfile:
    """1 on [lo, hi], supported in [lo - margin, hi + margin]"""
    require("margin", margin, POSITIVE)
    require_that(lo <= hi, f"need lo <= hi, got {lo}, {hi}")
    m = margin
    return PiecewiseProfile(
        [lo - 0.75 * m, lo - 0.25 * m, hi + 0.25 * m, hi + 0.75 * m], [0.0, 1.0, 1.0, 0.0], 0.25 * m
    )


def identity_window(lo: float, hi: float, margin: float) -> PiecewiseProfile:
    """t on [lo - margin, hi + margin], supported in [lo - 2 margin, hi + 2 margin]"""
    require("margin", margin, POSITIVE)
    require_that(lo < hi, f"need lo < hi, got {lo}, {hi}")
    m = margin
    a, b = lo - 1.25 * m, hi + 1.25 * m
    return PiecewiseProfile([lo - 1.75 * m, a, b, hi + 1.75 * m], [0.0, a, b, 0.0], 0.25 * m)


def ramp_u1(spec) -> PiecewiseProfile:
    """
    Ramp rising from 0 to 1 on (0, A) and falling back on (A, C).

    Flat on [0, eps], around A on [A - eps, A + eps] and after C - eps; slope
    1 on the four eps-long shoulders; linear in between. Kinks are mollified
    over eps / 4, so the derivative vanishes on [0, 3 eps / 4], on
    [A - 3 eps / 4, A + 3 eps / 4] and beyond C - 3 eps / 4.
    """
    A, C, e = spec.A, spec.C, spec.eps
    knots = [e, 2 * e, A - 2 * e, A - e, A + e, A + 2 * e, C - 2 * e, C - e]
    values = [0.0, e, 1.0 - e, 1.0, 1.0, 1.0 - e, e, 0.0]
    return PiecewiseProfile(knots, values, 0.25 * e)


def default_radial_base(plateau: float = 0.25, support: float = 0.5, width: float = 1.0 / 32.0) -> PiecewiseProfile:
    """The base h: 1 on [0, plateau], decreasing to 0 at support"""
    require_that(
        0.0 < plateau < support and 0.0 < width <= 0.25 * (support - plateau),
        f"base profile needs 0 < plateau < support and width <= (support - plateau) / 4, got {plateau}, {support}, {width}",
    )
    return cutoff(plateau, support, width)


def check_radial_base(base: PiecewiseProfile, tol: float = 1e-12) -> None:
    """Shape requirements on h: h(0) = 1, h' = 0 near 0, 0 <= h <= 1, h = 0 beyond 1/2"""
    t = np.linspace(0.0, 1.0, 4097)
    values = base.value(t)
    if abs(float(base.value(np.array([0.0]))[0]) - 1.0) > tol:
        raise ValidationError("base profile must equal 1 at 0")
    if np.any(values < -tol) or np.any(values > 1.0 + tol):
        raise ValidationError("base profile must take values in [0, 1]")
    if base.support()[1] > 0.5 + tol:
        raise ValidationError("base profile must vanish beyond 1/2")
    first_break = base.breaks().min() if base.breaks().size else math.inf
    if not first_break > 0.0:
        raise ValidationError("base profile must be constant near 0")


def radial_decay(alpha: float, base: PiecewiseProfile, scale: float = 1.0) -> RadialDecayProfile:
    """h_alpha(r) = h(r^alpha); supported in [0, 2^(-1/alpha)] for the default base"""
    check_radial_base(base)
    return RadialDecayProfile(base, alpha, scale)


def profile_from_dict(data: Dict[str, Any]) -> Profile1D:
    kind = data.get("kind")
    if kind == PiecewiseProfile.kind:
        return PiecewiseProfile.from_dict(data)
    if kind == RadialDecayProfile.kind:
        return RadialDecayProfile.from_dict(data)
    raise ValidationError(f"unknown profile kind: {kind}")


def profile_to_json(p: Profile1D) -> str:
    return to_json(p.to_dict()).decode()


def profile_from_json(text: str) -> Profile1D:
    try:
        data = from_json(text)
    except ValueError as e:
        raise ValidationError(f"malformed profile JSON: {e}")
    return profile_from_dict(data)
