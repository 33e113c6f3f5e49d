"""
Adaptive one-dimensional quadrature of profile moments.

Intervals are split at the profile breaks, where the formula changes;
on each piece the composite midpoint rule starts at ten nodes per
transition width and doubles until two passes agree.
"""
import logging
import math
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from ..types.exceptions import SupportError
from ..validation.preconditions import require, require_that
from ..validators.base import FINITE_EXPONENT, IntegerValidator, RangeValidator
from .base import PiecewiseProfile, Profile1D, RadialDecayProfile

logger = logging.getLogger(__name__)

RTOL = 1e-8
ATOL = 1e-15
MAX_NODES = 2 ** 22

Integrand = Callable[[np.ndarray], np.ndarray]


def _midpoint(func: Integrand, a: float, b: float, n: int) -> float:
    h = (b - a) / n
    t = a + (np.arange(n) + 0.5) * h
    return float(np.sum(func(t)) * h)


def _piece(func: Integrand, a: float, b: float, n: int, rtol: float, atol: float) -> float:
    old = _midpoint(func, a, b, n)
    while True:
        n *= 2
        new = _midpoint(func, a, b, n)
        if abs(new - old) <= max(rtol * abs(new), atol):
            return new
        if n >= MAX_NODES:
            logger.warning(
                "quadrature on [%g, %g] stopped at %d nodes, last change %.3e", a, b, n, abs(new - old)
            )
            return new
        old = new


def integrate_piecewise(
    func: Integrand,
    interval: Tuple[float, float],
    breaks: Sequence[float] = (),
    width: float = 0.0,
    rtol: float = RTOL,
    atol: float = ATOL,
) -> float:
    """Integral of a vectorized func over a finite interval, split at the given breaks"""
    a, b = (float(v) for v in interval)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise SupportError(f"quadrature needs a finite interval, got [{a}, {b}]")
    if b <= a:
        return 0.0
    inner = [float(t) for t in breaks if a < t < b]
    edges = np.unique(np.concatenate([[a], inner, [b]]))
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        n0 = 16 if width <= 0.0 else max(16, math.ceil(10.0 * (hi - lo) / width))
        total += _piece(func, float(lo), float(hi), min(n0, MAX_NODES), rtol, atol)
    logger.debug("integrated over %d pieces of [%g, %g]", len(edges) - 1, a, b)
    return total


def _finite_support(p: Profile1D) -> Tuple[float, float]:
    lo, hi = p.support()
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise SupportError(f"profile support ({lo}, {hi}) is not compact; pass an interval")
    return lo, hi


def profile_lq_of_derivative(
    p: Profile1D, q: float, interval: Optional[Tuple[float, float]] = None
) -> float:
    """Integral of |p'|^q over interval (default: the support of p)"""
    require("q", q, FINITE_EXPONENT)
    interval = interval or _finite_support(p)
    return integrate_piecewise(lambda t: np.abs(p.derivative(t)) ** q, interval, p.breaks(), p.width)


def _radial_interval(p: Profile1D) -> Tuple[float, float]:
    _, hi = _finite_support(p)
    require_that(hi >= 0.0, f"radial profile must be supported on r >= 0, support ends at {hi}")
    return 0.0, hi


def _decay_moment(p: RadialDecayProfile, k: float, j: int, use_derivative: bool) -> float:
    """
    Integral of |p|^k r^j (or |p'|^k r^j) in the base variable s = (r / scale)^alpha,
    where the integrand is a smooth power of s on each piece of the base.
    """
    a, c, h = p.alpha, p.scale, p.base
    end = h.support()[1]
    if not math.isfinite(end):
        raise SupportError(f"radial base must vanish for large arguments, support ends at {end}")
    interval = (0.0, end)
    if use_derivative:
        power = k - 1.0 + (j + 1.0 - k) / a
        factor = a ** (k - 1.0) * c ** (j + 1.0 - k)
        func = lambda s: np.abs(h.derivative(s)) ** k * s ** power
    else:
        power = (j + 1.0) / a - 1.0
        factor = c ** (j + 1.0) / a
        func = lambda s: np.abs(h.value(s)) ** k * s ** power
    return factor * integrate_piecewise(func, interval, h.breaks(), h.width)


def radial_moment(p: Profile1D, k: float, m: int, use_derivative: bool) -> float:
    """
    Radial integrals over r >= 0.

    With use_derivative, the integral of |p'(r)|^k r^(m-1); otherwise the
    integral of |p(r)|^k.
    """
    require("k", k, FINITE_EXPONENT)
    require("m", m, IntegerValidator(min_val=1))
    j = m - 1 if use_derivative else 0
    if isinstance(p, RadialDecayProfile):
        return _decay_moment(p, k, j, use_derivative)
    if use_derivative:
        func = lambda r: np.abs(p.derivative(r)) ** k * r ** j
    else:
        func = lambda r: np.abs(p.value(r)) ** k
    return integrate_piecewise(func, _radial_interval(p), p.breaks(), p.width)


def radial_volume_moment(p: Profile1D, k: float, m: int) -> float:
    """Integral of |p(r)|^k r^(m-1) dr, the radial part of an m-dimensional L_k integral"""
    require("k", k, FINITE_EXPONENT)
    require("m", m, IntegerValidator(min_val=1))
    if isinstance(p, RadialDecayProfile):
        return _decay_moment(p, k, m - 1, use_derivative=False)
    func = lambda r: np.abs(p.value(r)) ** k * r ** (m - 1)
    return integrate_piecewise(func, _radial_interval(p), p.breaks(), p.width)


def sup_derivative(p: PiecewiseProfile) -> float:
    """max |p'|; mollification never exceeds the skeleton's steepest slope"""
    return p.max_slope


def decay_bound(alpha: float, k: float, m: int, base: PiecewiseProfile) -> float:
    """
    Upper bound on the derivative moment of h_alpha:

        alpha^(k-1) |h'|_inf^k / 2^((m - k) / alpha + k - 1)
    """
    require("alpha", alpha, RangeValidator(min_val=0.0, max_val=1.0, min_inclusive=False))
    require("k", k, FINITE_EXPONENT)
    require_that(k <= m, f"decay needs k <= m, got k={k}, m={m}")
    exponent = (m - k) / alpha + k - 1.0
    return alpha ** (k - 1.0) * sup_derivative(base) ** k / 2.0 ** exponent


def field_moment_bound(profile: RadialDecayProfile, k: float) -> float:
    """|h^k|_inf / 2^(1 / alpha): bound on the integral of h_alpha^k dr"""
    require("k", k, FINITE_EXPONENT)
    t = np.linspace(0.0, 1.0, 4097)
    peak = float(np.max(np.abs(profile.base.value(t))))
    return peak ** k * profile.scale / 2.0 ** (1.0 / profile.alpha)
