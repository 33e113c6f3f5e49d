"""
Vanishing of pb4^q in codimension m = 2n - d >= q.

In the chart, X1 is the box [0, b]^d in the first d coordinates and F
depends only on the distance r to that plane: F = g(r) with
g(r) = h_alpha(r / delta). Every L_q quantity separates into the box
volume b^d, the unit sphere volume C_m and a one-dimensional radial
integral.
"""
import logging
import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from scipy.special import gamma

from ..core.parallel import parallel_map
from ..profiles.base import PiecewiseProfile, RadialDecayProfile, default_radial_base, radial_decay
from ..profiles.quadrature import decay_bound, radial_moment, radial_volume_moment
from ..types.config import HighDimSpec
from ..types.exceptions import ValidationError
from ..types.responses import DecayRow, DecayTable
from ..validation.preconditions import require, require_that
from ..validators.base import FINITE_EXPONENT, NONNEGATIVE, POSITIVE, IntegerValidator

logger = logging.getLogger(__name__)

DENSE_MAX_CODIM = 3


def unit_sphere_volume(m: int) -> float:
    """C_m = 2 pi^(m/2) / Gamma(m/2), the volume of the unit sphere in R^m"""
    require("m", m, IntegerValidator(min_val=1))
    return 2.0 * math.pi ** (m / 2.0) / float(gamma(m / 2.0))


@dataclass(frozen=True)
class VanishingProfile:
    """F = g(r) on the chart, r the distance to the plane of X1"""

    spec: HighDimSpec
    base: PiecewiseProfile
    profile: RadialDecayProfile

    @property
    def m(self) -> int:
        return self.spec.m

    @property
    def box_volume(self) -> float:
        return self.spec.b ** self.spec.d

    @property
    def tube_radius(self) -> float:
        """F vanishes for r beyond this radius, delta * 2^(-1/alpha) for the default base"""
        return self.profile.support()[1]

    def value(self, z: np.ndarray) -> np.ndarray:
        """F at points z of shape (..., 2n)"""
        z = np.asarray(z, dtype=float)
        require_that(z.shape[-1] == 2 * self.spec.n, f"points need {2 * self.spec.n} coordinates")
        r = np.linalg.norm(z[..., self.spec.d:], axis=-1)
        return self.profile.value(r)


def vanishing_profile(spec: HighDimSpec) -> VanishingProfile:
    base = default_radial_base(spec.base_plateau, spec.base_support, spec.base_width)
    return VanishingProfile(spec, base, radial_decay(spec.alpha, base, spec.delta))


def grad_lq_estimate(descriptor: VanishingProfile, q: float) -> float:
    """Integral of |grad F|^q over the tube: b^d C_m int |g'(r)|^q r^(m-1) dr"""
    require("q", q, FINITE_EXPONENT)
    m = descriptor.m
    return descriptor.box_volume * unit_sphere_volume(m) * radial_moment(descriptor.profile, q, m, True)


def field_lq_estimate(descriptor: VanishingProfile, q: float) -> float:
    """Integral of |F|^q over the tube: b^d C_m int |g(r)|^q r^(m-1) dr"""
    require("q", q, FINITE_EXPONENT)
    m = descriptor.m
    return descriptor.box_volume * unit_sphere_volume(m) * radial_volume_moment(descriptor.profile, q, m)


def field_lq_bound(descriptor: VanishingProfile, q: float) -> float:
    """b^d C_m delta^(m-1) int |g|^q dr, an upper bound on field_lq_estimate"""
    require("q", q, FINITE_EXPONENT)
    m = descriptor.m
    radial = radial_moment(descriptor.profile, q, m, use_derivative=False)
    return descriptor.box_volume * unit_sphere_volume(m) * descriptor.spec.delta ** (m - 1) * radial


def grad_lq_bound(descriptor: VanishingProfile, q: float) -> float:
    """Closed-form bound on grad_lq_estimate for the unscaled profile (delta = 1)"""
    spec = descriptor.spec
    radial = decay_bound(spec.alpha, q, spec.m, descriptor.base)
    return descriptor.box_volume * unit_sphere_volume(spec.m) * radial * spec.delta ** (spec.m - q)


def decay_curve(spec: HighDimSpec, alphas: Sequence[float]) -> DecayTable:
    """One row per alpha: the q-th powers of |grad F|_q and |F|_q"""
    alphas = [float(a) for a in alphas]
    require_that(len(alphas) > 0, "alpha schedule is empty")
    require_that(all(b < a for a, b in zip(alphas, alphas[1:])), f"alpha schedule must decrease: {alphas}")

    def row(alpha: float) -> DecayRow:
        descriptor = vanishing_profile(replace(spec, alpha=alpha))
        return DecayRow(
            alpha=alpha,
            grad_lq_q=grad_lq_estimate(descriptor, spec.q),
            field_lq_q=field_lq_estimate(descriptor, spec.q),
        )

    table = DecayTable(rows=parallel_map(row, alphas))
    if not table.is_strictly_decreasing():
        logger.warning("decay table is not strictly decreasing for n=%d d=%d q=%g", spec.n, spec.d, spec.q)
    return table


def bracket_bound(descriptor: VanishingProfile, G_lipschitz: float, q: float) -> float:
    """
    |{F,G}|_q <= max|sgrad G| * |grad F|_q, from the pointwise bound
    |{F,G}| <= |grad F| |sgrad G|.
    """
    require("G_lipschitz", G_lipschitz, NONNEGATIVE)
    return G_lipschitz * grad_lq_estimate(descriptor, q) ** (1.0 / q)


def dense_grad_estimate(descriptor: VanishingProfile, q: float, nodes: int = 400) -> float:
    """Midpoint quadrature of |grad F|^q on a cube around the tube, for m <= 3"""
    require("q", q, FINITE_EXPONENT)
    require("nodes", nodes, IntegerValidator(min_val=8))
    m = descriptor.m
    if m > DENSE_MAX_CODIM:
        raise ValidationError(f"dense cross-check is limited to m <= {DENSE_MAX_CODIM}, got m={m}")
    R = descriptor.tube_radius
    h = 2.0 * R / nodes
    axis = -R + (np.arange(nodes) + 0.5) * h
    rest = np.meshgrid(*([axis] * (m - 1)), indexing="ij", sparse=True) if m > 1 else []
    partial = sum(c ** 2 for c in rest) if rest else 0.0
    total = 0.0
    for x0 in axis:
        r = np.sqrt(x0 ** 2 + partial)
        total += float(np.sum(np.abs(descriptor.profile.derivative(r)) ** q))
    return descriptor.box_volume * total * h ** m


def product_lower_bound(n: int, vol_N: float) -> float:
    """pb4^1 >= 2 Vol(N) / n for the product quadruple in codimension one"""
    require("n", n, IntegerValidator(min_val=2))
    require("vol_N", vol_N, POSITIVE)
    return 2.0 * vol_N / n
