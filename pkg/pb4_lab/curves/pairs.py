"""
Explicit pairs for the four arcs of a simple closed curve.

Separating curve: on the cylinder model F(t, theta) = u(t) v(s) and
G = w(t) g(s), with s = theta - a1 (mod 2 pi). u is the quadrilateral ramp
in t, peaking on the curve; w is a plateau equal to 1 on the support of u,
so G vanishes near both ends of the cylinder; g falls across D1 and rises
across D3; v is 0 on D1 and 1 on D3. The bracket -u'(t) v(s) g'(s) lives over D3 only, so its
L_q norm is |u'|_q |g'|_q, close to the two-component formula when D3
takes almost the whole circle.

Non-separating curve: on the flat torus F and G depend on p alone, so
the bracket vanishes identically.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..core.calculus import lq_norm
from ..core.grid import ExponentLike, ExtendedExponent, Grid2D, NodeMask, sample
from ..core.parallel import parallel_map
from ..profiles.base import PiecewiseProfile, plateau, ramp_u1
from ..quadrilateral.certificates import stokes_defect, verify_lower
from ..quadrilateral.construction import AdmissiblePair, SideMasks, check_admissible
from ..types.config import TWO_PI, CurvePartition, CylinderModel, RampSpec
from ..types.enums import Region
from ..types.exceptions import ResolutionError, ValidationError
from ..types.responses import CurveReport, StokesRecord
from ..validation.preconditions import require, require_that
from ..validators.base import POSITIVE
from .cylinder import cylinder_grid
from .formula import pb4_curve_formula

logger = logging.getLogger(__name__)

MIN_ARC_CELLS = 16
MIN_STRIP_CELLS = 8
SHORT_ARC_FRACTION = 0.01


@dataclass(frozen=True)
class SeparatingPair:
    """The pair built around a separating curve, with its measured norm"""

    pair: AdmissiblePair
    norm: float
    q: float
    model: CylinderModel
    partition: CurvePartition


def default_partition(short_fraction: float = SHORT_ARC_FRACTION) -> CurvePartition:
    """D1, D2 and D4 each take short_fraction of the circle, D3 the rest"""
    require_that(0.0 < short_fraction < 0.25, f"short arc fraction must lie in (0, 1/4), got {short_fraction}")
    L = TWO_PI * short_fraction
    return CurvePartition((0.0, L, 2.0 * L, TWO_PI - L))


def rotate_partition(partition: CurvePartition, angle: float) -> CurvePartition:
    return partition.rotated(angle)


def _relative_angles(partition: CurvePartition) -> Tuple[float, float, float]:
    a1, a2, a3, a4 = partition.angles
    return a2 - a1, a3 - a1, a4 - a1


def _arc_masks(grid: Grid2D, s: np.ndarray, column: np.ndarray, ends: Tuple[float, float, float]) -> SideMasks:
    """Closed arcs D1..D4 of the curve, as node sets on the given column"""
    b2, b3, b4 = ends
    tol = 1e-9 * grid.hy

    def arc(lo: float, hi: float) -> NodeMask:
        return NodeMask(grid, column & (s >= lo - tol) & (s <= hi + tol))

    wrap = NodeMask(grid, column & ((s >= b4 - tol) | (s <= tol)))
    return SideMasks(X0=arc(0.0, b2), X1=arc(b3, b4), Y0=arc(b2, b3), Y1=wrap)


def _angular_profiles(partition: CurvePartition) -> Tuple[PiecewiseProfile, PiecewiseProfile]:
    """(v, g) as functions of s in [0, 2 pi)"""
    L1, L2, L3, L4 = partition.arc_lengths
    b2, b3, b4 = _relative_angles(partition)
    mu = min(partition.arc_lengths) / 8.0
    g = PiecewiseProfile([mu, b2 - mu, b3 + mu, b4 - mu], [1.0, 0.0, 0.0, 1.0], 0.5 * mu)
    v = PiecewiseProfile(
        [b2 + 0.25 * L2, b3 - 0.25 * L2, b4 + 0.25 * L4, TWO_PI - 0.25 * L4],
        [0.0, 1.0, 1.0, 0.0],
        min(L2, L4) / 16.0,
    )
    return v, g


def separating_pair(
    model: CylinderModel,
    partition: CurvePartition,
    q: ExponentLike,
    eps: float,
    C_A: float,
    C_B: float,
    cells: int = 512,
    angular_cells: int = 2048,
) -> SeparatingPair:
    """
    Admissible pair for the arcs of the curve t = t* on the cylinder.

    u is the ramp with peak C_A / 2 pi and end (C_A + C_B) / 2 pi in t, so
    the pair lives in components of areas C_A < A and C_B < B; eps is the
    ramp margin in area units.
    """
    require("eps", eps, POSITIVE)
    require_that(0.0 < C_A < model.A, f"need 0 < C_A < A, got C_A={C_A}, A={model.A}")
    require_that(0.0 < C_B < model.B, f"need 0 < C_B < B, got C_B={C_B}, B={model.B}")
    exponent = ExtendedExponent.coerce(q)
    grid = cylinder_grid(model, cells, angular_cells)

    shortest = min(partition.arc_lengths)
    if shortest < MIN_ARC_CELLS * grid.hy:
        raise ResolutionError(
            f"shortest arc {shortest:.4g} spans {shortest / grid.hy:.1f} angular cells, need {MIN_ARC_CELLS}"
        )

    ramp = RampSpec(C_A / TWO_PI, (C_A + C_B) / TWO_PI, eps / TWO_PI)
    u = ramp_u1(ramp)
    shift = model.t_star - ramp.A
    lo, hi = u.support()
    if lo + shift < grid.x_min + 2 * grid.hx or hi + shift > grid.x_max - 2 * grid.hx:
        raise ResolutionError(
            f"ramp support ({lo + shift:.4g}, {hi + shift:.4g}) needs two nodes of margin inside the cylinder grid"
        )
    per_eps = ramp.eps / grid.hx
    if per_eps < MIN_STRIP_CELLS:
        logger.warning("eps=%g is resolved by only %.1f cells across the cylinder", eps, per_eps)

    a1 = partition.angles[0]
    v, g = _angular_profiles(partition)

    def F_fn(t, theta):
        return u(t - shift) * v(np.mod(theta - a1, TWO_PI))

    t_lo, t_hi = lo + shift, hi + shift
    margin = min(ramp.eps, t_lo - grid.xs[0] - 0.5 * grid.hx, grid.xs[-1] - 0.5 * grid.hx - t_hi)
    window = plateau(t_lo, t_hi, margin)

    def G_fn(t, theta):
        return window(t) * g(np.mod(theta - a1, TWO_PI))

    F, G = sample(grid, F_fn), sample(grid, G_fn)
    T, Theta = grid.mesh()
    row = np.isclose(T, model.t_star, rtol=0.0, atol=1e-9 * grid.hx)
    masks = _arc_masks(grid, np.mod(Theta - a1, TWO_PI), row, _relative_angles(partition))
    admissible = check_admissible(F, G, masks)
    if not admissible:
        raise ResolutionError("sampled curve pair violates the arc conditions")
    inside = NodeMask(grid, T <= model.t_star + 1e-9 * grid.hx)
    pair = AdmissiblePair(F, G, F_fn, G_fn, masks, admissible, inside)
    norm = lq_norm(pair.bracket(), exponent)
    logger.info("separating pair A=%g B=%g q=%s: norm %.6g", model.A, model.B, exponent, norm)
    return SeparatingPair(pair, norm, exponent.value, model, partition)


def component_stokes(result: SeparatingPair) -> Tuple[StokesRecord, StokesRecord]:
    """Signed bracket integrals over t < t* and t > t*: about -1 and +1"""
    pair = result.pair
    return stokes_defect(pair, Region.INSIDE), stokes_defect(pair, Region.COMPLEMENT)


def curve_report(result: SeparatingPair) -> CurveReport:
    """Formula, measured norm and, for finite q, the per-component lower-bound certificate"""
    model = result.model
    formula = pb4_curve_formula(model.A, model.B, result.q).value
    certificate = None
    if math.isfinite(result.q):
        certificate = verify_lower(result.pair, result.q, model.A, model.A + model.B)
    return CurveReport(A=model.A, B=model.B, q=result.q, formula=formula, measured=result.norm, certificate=certificate)


def partition_independence(
    model: CylinderModel,
    partition: CurvePartition,
    q: ExponentLike,
    eps: float,
    C_A: float,
    C_B: float,
    steps: int = 7,
    cells: int = 512,
    angular_cells: int = 2048,
) -> Tuple[float, float]:
    """Norms for the partition and for its rotation by a whole number of angular grid steps"""
    angle = steps * cylinder_grid(model, cells, angular_cells).hy
    partitions = [partition, rotate_partition(partition, angle)]
    results = parallel_map(
        lambda p: separating_pair(model, p, q, eps, C_A, C_B, cells, angular_cells).norm, partitions
    )
    return results[0], results[1]


def _p_profiles(strip: Tuple[float, float], points: Tuple[float, float, float, float], margin: float):
    """(f, g) of p: f is 0 on D1 and 1 on D3, g is 0 on D2 and 1 on D4"""
    a1, a2, a3, a4 = points
    _, p_hi = strip
    m = margin
    f = PiecewiseProfile([a2 + m, a3 - m, a4 + m, p_hi - m], [0.0, 1.0, 1.0, 0.0], 0.5 * m)
    g = PiecewiseProfile([a1 + m, a2 - m, a3 + m, a4 - m], [1.0, 0.0, 0.0, 1.0], 0.5 * m)
    return f, g


def nonseparating_pair(
    torus: Grid2D,
    strip: Tuple[float, float],
    points: Tuple[float, float, float, float],
    q0: Optional[float] = None,
) -> AdmissiblePair:
    """
    Commuting admissible pair for a meridian q = q0 of the flat torus.

    F = f(p) and G = g(p); both are constant off the strip (F = 0, G = 1),
    and the arcs D1..D4 of the meridian are cut at the four points.
    """
    if not (torus.periodic_x and torus.periodic_y):
        raise ValidationError("the torus grid must be periodic in both axes")
    p_lo, p_hi = (float(v) for v in strip)
    a1, a2, a3, a4 = (float(v) for v in points)
    require_that(torus.y_min <= p_lo < p_hi <= torus.y_max, f"strip {strip} leaves the torus")
    require_that(p_lo < a1 < a2 < a3 < a4 < p_hi, f"need p_lo < a1 < a2 < a3 < a4 < p_hi, got {strip}, {points}")
    pieces = (a2 - a1, a3 - a2, a4 - a3, p_hi - a4)
    h = torus.hy
    if min(pieces) < MIN_STRIP_CELLS * h:
        raise ResolutionError(f"arcs {pieces} must each span {MIN_STRIP_CELLS} cells of size {h:.4g}")

    f, g = _p_profiles((p_lo, p_hi), (a1, a2, a3, a4), min(pieces) / 8.0)

    def F_fn(x, p):
        return f(p)

    def G_fn(x, p):
        return g(p)

    F, G = sample(torus, F_fn), sample(torus, G_fn)
    X, P = torus.mesh()
    q0 = float(torus.xs[torus.nx // 2]) if q0 is None else q0
    column_x = float(torus.xs[int(np.argmin(np.abs(torus.xs - q0)))])
    column = X == column_x
    tol = 1e-9 * h

    def arc(lo: float, hi: float) -> NodeMask:
        return NodeMask(torus, column & (P >= lo - tol) & (P <= hi + tol))

    masks = SideMasks(
        X0=arc(a1, a2),
        X1=arc(a3, a4),
        Y0=arc(a2, a3),
        Y1=NodeMask(torus, column & ((P >= a4 - tol) | (P <= a1 + tol))),
    )
    admissible = check_admissible(F, G, masks)
    if not admissible:
        raise ResolutionError("sampled meridian pair violates the arc conditions")
    logger.info("meridian pair at q0=%g on a %dx%d torus", column_x, torus.nx, torus.ny)
    return AdmissiblePair(F, G, F_fn, G_fn, masks, admissible)


def shifted_points(points: Tuple[float, float, float, float], steps: int, torus: Grid2D) -> Tuple[float, ...]:
    """Partition points moved along the meridian by whole grid steps"""
    return tuple(a + steps * torus.hy for a in points)

