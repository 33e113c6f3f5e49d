"""
The smoothed pb4 objective on a discretized admissible class.

S(F, G) = sum over nodes of (b^2 + mu)^(q/2) w hx hy, b = {F, G}. Its
gradient with respect to the node values comes from the transposed
difference matrices:

    dS/dF = -Dx^T(c G_y / w) + Dy^T(c G_x / w)
    dS/dG =  Dx^T(c F_y / w) - Dy^T(c F_x / w)

with c = q b (b^2 + mu)^(q/2 - 1) w hx hy.
"""
import logging
import math
from dataclasses import dataclass, replace
from typing import Tuple

import numpy as np
from scipy import ndimage

from ..core.calculus import integrate
from ..core.grid import STANDARD_DENSITY, Grid2D, ScalarField, SymplecticDensity, aligned_axis, make_grid, rectangle_mask
from ..core.parallel import parallel_map
from ..core.stencils import stencil_for
from ..quadrilateral.construction import AdmissiblePair, SideMasks, build_pair, check_admissible
from ..types.config import QuadProblem
from ..types.exceptions import UnsupportedError, ValidationError
from ..validation.parsing import parse_extended_real
from ..validation.preconditions import require, require_that
from ..validators.base import FINITE_EXPONENT, POSITIVE, IntegerValidator

logger = logging.getLogger(__name__)

DEFAULT_MU = 1e-8
WARM_START_EPS = 0.05


@dataclass(frozen=True)
class OptProblem:
    """Grid, pinned sets and exponent of one minimization; values are boxed to [0, 1]"""

    grid: Grid2D
    masks: SideMasks
    q: float
    density: SymplecticDensity = STANDARD_DENSITY
    mu: float = DEFAULT_MU
    max_iter: int = 200
    step: float = 0.1
    box: Tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        if math.isinf(parse_extended_real(self.q)):
            raise UnsupportedError("the objective is not minimized for q = inf")
        require("q", self.q, FINITE_EXPONENT)
        require("mu", self.mu, POSITIVE)
        require("step", self.step, POSITIVE)
        require("max_iter", self.max_iter, IntegerValidator(min_val=0))
        require_that(self.box[0] < self.box[1], f"empty box {self.box}")
        self.grid.require_same(self.masks.X0.grid, "problem and masks")
        lo, hi = self.box
        if not (lo <= 0.0 and hi >= 1.0):
            raise ValidationError(f"box {self.box} cannot hold the pinned values 0 and 1")

    @property
    def area(self) -> float:
        """Total area under the density"""
        return integrate(ScalarField(self.grid, np.ones(self.grid.shape)), density=self.density)

    @property
    def floor(self) -> float:
        """Objective of any commuting pair: mu^(q/2) times the area"""
        return self.mu ** (self.q / 2.0) * self.area


def objective(
    F: ScalarField,
    G: ScalarField,
    q: float,
    density: SymplecticDensity = STANDARD_DENSITY,
    mu: float = DEFAULT_MU,
) -> Tuple[float, ScalarField, ScalarField]:
    """Surrogate value and its exact gradients with respect to the node values of F and G"""
    require("q", q, FINITE_EXPONENT)
    require("mu", mu, POSITIVE)
    F.grid.require_same(G.grid)
    grid = F.grid
    stencil = stencil_for(grid)
    w = np.broadcast_to(density.on(grid), grid.shape)
    Fx, Fy = stencil.gradient(F.values)
    Gx, Gy = stencil.gradient(G.values)
    b = -(Fx * Gy - Fy * Gx) / w
    smooth = b * b + mu
    weight = w * grid.cell_area
    value = float(np.sum(smooth ** (q / 2.0) * weight))
    c = q * b * smooth ** (q / 2.0 - 1.0) * weight

    def grad_F():
        return stencil.ddy_adjoint(c * Gx / w) - stencil.ddx_adjoint(c * Gy / w)

    def grad_G():
        return stencil.ddx_adjoint(c * Fy / w) - stencil.ddy_adjoint(c * Fx / w)

    dF, dG = parallel_map(lambda task: task(), [grad_F, grad_G])
    return value, ScalarField(grid, dF), ScalarField(grid, dG)


def objective_value(F: ScalarField, G: ScalarField, problem: OptProblem) -> float:
    return objective(F, G, problem.q, problem.density, problem.mu)[0]


def gradient_check(problem: OptProblem, F: ScalarField, G: ScalarField, directions: int = 4, seed: int = 0) -> float:
    """
    Largest relative gap between the adjoint directional derivative and a
    central finite difference, over random unit directions.
    """
    require("directions", directions, IntegerValidator(min_val=1))
    rng = np.random.default_rng(seed)
    _, dF, dG = objective(F, G, problem.q, problem.density, problem.mu)
    worst = 0.0
    for _ in range(directions):
        pF = rng.normal(size=F.grid.shape)
        pG = rng.normal(size=F.grid.shape)
        norm = math.sqrt(float(np.sum(pF ** 2) + np.sum(pG ** 2)))
        pF, pG = pF / norm, pG / norm
        h = 1e-6 * max(1.0, float(np.max(np.abs(F.values))), float(np.max(np.abs(G.values))))
        plus = objective_value(F + F.with_values(h * pF), G + G.with_values(h * pG), problem)
        minus = objective_value(F - F.with_values(h * pF), G - G.with_values(h * pG), problem)
        finite = (plus - minus) / (2.0 * h)
        adjoint = float(np.sum(dF.values * pF) + np.sum(dG.values * pG))
        gap = abs(finite - adjoint) / max(abs(adjoint), abs(finite), 1e-300)
        worst = max(worst, gap)
    logger.debug("gradient check over %d directions: worst relative gap %.3e", directions, worst)
    return worst


def project(problem: OptProblem, F: ScalarField, G: ScalarField) -> Tuple[ScalarField, ScalarField]:
    """Clamp into the box, then pin F = 0 on X0, F = 1 on X1, G = 0 on Y0, G = 1 on Y1"""
    lo, hi = problem.box
    f = np.clip(F.values, lo, hi)
    g = np.clip(G.values, lo, hi)
    m = problem.masks
    f = np.where(m.X0.values, 0.0, np.where(m.X1.values, 1.0, f))
    g = np.where(m.Y0.values, 0.0, np.where(m.Y1.values, 1.0, g))
    return F.with_values(f), G.with_values(g)


def is_feasible(problem: OptProblem, F: ScalarField, G: ScalarField) -> bool:
    lo, hi = problem.box
    m = problem.masks
    in_box = bool(np.all((F.values >= lo) & (F.values <= hi) & (G.values >= lo) & (G.values <= hi)))
    return in_box and bool(
        np.all(F.values[m.X0.values] == 0.0)
        and np.all(F.values[m.X1.values] == 1.0)
        and np.all(G.values[m.Y0.values] == 0.0)
        and np.all(G.values[m.Y1.values] == 1.0)
    )


def pinned_masks(grid: Grid2D, A: float) -> SideMasks:
    """The four sides of Pi, each thickened outward by one node so both stencil parities are pinned"""
    hx, hy = grid.hx, grid.hy
    return SideMasks(
        X0=rectangle_mask(grid, -hx, 0.0, 0.0, 1.0),
        X1=rectangle_mask(grid, A, A + hx, 0.0, 1.0),
        Y0=rectangle_mask(grid, 0.0, A, -hy, 0.0),
        Y1=rectangle_mask(grid, 0.0, A, 1.0, 1.0 + hy),
    )


def rectangle_model(
    A: float, B: float, q: float, cells: int = 256, eps: float = WARM_START_EPS, mu: float = DEFAULT_MU, max_iter: int = 200
) -> Tuple[OptProblem, AdmissiblePair]:
    """
    Pi = [0, A] x [0, 1] on a doubly periodic torus of area about B, with
    the explicit construction (margin eps) as warm start.

    The torus height is 1 + 4 eps plus a few cells and its width B / height,
    both rounded to whole cells with A and 1 on node lines; the realized
    area is problem.area.
    """
    B = parse_extended_real(B)
    require("A", A, POSITIVE)
    require_that(math.isfinite(B) and A < B, f"need finite B > A, got A={A}, B={B}")
    require("cells", cells, IntegerValidator(min_val=32))
    H_est = 1.0 + 4.0 * eps
    h = max(B / H_est, H_est) / cells
    hx = A / max(1, round(A / h))
    hy = 1.0 / max(1, round(1.0 / h))
    my = math.ceil(2.0 * eps / hy - 1e-9) + 2
    y_min, _, _ = aligned_axis(-my * hy, 0.0, hy)
    ny = round(1.0 / hy) + 2 * my + 1
    H = ny * hy
    nx = max(8, round(B / H / hx))
    mx = math.ceil(eps / hx - 1e-9) + 2
    x_min, _, _ = aligned_axis(-mx * hx, 0.0, hx)
    grid = make_grid((x_min, x_min + nx * hx, y_min, y_min + H), nx, ny, periodic_x=True, periodic_y=True)
    C = grid.x_max - 2.5 * hx - eps
    if C - A <= 8.0 * eps:
        raise ValidationError(f"torus of width {grid.x_max - grid.x_min:.4g} leaves no room for C > A + 8 eps")
    logger.info("rectangle model %dx%d, area %.6g (target %g), C=%.4g", nx, ny, grid.area, B, C)

    problem = OptProblem(grid, pinned_masks(grid, A), float(q), mu=mu, max_iter=max_iter)
    warm = build_pair(QuadProblem(A, B, q, eps, C), grid, require_resolved=False)
    F, G = project(problem, warm.F, warm.G)
    start = replace(warm, F=F, G=G, masks=problem.masks, admissible=check_admissible(F, G, problem.masks))
    return problem, start


def random_feasible_init(problem: OptProblem, seed: int = 0, smoothing: float = 2.0) -> AdmissiblePair:
    """Smoothed uniform noise, projected onto the feasible set"""
    rng = np.random.default_rng(seed)
    grid = problem.grid
    modes = ("wrap" if grid.periodic_y else "nearest", "wrap" if grid.periodic_x else "nearest")

    def noise() -> np.ndarray:
        return ndimage.gaussian_filter(rng.uniform(0.0, 1.0, grid.shape), smoothing, mode=modes)

    F, G = project(problem, ScalarField(grid, noise()), ScalarField(grid, noise()))
    return AdmissiblePair(F, G, None, None, problem.masks, check_admissible(F, G, problem.masks))
