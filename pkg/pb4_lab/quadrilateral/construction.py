"""
Explicit near-optimal pairs for the quadrilateral Pi = [0, A] x [0, 1].

F(x, y) = u1(x) v1(y) and G(x, y) = u2(x) v2(y), where u1 is the slope
controlled ramp, v1 and u2 are plateaus and v2 is the identity on
[-eps, 1 + eps]. Wherever u1' is non-zero, u2 = 1, so the bracket is
-u1'(x) v1(y).
"""
import logging
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple, Union

import numpy as np

from ..core.calculus import poisson_bracket
from ..core.grid import FieldFunction, Grid2D, NodeMask, ScalarField, SymplecticDensity
from ..profiles.base import identity_window, plateau, ramp_u1
from ..types.config import GridPolicy, QuadProblem
from ..types.exceptions import ResolutionError, ValidationError
from .mesh import FineZone, ModelMesh, graded_axis

logger = logging.getLogger(__name__)

MIN_CELLS_PER_PIECE = 8


@dataclass(frozen=True)
class SideMasks:
    """Node sets standing for the four constraint sets X0, X1, Y0, Y1"""

    X0: NodeMask
    X1: NodeMask
    Y0: NodeMask
    Y1: NodeMask

    def __post_init__(self):
        grid = self.X0.grid
        for mask in (self.X1, self.Y0, self.Y1):
            grid.require_same(mask.grid, "side masks")
        if not self.X0.isdisjoint(self.X1) or not self.Y0.isdisjoint(self.Y1):
            raise ValidationError("X0, X1 and Y0, Y1 must be pairwise disjoint")
        for name, mask in self.items():
            if mask.count == 0:
                raise ResolutionError(f"side {name} has no grid nodes")

    def items(self):
        return (("X0", self.X0), ("X1", self.X1), ("Y0", self.Y0), ("Y1", self.Y1))


@dataclass(frozen=True)
class FunctionPair:
    """Sampled F, G together with the closed forms they were sampled from"""

    F: ScalarField
    G: ScalarField
    F_fn: FieldFunction
    G_fn: FieldFunction
    mesh: Optional[ModelMesh] = field(default=None, kw_only=True)

    def __post_init__(self):
        self.F.grid.require_same(self.G.grid)
        if self.mesh is None:
            object.__setattr__(self, "mesh", ModelMesh.uniform(self.F.grid))
        else:
            self.mesh.grid.require_same(self.F.grid, "pair and mesh")

    @property
    def grid(self) -> Grid2D:
        return self.F.grid

    @property
    def density(self) -> SymplecticDensity:
        """Area form of the mesh the pair is sampled on"""
        return self.mesh.density

    def sample(self, f: FieldFunction) -> ScalarField:
        return self.mesh.sample(f)

    def bracket(self, density: Optional[SymplecticDensity] = None) -> ScalarField:
        return poisson_bracket(self.F, self.G, density or self.density)


@dataclass(frozen=True)
class AdmissiblePair(FunctionPair):
    """A pair with its constraint sets; `admissible` records the sign conditions"""

    masks: SideMasks
    admissible: bool
    inside: Optional[NodeMask] = None


def check_admissible(F: ScalarField, G: ScalarField, masks: SideMasks, tol: float = 1e-9) -> bool:
    """F <= 0 on X0, F >= 1 on X1, G <= 0 on Y0, G >= 1 on Y1, up to tol"""
    F.grid.require_same(G.grid)
    F.grid.require_same(masks.X0.grid, "pair and masks")
    return bool(
        np.all(F.values[masks.X0.values] <= tol)
        and np.all(F.values[masks.X1.values] >= 1.0 - tol)
        and np.all(G.values[masks.Y0.values] <= tol)
        and np.all(G.values[masks.Y1.values] >= 1.0 - tol)
    )


def model_grid(problem: QuadProblem, policy: GridPolicy = GridPolicy()) -> ModelMesh:
    """
    Graded mesh over K plus policy.margin_cells fine cells, with node lines on the four sides of Pi.

    The coarse spacing is (longer side of K) / policy.cells. Around every
    transition of the pair the spacing drops to eps / policy.cells_per_eps
    (or the coarse spacing, if smaller), so each eps-wide piece gets at
    least cells_per_eps cells whatever the coarse resolution.
    """
    x_lo, x_hi, y_lo, y_hi = problem.support
    coarse = max(x_hi - x_lo, y_hi - y_lo) / policy.cells
    e, A, C = problem.eps, problem.A, problem.C
    fine = min(e / policy.cells_per_eps, coarse)
    pad = policy.margin_cells * fine
    x_zones = (
        FineZone(-2 * e - pad, 3 * e, (0.0,)),
        FineZone(A - 3 * e, A + 3 * e, (A,)),
        FineZone(C - 3 * e, C + 2 * e + pad),
    )
    y_zones = (
        FineZone(-3 * e - pad, e, (0.0,)),
        FineZone(1.0 - e, 1.0 + 3 * e + pad, (1.0,)),
    )
    mesh = ModelMesh.graded(graded_axis(x_zones, fine, coarse), graded_axis(y_zones, fine, coarse))
    logger.info("model mesh %dx%d, fine step %.3g, coarse step %.3g", mesh.grid.nx, mesh.grid.ny, fine, coarse)
    return mesh


def side_masks(mesh: Union[ModelMesh, Grid2D], A: float) -> SideMasks:
    mesh = _as_mesh(mesh)
    return SideMasks(
        X0=mesh.rectangle_mask(0.0, 0.0, 0.0, 1.0),
        X1=mesh.rectangle_mask(A, A, 0.0, 1.0),
        Y0=mesh.rectangle_mask(0.0, A, 0.0, 0.0),
        Y1=mesh.rectangle_mask(0.0, A, 1.0, 1.0),
    )


def _as_mesh(mesh: Union[ModelMesh, Grid2D]) -> ModelMesh:
    return mesh if isinstance(mesh, ModelMesh) else ModelMesh.uniform(mesh)


def _check_resolution(problem: QuadProblem, mesh: ModelMesh) -> None:
    e = problem.eps
    hx, hy = mesh.coarse_steps
    pieces = (
        ("A - 4 eps", problem.A - 4 * e, hx),
        ("(C - A) - 4 eps", problem.C - problem.A - 4 * e, hx),
        ("the unit height", 1.0, hy),
    )
    for name, length, h in pieces:
        if length / h < MIN_CELLS_PER_PIECE:
            raise ResolutionError(
                f"grid too coarse: {length / h:.1f} cells across {name}, need {MIN_CELLS_PER_PIECE}"
            )
    x_lo, x_hi, y_lo, y_hi = problem.support
    xs, ys = mesh.xs, mesh.ys
    outside = (
        np.count_nonzero(xs < x_lo), np.count_nonzero(xs > x_hi),
        np.count_nonzero(ys < y_lo), np.count_nonzero(ys > y_hi),
    )
    if min(outside) < 2:
        raise ResolutionError(f"grid {mesh.bounds} does not contain K = {problem.support} with a margin")


def _check_eps_resolution(problem: QuadProblem, mesh: ModelMesh, require_resolved: bool) -> None:
    per_eps = problem.eps / mesh.fine_step
    if per_eps >= MIN_CELLS_PER_PIECE:
        return
    message = f"eps={problem.eps:g} is resolved by only {per_eps:.1f} cells, need {MIN_CELLS_PER_PIECE}"
    if require_resolved:
        raise ResolutionError(message)
    logger.warning("%s; transitions are under-sampled", message)


def quad_profiles(problem: QuadProblem):
    """(u1, v1, u2, v2)"""
    e = problem.eps
    return (
        ramp_u1(problem.ramp),
        plateau(0.0, 1.0, e),
        plateau(0.0, problem.C, e),
        identity_window(0.0, 1.0, e),
    )


def build_pair(
    problem: QuadProblem,
    mesh: Union[ModelMesh, Grid2D, None] = None,
    require_resolved: bool = True,
) -> AdmissiblePair:
    """
    Sample the product pair on mesh (default: model_grid(problem)).

    A plain Grid2D is used as a uniform mesh. Fewer than 8 cells per eps
    raises ResolutionError unless require_resolved is False, in which
    case it is logged.
    """
    mesh = _as_mesh(mesh if mesh is not None else model_grid(problem))
    _check_resolution(problem, mesh)
    masks = side_masks(mesh, problem.A)
    _check_eps_resolution(problem, mesh, require_resolved)
    u1, v1, u2, v2 = quad_profiles(problem)

    def F_fn(x, y):
        return u1(x) * v1(y)

    def G_fn(x, y):
        return u2(x) * v2(y)

    F, G = mesh.sample(F_fn), mesh.sample(G_fn)
    admissible = check_admissible(F, G, masks)
    if not admissible:
        raise ResolutionError("sampled pair violates the side conditions; grid nodes miss the sides of Pi")
    inside = mesh.rectangle_mask(0.0, problem.A, 0.0, 1.0)
    return AdmissiblePair(F, G, F_fn, G_fn, masks, admissible, inside, mesh=mesh)


def analytic_bracket(problem: QuadProblem) -> FieldFunction:
    """-u1'(x) v1(y), the bracket of the built pair in closed form"""
    u1, v1, _, _ = quad_profiles(problem)
    return lambda x, y: -u1.derivative(x) * v1(y)


def perturb_pair(
    pair: AdmissiblePair, problem: QuadProblem, amplitude: float = 0.05, seed: int = 0, bumps: int = 4
) -> AdmissiblePair:
    """
    Add smooth random bumps that vanish on the four side lines and outside K.

    Each function gets amplitude * x (x - A) y (y - 1) u2(x) v1(y) times a
    sum of Gaussians with random centers in K and random signs.
    """
    rng = np.random.default_rng(seed)
    _, v1, u2, _ = quad_profiles(problem)
    x_lo, x_hi, y_lo, y_hi = problem.support
    A = problem.A

    def random_bumps():
        centers = np.column_stack([rng.uniform(x_lo, x_hi, bumps), rng.uniform(y_lo, y_hi, bumps)])
        weights = rng.normal(size=bumps)
        radius = 0.25 * min(A, 1.0)

        def bump(x, y):
            total = 0.0
            for (cx, cy), w in zip(centers, weights):
                total = total + w * np.exp(-((x - cx) ** 2 + (y - cy) ** 2) / (2 * radius ** 2))
            return amplitude * x * (x - A) * y * (y - 1.0) * u2(x) * v1(y) * total

        return bump

    dF, dG = random_bumps(), random_bumps()
    F_fn = lambda x, y: pair.F_fn(x, y) + dF(x, y)
    G_fn = lambda x, y: pair.G_fn(x, y) + dG(x, y)
    F, G = pair.sample(F_fn), pair.sample(G_fn)
    admissible = check_admissible(F, G, pair.masks)
    return replace(pair, F=F, G=G, F_fn=F_fn, G_fn=G_fn, admissible=admissible)


def is_supported_in(
    values: ScalarField,
    box: Tuple[float, float, float, float],
    tol: float = 0.0,
    mesh: Optional[ModelMesh] = None,
) -> bool:
    """True when values vanish (up to tol) at every node outside the closed box; mesh gives the node positions"""
    mesh = _as_mesh(mesh or values.grid)
    mesh.grid.require_same(values.grid, "values and mesh")
    outside = ~mesh.rectangle_mask(*box)
    return bool(np.all(np.abs(values.values[outside.values]) <= tol))

