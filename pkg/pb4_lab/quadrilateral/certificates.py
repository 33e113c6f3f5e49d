"""Upper-bound convergence tables and Stokes / Hoelder lower-bound certificates"""
import logging
import math
from typing import List, Optional, Sequence, Union

import numpy as np

from ..core.calculus import integrate, lq_integral, lq_norm
from ..core.grid import NodeMask, SymplecticDensity
from ..core.parallel import parallel_map
from ..types.config import GridPolicy, QuadProblem
from ..types.enums import Region
from ..types.exceptions import CertificateError, ValidationError
from ..types.responses import ConvergenceRow, LowerCertificate, StokesRecord
from ..validation.parsing import parse_extended_real
from ..validation.preconditions import require, require_that
from ..validators.base import FINITE_EXPONENT
from .construction import AdmissiblePair, build_pair, model_grid
from .formula import holder_region_bounds, pb4_formula

logger = logging.getLogger(__name__)

LOWER_TOL = 0.03
UPPER_TOL = 0.05


def _schedule_C(B: float, eps_schedule: Sequence[float], C_schedule: Optional[Sequence[float]]) -> List[float]:
    if C_schedule is None:
        require_that(math.isfinite(B), "infinite B needs an explicit C schedule")
        return [B - e for e in eps_schedule]
    C_schedule = list(C_schedule)
    if len(C_schedule) == 1:
        return C_schedule * len(eps_schedule)
    require_that(
        len(C_schedule) == len(eps_schedule),
        f"C schedule has {len(C_schedule)} entries, eps schedule has {len(eps_schedule)}",
    )
    return C_schedule


def _check_schedule(B: float, eps_schedule: Sequence[float], C_schedule: Sequence[float]) -> None:
    """eps strictly decreasing, C non-decreasing and below B"""
    require_that(
        all(b < a for a, b in zip(eps_schedule, eps_schedule[1:])),
        f"eps schedule must decrease strictly, got {list(eps_schedule)}",
    )
    require_that(
        all(b >= a for a, b in zip(C_schedule, C_schedule[1:])),
        f"C schedule must not decrease, got {list(C_schedule)}",
    )
    require_that(all(C < B for C in C_schedule), f"C schedule must stay below B={B}, got {list(C_schedule)}")


def verify_upper(
    A: float,
    B: float,
    q: float,
    eps_schedule: Sequence[float],
    C_schedule: Optional[Sequence[float]] = None,
    policy: GridPolicy = GridPolicy(),
) -> List[ConvergenceRow]:
    """
    Measured |{F,G}|_q of the built pair along the schedule, against the formula.

    C defaults to B - eps for each eps. Points run in parallel. The table
    is returned as measured; require_converging checks the ratios.
    """
    B = parse_extended_real(B)
    require("q", q, FINITE_EXPONENT)
    require_that(len(eps_schedule) > 0, "eps schedule is empty")
    Cs = _schedule_C(B, eps_schedule, C_schedule)
    _check_schedule(B, eps_schedule, Cs)
    formula = pb4_formula(A, B, q).value
    problems = [QuadProblem(A, B, q, e, C) for e, C in zip(eps_schedule, Cs)]

    def run(problem: QuadProblem) -> ConvergenceRow:
        pair = build_pair(problem, model_grid(problem, policy))
        norm = lq_norm(pair.bracket(), q, pair.density)
        logger.info("eps=%g C=%g: norm %.6g, formula %.6g", problem.eps, problem.C, norm, formula)
        return ConvergenceRow(epsilon=problem.eps, C=problem.C, norm=norm, formula=formula, ratio=norm / formula)

    rows = parallel_map(run, problems)
    if not is_converging(rows):
        logger.warning("convergence table is not monotone: ratios %s", [row.ratio for row in rows])
    return rows


def is_converging(rows: Sequence[ConvergenceRow], tol: float = UPPER_TOL) -> bool:
    """Ratios strictly decreasing, none of them below 1 - tol"""
    ratios = [row.ratio for row in rows]
    decreasing = all(b < a for a, b in zip(ratios, ratios[1:]))
    return bool(ratios) and decreasing and min(ratios) >= 1.0 - tol


def require_converging(rows: Sequence[ConvergenceRow], tol: float = UPPER_TOL) -> List[ConvergenceRow]:
    if not is_converging(rows, tol):
        ratios = ", ".join(f"{row.ratio:.6g}" for row in rows)
        raise CertificateError(
            f"upper bound not converging: ratios {ratios} must decrease toward 1 and stay above {1.0 - tol:g}"
        )
    return list(rows)


def region_mask(pair: AdmissiblePair, region: Union[Region, NodeMask]) -> NodeMask:
    if isinstance(region, NodeMask):
        return region
    region = Region(region)
    if region is Region.MASK:
        raise ValidationError("Region.MASK needs an explicit node mask")
    if pair.inside is None:
        raise ValidationError("pair carries no region mask for Pi")
    return pair.inside if region is Region.INSIDE else ~pair.inside


def region_label(pair: AdmissiblePair, region: Union[Region, NodeMask]) -> Region:
    """The Region a mask stands for: INSIDE or COMPLEMENT when it matches the pair's split, else MASK"""
    if not isinstance(region, NodeMask):
        return Region(region)
    if pair.inside is not None and region.grid == pair.inside.grid:
        if np.array_equal(region.values, pair.inside.values):
            return Region.INSIDE
        if np.array_equal(region.values, ~pair.inside.values):
            return Region.COMPLEMENT
    return Region.MASK


def stokes_defect(
    pair: AdmissiblePair,
    region: Union[Region, NodeMask] = Region.INSIDE,
    density: Optional[SymplecticDensity] = None,
) -> StokesRecord:
    """
    Signed and absolute integrals of {F,G} over Pi or its complement.

    For an admissible pair the signed value is -1 over Pi and +1 over the
    complement, the boundary integral of F dG along X1. density defaults
    to the pair's own.
    """
    density = density or pair.density
    mask = region_mask(pair, region)
    bracket = pair.bracket(density)
    signed = integrate(bracket, mask, density)
    absolute = integrate(bracket.with_values(np.abs(bracket.values)), mask, density)
    return StokesRecord(region=region_label(pair, region), signed_integral=signed, abs_integral=absolute)


def verify_lower(
    pair: AdmissiblePair,
    q: float,
    A: float,
    B: float,
    tol: float = LOWER_TOL,
    density: Optional[SymplecticDensity] = None,
) -> LowerCertificate:
    """Compare the region integrals of |{F,G}|^q with 1/Area^(q-1) and the total norm with the formula"""
    density = density or pair.density
    require("q", q, FINITE_EXPONENT)
    B = parse_extended_real(B)
    inside_bound, complement_bound = holder_region_bounds(A, B, q)
    formula = pb4_formula(A, B, q).value
    bracket = pair.bracket(density)
    inside = region_mask(pair, Region.INSIDE)
    inside_integral = lq_integral(bracket, q, density, inside)
    complement_integral = lq_integral(bracket, q, density, ~inside)
    total = lq_norm(bracket, q, density)
    passed = (
        inside_integral >= (1.0 - tol) * inside_bound
        and complement_integral >= (1.0 - tol) * complement_bound
        and total >= (1.0 - tol) * formula
    )
    if not passed:
        logger.warning(
            "lower certificate failed: inside %.4g vs %.4g, complement %.4g vs %.4g, total %.4g vs %.4g",
            inside_integral, inside_bound, complement_integral, complement_bound, total, formula,
        )
    return LowerCertificate(
        q=q, A=A, B=B,
        inside_integral=inside_integral,
        complement_integral=complement_integral,
        inside_bound=inside_bound,
        complement_bound=complement_bound,
        total_norm=total,
        formula=formula,
        tolerance=tol,
        passed=passed,
    )


def require_passed(certificate: LowerCertificate) -> LowerCertificate:
    if not certificate.passed:
        raise CertificateError(
            f"lower bound violated: total norm {certificate.total_norm:.6g} < "
            f"(1 - {certificate.tolerance}) * {certificate.formula:.6g}"
        )
    return certificate
