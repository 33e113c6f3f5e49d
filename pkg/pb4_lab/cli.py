"""
Command-line entry point: one subcommand per experiment.

    pb4-lab formula --A 1 --B 2 --q 1
    pb4-lab verify-upper --A 1 --B 3 --q 2 --eps 1e-2,1e-3 --out table.csv

Exit codes: 0 on success, 2 on invalid parameters or configuration, 1 when
a certificate or check fails.
"""
import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from dotenv import load_dotenv
from pydantic import ValidationError as PydanticValidationError

from . import __version__
from .core.grid import make_grid, sample
from .core.maps import AffineMap, CylinderToAnnulusMap
from .curves import bump_pair, curve_report, cylinder_grid, default_partition, pb4_curve_formula, separating_pair
from .flexibility import flex_report
from .highdim import decay_curve
from .optimizer import certificate, minimize, rectangle_model
from .output import CONVERGENCE_HEADER, DECAY_HEADER, HISTORY_HEADER, write_report, write_table, write_value
from .quadrilateral import (
    build_pair,
    model_grid,
    pb4_formula,
    require_converging,
    stokes_defect,
    symp_invariance_check,
    verify_lower,
    verify_upper,
)
from .types.config import CylinderModel, GridPolicy, HighDimSpec, LabSettings, QuadProblem
from .types.enums import CertificateStatus, Exactness, Region, Subcommand
from .types.exceptions import CertificateError, ConfigurationError, Pb4LabError, ValidationError
from .types.params import (
    PARAMS,
    CurveParams,
    FlexParams,
    FormulaParams,
    HighDimParams,
    InvarianceParams,
    OptimizeParams,
    Params,
    RunConfig,
    StokesParams,
    VerifyLowerParams,
    VerifyUpperParams,
)
from .types.responses import CurveReport, StokesReport

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2

Outcome = bool
Handler = Callable[[Any, int, Optional[str]], Outcome]


def load_config(path: str) -> RunConfig:
    """Read a JSON run configuration; parameters may sit at the top level or under "params"."""
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigurationError(f"cannot read config {path}: {e}")
    return RunConfig.model_validate_json(text)


def _pair(params, q: float):
    problem = QuadProblem(params.A, params.B, q, params.eps, params.resolved_C)
    policy = GridPolicy(cells=params.cells, cells_per_eps=params.cells_per_eps)
    return problem, build_pair(problem, model_grid(problem, policy))


def run_formula(params: FormulaParams, seed: int, out: Optional[str]) -> Outcome:
    value = pb4_formula(params.A, params.B, params.q)
    if value.exactness is Exactness.LOWER_BOUND_ONLY:
        logger.warning("q = inf: %.6g is a lower bound only", value.value)
    write_value(value.value, out)
    return True


def run_verify_upper(params: VerifyUpperParams, seed: int, out: Optional[str]) -> Outcome:
    policy = GridPolicy(cells=params.cells, margin_cells=params.margin_cells, cells_per_eps=params.cells_per_eps)
    rows = verify_upper(params.A, params.B, params.q, params.eps, params.C, policy)
    write_table(rows, CONVERGENCE_HEADER, out)
    require_converging(rows)
    return True


def run_verify_lower(params: VerifyLowerParams, seed: int, out: Optional[str]) -> Outcome:
    _, pair = _pair(params, params.q)
    cert = verify_lower(pair, params.q, params.A, params.B, params.tol)
    write_report(cert, out)
    return cert.passed


def run_stokes(params: StokesParams, seed: int, out: Optional[str]) -> Outcome:
    _, pair = _pair(params, 1.0)
    inside = stokes_defect(pair, Region.INSIDE)
    complement = stokes_defect(pair, Region.COMPLEMENT)
    passed = all(abs(abs(r.signed_integral) - 1.0) <= params.tol for r in (inside, complement))
    write_report(StokesReport(inside=inside, complement=complement, tolerance=params.tol, passed=passed), out)
    return passed


def _gaussian(cx: float, cy: float, sigma: float):
    return lambda x, y: np.exp(-((x - cx) ** 2 + (y - cy) ** 2) / (2.0 * sigma ** 2))


def run_flex(params: FlexParams, seed: int, out: Optional[str]) -> Outcome:
    h = params.delta / params.nodes_per_cell
    w = params.half_width
    n = int(round(2.0 * w / h))
    grid = make_grid((-w, w, -w, w), n, n)
    shift = 0.5 * params.separation
    F = sample(grid, _gaussian(-shift, 0.0, params.sigma))
    G = sample(grid, _gaussian(shift, 0.0, params.sigma))
    report = flex_report(F, G, params.delta, params.eps_cell, params.q)
    write_report(report, out)
    return (
        report.max_bracket == 0.0
        and report.sup_dist_F <= report.modulus_bound
        and report.lq_dist_G <= report.lq_bound
    )


def run_highdim(params: HighDimParams, seed: int, out: Optional[str]) -> Outcome:
    spec = HighDimSpec(n=params.n, d=params.d, q=params.q, b=params.b, alpha=params.alphas[0], delta=params.delta)
    table = decay_curve(spec, params.alphas)
    write_table(table.rows, DECAY_HEADER, out)
    return table.is_strictly_decreasing()


def run_curve(params: CurveParams, seed: int, out: Optional[str]) -> Outcome:
    if math.isinf(params.A) or math.isinf(params.B):
        formula = pb4_curve_formula(params.A, params.B, params.q).value
        write_report(CurveReport(A=params.A, B=params.B, q=params.q, formula=formula), out)
        return True
    model = CylinderModel(params.A, params.B)
    result = separating_pair(
        model,
        default_partition(params.short_arc),
        params.q,
        params.eps,
        params.shrink * params.A,
        params.shrink * params.B,
        params.cells,
        params.angular_cells,
    )
    report = curve_report(result)
    write_report(report, out)
    return report.certificate is None or report.certificate.passed


def run_optimize(params: OptimizeParams, seed: int, out: Optional[str]) -> Outcome:
    problem, warm = rectangle_model(params.A, params.B, params.q, params.cells, params.eps, params.mu, params.max_iter)
    result = minimize(problem, warm if params.init == "warm" else None, seed)
    formula = pb4_formula(params.A, problem.area, params.q).value
    cert = certificate(result, formula, params.tol)
    write_table(result.history, HISTORY_HEADER, out)
    if out is not None:
        write_report(cert, Path(out).with_suffix(".certificate.json"))
    else:
        logger.info("optimizer certificate: %s", cert.model_dump_json())
    return cert.status is CertificateStatus.LOWER_RESPECTED


def run_invariance(params: InvarianceParams, seed: int, out: Optional[str]) -> Outcome:
    if params.map == "annulus":
        model = CylinderModel(params.A, params.B)
        pair = bump_pair(model, cylinder_grid(model, params.cells))
        phi = CylinderToAnnulusMap(params.eps, (0.0, model.length))
    else:
        problem = QuadProblem(params.A, params.B, params.q, params.eps, params.B - params.eps)
        pair = build_pair(problem, model_grid(problem, GridPolicy(cells=params.cells)))
        phi = AffineMap.identity() if params.map == "identity" else AffineMap.shear(params.shear)
    report = symp_invariance_check(pair, phi, params.q, 2 * params.cells, params.tol)
    write_report(report, out)
    return report.passed


HELP: Dict[Subcommand, str] = {
    Subcommand.FORMULA: "closed-form pb4^q of a quadrilateral",
    Subcommand.VERIFY_UPPER: "convergence table of the explicit pairs",
    Subcommand.VERIFY_LOWER: "per-region lower-bound certificate of one pair",
    Subcommand.STOKES: "signed bracket integrals over Pi and its complement",
    Subcommand.FLEX: "commuting approximation of two Gaussian bumps",
    Subcommand.HIGHDIM_DECAY: "decay of the gradient norm as alpha shrinks",
    Subcommand.CURVE: "pb4^q of a separating curve, formula and construction",
    Subcommand.OPTIMIZE: "direct minimization on the rectangle model",
    Subcommand.INVARIANCE: "bracket norm before and after an area-preserving map",
}

HANDLERS: Dict[Subcommand, Handler] = {
    Subcommand.FORMULA: run_formula,
    Subcommand.VERIFY_UPPER: run_verify_upper,
    Subcommand.VERIFY_LOWER: run_verify_lower,
    Subcommand.STOKES: run_stokes,
    Subcommand.FLEX: run_flex,
    Subcommand.HIGHDIM_DECAY: run_highdim,
    Subcommand.CURVE: run_curve,
    Subcommand.OPTIMIZE: run_optimize,
    Subcommand.INVARIANCE: run_invariance,
}


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON run configuration; flags override its values")
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--seed", type=int, help="seed for randomized steps")
    parser.add_argument("--log-level", dest="log_level", help="logging level (default: PB4_LOG_LEVEL or WARNING)")


def _add_param_flags(parser: argparse.ArgumentParser, model: type) -> None:
    for field_name, field_info in model.model_fields.items():
        help_text = field_info.description or field_name
        if not field_info.is_required():
            help_text += f" (default: {field_info.default})"
        parser.add_argument(f"--{field_name}", dest=field_name, default=None, help=help_text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pb4-lab", description="Numerical lab for L_q Poisson bracket invariants")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")
    for name, model in PARAMS.items():
        child = sub.add_parser(name.value, help=HELP[name], allow_abbrev=False)
        _add_common(child)
        _add_param_flags(child, model)
    return parser


def _configure_logging(level_name: Optional[str]) -> None:
    name = (level_name or LabSettings.from_env().log_level).upper()
    level = logging.getLevelName(name)
    if not isinstance(level, int):
        raise ConfigurationError(f"unknown log level: {name}")
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger().setLevel(level)


def _resolve(args: argparse.Namespace) -> Tuple[Subcommand, Params, int]:
    subcommand = Subcommand(args.subcommand)
    config = load_config(args.config) if args.config else RunConfig(subcommand=subcommand)
    if config.subcommand is not subcommand:
        raise ConfigurationError(
            f"config is for '{config.subcommand.value}' but the command line asks for '{subcommand.value}'"
        )
    model = PARAMS[subcommand]
    overrides = {name: getattr(args, name) for name in model.model_fields if getattr(args, name, None) is not None}
    params = config.parameters(overrides)
    seed = args.seed if args.seed is not None else config.seed
    sys.stderr.write(f"{subcommand.value} parameters: {params.model_dump_json()} (seed {seed})\n")
    return subcommand, params, seed


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, run one subcommand and return its exit code"""
    load_dotenv()
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_INVALID

    try:
        _configure_logging(args.log_level)
        subcommand, params, seed = _resolve(args)
        ok = HANDLERS[subcommand](params, seed, args.out)
    except (ValidationError, ConfigurationError, PydanticValidationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except CertificateError as e:
        print(f"check failed: {e}", file=sys.stderr)
        return EXIT_FAILED
    except Pb4LabError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAILED
    if not ok:
        print(f"check failed: {subcommand.value} did not meet its tolerance", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def main() -> None:
    sys.exit(run())
