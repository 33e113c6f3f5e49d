"""Projected gradient descent with Barzilai-Borwein steps and monotone backtracking"""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ..core.grid import ScalarField
from ..quadrilateral.construction import AdmissiblePair
from ..types.enums import CertificateStatus
from ..types.exceptions import ValidationError
from ..types.responses import HistoryRow, OptCertificate
from ..validation.preconditions import require
from ..validators.base import NONNEGATIVE
from .objective import OptProblem, is_feasible, objective, project, random_feasible_init

logger = logging.getLogger(__name__)

MAX_HALVINGS = 40
RELATIVE_DECREASE = 1e-10
CERTIFICATE_TOL = 0.05


@dataclass
class OptResult:
    F: ScalarField
    G: ScalarField
    objective: float
    q: float
    mu: float
    area: float
    history: List[HistoryRow] = field(default_factory=list)
    converged: bool = False

    @property
    def floor(self) -> float:
        return self.mu ** (self.q / 2.0) * self.area

    @property
    def final_value(self) -> float:
        """q-th root of the objective with the smoothing floor removed"""
        return max(self.objective - self.floor, 0.0) ** (1.0 / self.q)


def _inner(a: np.ndarray, b: np.ndarray, c: np.ndarray, d: np.ndarray) -> float:
    return float(np.sum(a * b) + np.sum(c * d))


def minimize(problem: OptProblem, init: Optional[AdmissiblePair] = None, seed: int = 0) -> OptResult:
    """
    Minimize the surrogate from init (default: random feasible), projecting
    every trial point. A trial is accepted only on strict decrease, so the
    history never increases.
    """
    if init is None:
        init = random_feasible_init(problem, seed)
    problem.grid.require_same(init.grid, "problem and initial pair")
    F, G = project(problem, init.F, init.G)
    value, dF, dG = objective(F, G, problem.q, problem.density, problem.mu)
    history = [HistoryRow(iter=0, objective=value, step=0.0)]
    gmax = max(float(np.max(np.abs(dF.values))), float(np.max(np.abs(dG.values))))
    step = problem.step / gmax if gmax > 0 else problem.step
    converged = gmax == 0.0

    for it in range(1, problem.max_iter + 1):
        if converged:
            break
        trial_step = step
        accepted = False
        for _ in range(MAX_HALVINGS):
            F_new, G_new = project(
                problem, F.with_values(F.values - trial_step * dF.values), G.with_values(G.values - trial_step * dG.values)
            )
            new_value, dF_new, dG_new = objective(F_new, G_new, problem.q, problem.density, problem.mu)
            if new_value < value:
                accepted = True
                break
            trial_step *= 0.5
        if not accepted:
            logger.info("no decrease after %d halvings at iteration %d; stopping", MAX_HALVINGS, it)
            converged = True
            break

        sF, sG = F_new.values - F.values, G_new.values - G.values
        yF, yG = dF_new.values - dF.values, dG_new.values - dG.values
        sy = _inner(sF, yF, sG, yG)
        ss = _inner(sF, sF, sG, sG)
        decrease = value - new_value
        F, G, dF, dG = F_new, G_new, dF_new, dG_new
        value = new_value
        history.append(HistoryRow(iter=it, objective=value, step=trial_step))
        logger.debug("iter %d: objective %.8g, step %.3e", it, value, trial_step)
        step = ss / sy if sy > 0 else 2.0 * trial_step
        if decrease <= RELATIVE_DECREASE * abs(value):
            converged = True

    logger.info("descent finished after %d accepted steps, objective %.8g", len(history) - 1, value)
    if not is_feasible(problem, F, G):
        raise ValidationError("descent left the feasible set")
    return OptResult(F, G, value, problem.q, problem.mu, problem.area, history, converged)


def certificate(result: OptResult, formula: float, tol: float = CERTIFICATE_TOL) -> OptCertificate:
    """
    LOWER_RESPECTED when the final value is at least (1 - tol) formula,
    GAP otherwise. With formula 0 the ratio is the final value itself.
    """
    require("formula", formula, NONNEGATIVE)
    final = result.final_value
    ratio = final / formula if formula > 0 else abs(final)
    status = CertificateStatus.LOWER_RESPECTED if final >= (1.0 - tol) * formula else CertificateStatus.GAP
    if status is CertificateStatus.GAP:
        logger.warning("optimizer value %.6g is below (1 - %g) * %.6g", final, tol, formula)
    return OptCertificate(
        status=status,
        final=final,
        formula=formula,
        ratio=ratio,
        floor=result.floor,
        mu=result.mu,
        tolerance=tol,
    )


def history_is_monotone(result: OptResult) -> bool:
    values = [row.objective for row in result.history]
    return all(b <= a for a, b in zip(values, values[1:])) and not any(math.isnan(v) for v in values)
