"""Closed-form pb4^q of a quadrilateral of area A inside a surface of area B"""
import math
from typing import List, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

from ..core.grid import ExponentLike, ExtendedExponent
from ..types.enums import Exactness
from ..types.responses import FormulaValue
from ..validation.parsing import parse_extended_real
from ..validation.preconditions import require, require_that
from ..validators.base import POSITIVE, POSITIVE_OR_INF


def power_mean_value(areas: Sequence[float], q: float) -> float:
    """
    (sum_i 1 / a_i^(q - 1))^(1 / q) for finite q, infinite areas dropping out.

    Evaluated in log space so large q does not overflow.
    """
    logs = [-(q - 1.0) * math.log(a) for a in areas if math.isfinite(a)]
    if q == 1.0:
        # every term is 1, including the infinite ones
        return float(len(areas))
    if not logs:
        return 0.0
    return float(np.exp(logsumexp(logs) / q))


def _check_areas(A: float, B: float) -> Tuple[float, float]:
    B = parse_extended_real(B)
    require("A", A, POSITIVE)
    require("B", B, POSITIVE_OR_INF)
    require_that(A < B, f"need A < B, got A={A}, B={B}")
    return float(A), B


def pb4_formula(A: float, B: float, q: ExponentLike) -> FormulaValue:
    """
    pb4^q of [0, A] x [0, 1] inside an area-B surface.

    Finite q: (1/A^(q-1) + 1/(B-A)^(q-1))^(1/q), which is 2 at q = 1 for
    any B. B = INF drops the second term. q = INF returns the limit
    max(1/A, 1/(B-A)), known only as a lower bound.
    """
    A, B = _check_areas(A, B)
    exponent = ExtendedExponent.coerce(q)
    if exponent.is_inf:
        return FormulaValue(value=max(1.0 / A, 1.0 / (B - A)), exactness=Exactness.LOWER_BOUND_ONLY)
    return FormulaValue(value=power_mean_value([A, B - A], exponent.value))


def holder_region_bounds(A: float, B: float, q: float) -> Tuple[float, float]:
    """Lower bounds on the integrals of |{F,G}|^q over Pi and over its complement"""
    A, B = _check_areas(A, B)
    q = ExtendedExponent.coerce(q).value
    require_that(math.isfinite(q), "region bounds need a finite exponent")
    outer = 0.0 if math.isinf(B) and q > 1.0 else 1.0 / (B - A) ** (q - 1.0)
    return 1.0 / A ** (q - 1.0), outer


def formula_limit_table(A: float, B: float, q_list: Sequence[float]) -> List[Tuple[float, float]]:
    """(q, pb4^q) rows; for large q they approach the q = INF value"""
    return [(float(q), pb4_formula(A, B, q).value) for q in q_list]
