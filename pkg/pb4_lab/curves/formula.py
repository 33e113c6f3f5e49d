"""Closed-form pb4^q of a separating curve with components of areas A and B"""
import math

from ..core.grid import ExponentLike, ExtendedExponent
from ..quadrilateral.formula import power_mean_value
from ..types.enums import Exactness
from ..types.exceptions import UnsupportedError
from ..types.responses import FormulaValue
from ..validation.parsing import parse_extended_real
from ..validation.preconditions import require
from ..validators.base import POSITIVE_OR_INF


def pb4_curve_formula(A: float, B: float, q: ExponentLike) -> FormulaValue:
    """
    2 at q = 1, (1/A^(q-1) + 1/B^(q-1))^(1/q) for finite q > 1 and
    max(1/A, 1/B) at q = INF. Symmetric in A and B; one infinite
    component drops its term.
    """
    A, B = parse_extended_real(A), parse_extended_real(B)
    require("A", A, POSITIVE_OR_INF)
    require("B", B, POSITIVE_OR_INF)
    if math.isinf(A) and math.isinf(B):
        raise UnsupportedError("pb4 of a curve with two infinite-area components is not defined")
    A, B = min(A, B), max(A, B)
    exponent = ExtendedExponent.coerce(q)
    if exponent.is_inf:
        return FormulaValue(value=max(1.0 / A, 1.0 / B), exactness=Exactness.EXACT)
    return FormulaValue(value=power_mean_value([A, B], exponent.value))
