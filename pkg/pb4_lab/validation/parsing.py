"""Conversion of raw config / flag strings into typed parameter values"""
import math
from typing import Any, List

from ..types.exceptions import ValidationError

INF_LITERALS = {"inf", "+inf", "infinity", "INF"}


def parse_extended_real(value: Any) -> float:
    """Parse a real that may be the literal "inf"."""
    if isinstance(value, bool):
        raise ValidationError(f"Expected a number, got: {value}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        text = value.strip()
        if text.lower() in INF_LITERALS:
            return math.inf
        try:
            return float(text)
        except ValueError:
            raise ValidationError(f"Expected a number, got: {value}")
    raise ValidationError(f"Expected a number, got: {value}")


def parse_real_list(value: Any) -> List[float]:
    """Parse a comma-separated string (or a list) into reals."""
    if isinstance(value, str):
        items = [item.strip() for item in value.split(",") if item.strip()]
    elif isinstance(value, (list, tuple)):
        items = list(value)
    else:
        items = [value]
    if not items:
        raise ValidationError("Expected at least one value")
    return [parse_extended_real(item) for item in items]
