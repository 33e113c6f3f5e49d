from .base import (
    EXPONENT,
    FINITE_EXPONENT,
    NONNEGATIVE,
    POSITIVE,
    POSITIVE_OR_INF,
    FunctionValidator,
    IntegerValidator,
    RangeValidator,
    Validator,
)

__all__ = [
    "Validator",
    "FunctionValidator",
    "RangeValidator",
    "IntegerValidator",
    "POSITIVE",
    "POSITIVE_OR_INF",
    "NONNEGATIVE",
    "EXPONENT",
    "FINITE_EXPONENT",
]
