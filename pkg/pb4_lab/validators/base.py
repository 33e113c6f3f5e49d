import math
from abc import ABC, abstractmethod
from typing import Any, Callable, Dict, Optional


class Validator(ABC):
    """Base class for parameter validators"""

    @abstractmethod
    def validate(self, value: Any, context: Dict[str, Any]) -> bool:
        """Validate a parameter value"""
        pass

    @abstractmethod
    def get_error_message(self, value: Any) -> str:
        """Get error message for validation failure"""
        pass


class FunctionValidator(Validator):
    """Validator that uses a function for validation"""

    def __init__(self, validator_func: Callable[[Any], bool], error_message: str):
        self.validator_func = validator_func
        self.error_message = error_message

    def validate(self, value: Any, context: Dict[str, Any]) -> bool:
        try:
            return bool(self.validator_func(value))
        except (TypeError, ValueError):
            return False

    def get_error_message(self, value: Any) -> str:
        return self.error_message


class RangeValidator(Validator):
    """Validator for numeric ranges, optionally with open ends"""

    def __init__(
        self,
        min_val: Optional[float] = None,
        max_val: Optional[float] = None,
        min_inclusive: bool = True,
        max_inclusive: bool = True,
        allow_inf: bool = False,
    ):
        self.min_val = min_val
        self.max_val = max_val
        self.min_inclusive = min_inclusive
        self.max_inclusive = max_inclusive
        self.allow_inf = allow_inf

    def validate(self, value: Any, context: Dict[str, Any]) -> bool:
        try:
            num_value = float(value)
        except (ValueError, TypeError):
            return False
        if math.isnan(num_value):
            return False
        if math.isinf(num_value) and not (self.allow_inf and num_value > 0):
            return False
        if self.min_val is not None:
            if num_value < self.min_val or (not self.min_inclusive and num_value == self.min_val):
                return False
        if self.max_val is not None:
            if num_value > self.max_val or (not self.max_inclusive and num_value == self.max_val):
                return False
        return True

    def get_error_message(self, value: Any) -> str:
        if self.min_val is not None and self.max_val is not None:
            return f"Value must be between {self.min_val} and {self.max_val}, got {value}"
        elif self.min_val is not None:
            word = "at least" if self.min_inclusive else "greater than"
            return f"Value must be {word} {self.min_val}, got {value}"
        elif self.max_val is not None:
            word = "at most" if self.max_inclusive else "less than"
            return f"Value must be {word} {self.max_val}, got {value}"
        return f"Invalid numeric value: {value}"


class IntegerValidator(RangeValidator):
    """Range validator that also requires an integral value"""

    def validate(self, value: Any, context: Dict[str, Any]) -> bool:
        if isinstance(value, bool):
            return False
        try:
            if float(value) != int(value):
                return False
        except (ValueError, TypeError, OverflowError):
            return False
        return super().validate(value, context)

    def get_error_message(self, value: Any) -> str:
        return f"Expected an integer. {super().get_error_message(value)}"


POSITIVE = RangeValidator(min_val=0.0, min_inclusive=False)
POSITIVE_OR_INF = RangeValidator(min_val=0.0, min_inclusive=False, allow_inf=True)
NONNEGATIVE = RangeValidator(min_val=0.0)
EXPONENT = RangeValidator(min_val=1.0, allow_inf=True)
FINITE_EXPONENT = RangeValidator(min_val=1.0)
