"""Precondition checks shared by the domain dataclasses and operations"""
from typing import Any, Dict, Optional

from ..types.exceptions import ValidationError
from ..validators.base import Validator


def require(name: str, value: Any, validator: Validator, context: Optional[Dict[str, Any]] = None) -> None:
    """Raise ValidationError naming the parameter when the validator rejects the value"""
    if not validator.validate(value, context or {}):
        raise ValidationError(f"{name}: {validator.get_error_message(value)}")


def require_that(condition: bool, message: str) -> None:
    if not condition:
        raise ValidationError(message)
