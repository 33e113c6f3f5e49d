from .parsing import parse_extended_real, parse_real_list
from .preconditions import require, require_that

__all__ = ["parse_extended_real", "parse_real_list", "require", "require_that"]
