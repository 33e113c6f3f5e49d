"""Direct minimization of the bracket norm over discretized admissible pairs"""
from .descent import OptResult, certificate, history_is_monotone, minimize
from .objective import (
    DEFAULT_MU,
    OptProblem,
    gradient_check,
    is_feasible,
    objective,
    pinned_masks,
    project,
    random_feasible_init,
    rectangle_model,
)

__all__ = [
    "DEFAULT_MU",
    "OptProblem",
    "objective",
    "gradient_check",
    "project",
    "is_feasible",
    "pinned_masks",
    "rectangle_model",
    "random_feasible_init",
    "OptResult",
    "minimize",
    "certificate",
    "history_is_monotone",
]
