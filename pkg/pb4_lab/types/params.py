"""
Run configuration and per-subcommand parameter models.

Every field of a parameter model becomes one CLI flag of the same name;
its description is the flag's help text.
"""
import math
from typing import Any, Dict, List, Literal, Optional, Type

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, model_validator
from typing_extensions import Annotated, Self

from ..validation.parsing import parse_extended_real, parse_real_list
from .enums import Subcommand
from .exceptions import ConfigurationError, Pb4LabError


def _extended(value: Any) -> float:
    try:
        return parse_extended_real(value)
    except Pb4LabError as e:
        raise ValueError(str(e))


def _real_list(value: Any) -> List[float]:
    try:
        return parse_real_list(value)
    except Pb4LabError as e:
        raise ValueError(str(e))


def _exponent(value: Any) -> float:
    q = _extended(value)
    if not q >= 1.0:
        raise ValueError(f"q must lie in [1, inf], got {q}")
    return q


def _finite_exponent(value: Any) -> float:
    q = _exponent(value)
    if math.isinf(q):
        raise ValueError("q must be finite here")
    return q


def _optional_list(value: Any) -> Optional[List[float]]:
    return None if value is None else _real_list(value)


ExtendedReal = Annotated[float, BeforeValidator(_extended)]
Exponent = Annotated[float, BeforeValidator(_exponent)]
FiniteExponent = Annotated[float, BeforeValidator(_finite_exponent)]
RealList = Annotated[List[float], BeforeValidator(_real_list)]
OptionalRealList = Annotated[Optional[List[float]], BeforeValidator(_optional_list)]


class Params(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class AreaParams(Params):
    A: float = Field(gt=0, description="area of the quadrilateral Pi = [0, A] x [0, 1]")
    B: ExtendedReal = Field(description="area of the ambient surface, or inf")

    @model_validator(mode="after")
    def check_areas(self) -> Self:
        if not (self.B > 0 and self.A < self.B):
            raise ValueError(f"need 0 < A < B, got A={self.A}, B={self.B}")
        return self


class FormulaParams(AreaParams):
    q: Exponent = Field(description="exponent q in [1, inf]")


class VerifyUpperParams(AreaParams):
    q: FiniteExponent = Field(description="finite exponent q >= 1")
    eps: RealList = Field(description="comma-separated eps schedule")
    C: OptionalRealList = Field(default=None, description="C per eps (or one value); default B - eps")
    cells: int = Field(default=512, ge=16, description="coarse mesh cells across the longer side of K")
    margin_cells: int = Field(default=4, ge=2, description="fine mesh cells beyond K on every side")
    cells_per_eps: int = Field(default=16, ge=8, description="fine mesh cells per eps around the transitions")


class PairParams(AreaParams):
    eps: float = Field(default=0.01, gt=0, description="construction margin eps")
    C: Optional[float] = Field(default=None, description="outer end C of the ramp; default B - eps")
    cells: int = Field(default=512, ge=16, description="coarse mesh cells across the longer side of K")
    cells_per_eps: int = Field(default=16, ge=8, description="fine mesh cells per eps around the transitions")

    @property
    def resolved_C(self) -> float:
        if self.C is not None:
            return self.C
        if math.isinf(self.B):
            raise ConfigurationError("infinite B needs an explicit C")
        return self.B - self.eps


class VerifyLowerParams(PairParams):
    q: FiniteExponent = Field(description="finite exponent q >= 1")
    tol: float = Field(default=0.03, gt=0, lt=1, description="relative tolerance of the lower bounds")


class StokesParams(PairParams):
    tol: float = Field(default=0.03, gt=0, lt=1, description="allowed distance of |integral| from 1")


class FlexParams(Params):
    delta: float = Field(default=0.05, gt=0, description="cell side delta")
    eps_cell: float = Field(default=0.1, gt=0, lt=0.5, description="volume fraction of the cell outside Q3")
    q: FiniteExponent = Field(default=2.0, description="exponent for the distance of G")
    sigma: float = Field(default=0.02, gt=0, description="width of the two Gaussian bumps")
    separation: float = Field(default=0.02, ge=0, description="distance between the bump centers")
    half_width: float = Field(default=0.25, gt=0, description="the grid covers [-half_width, half_width]^2")
    nodes_per_cell: int = Field(default=80, ge=8, description="grid nodes along one cell side")


class HighDimParams(Params):
    n: int = Field(default=2, ge=2, description="half the ambient dimension")
    d: int = Field(default=2, ge=0, description="dimension of X1")
    q: FiniteExponent = Field(default=2.0, description="exponent, at most the codimension 2n - d")
    b: float = Field(default=1.0, gt=0, description="side of the box X1 = [0, b]^d")
    delta: float = Field(default=1.0, gt=0, description="radial scale of the profile")
    alphas: RealList = Field(default=[1.0, 0.5, 0.25, 0.1], description="comma-separated decreasing alpha schedule")


class CurveParams(Params):
    A: float = Field(gt=0, description="area of the inner component")
    B: ExtendedReal = Field(description="area of the outer component, or inf")
    q: Exponent = Field(description="exponent q in [1, inf]")
    eps: float = Field(default=0.01, gt=0, description="ramp margin in area units")
    shrink: float = Field(default=0.99, gt=0, lt=1, description="C_A = shrink * A, C_B = shrink * B")
    cells: int = Field(default=512, ge=16, description="cells across the cylinder")
    angular_cells: int = Field(default=2048, ge=16, description="cells around the curve")
    short_arc: float = Field(default=0.01, gt=0, lt=0.25, description="fraction of the circle in D1, D2 and D4")


class OptimizeParams(AreaParams):
    q: FiniteExponent = Field(description="finite exponent q >= 1")
    cells: int = Field(default=256, ge=32, description="grid cells across the longer side of the torus")
    eps: float = Field(default=0.05, gt=0, description="margin of the warm-start construction")
    mu: float = Field(default=1e-8, gt=0, description="smoothing of |b|^q")
    max_iter: int = Field(default=200, ge=0, description="iteration budget")
    init: Literal["warm", "random"] = Field(default="warm", description="warm start or random feasible start")
    tol: float = Field(default=0.05, gt=0, lt=1, description="certificate tolerance")


class InvarianceParams(Params):
    A: float = Field(default=1.0, gt=0, description="area A of the pair's model")
    B: float = Field(default=3.0, gt=0, description="area B of the pair's model")
    q: Exponent = Field(default=2.0, description="exponent q in [1, inf]")
    map: Literal["identity", "shear", "annulus"] = Field(default="shear", description="area-preserving map")
    shear: float = Field(default=1.0, description="shear factor k of (x, y) -> (x + k y, y)")
    eps: float = Field(default=0.05, gt=0, description="construction margin (shear) or inner radius (annulus)")
    cells: int = Field(default=256, ge=16, description="grid cells across the longer side")
    tol: float = Field(default=0.01, gt=0, lt=1, description="allowed relative change of the norm")

    @model_validator(mode="after")
    def check_areas(self) -> Self:
        if self.map != "annulus" and not self.A < self.B:
            raise ValueError(f"need A < B, got A={self.A}, B={self.B}")
        return self


PARAMS: Dict[Subcommand, Type[Params]] = {
    Subcommand.FORMULA: FormulaParams,
    Subcommand.VERIFY_UPPER: VerifyUpperParams,
    Subcommand.VERIFY_LOWER: VerifyLowerParams,
    Subcommand.STOKES: StokesParams,
    Subcommand.FLEX: FlexParams,
    Subcommand.HIGHDIM_DECAY: HighDimParams,
    Subcommand.CURVE: CurveParams,
    Subcommand.OPTIMIZE: OptimizeParams,
    Subcommand.INVARIANCE: InvarianceParams,
}

_RESERVED = {"subcommand", "params", "seed"}


class RunConfig(BaseModel):
    """A subcommand, its raw parameters and the seed of randomized checks"""

    model_config = ConfigDict(extra="forbid")

    subcommand: Subcommand
    params: Dict[str, Any] = Field(default_factory=dict)
    seed: int = 0

    @model_validator(mode="before")
    @classmethod
    def collect_flat_keys(cls, data: Any) -> Any:
        """Accept parameters at the top level as well as under "params"."""
        if not isinstance(data, dict):
            return data
        flat = {k: v for k, v in data.items() if k not in _RESERVED}
        if not flat:
            return data
        merged = dict(data.get("params") or {})
        merged.update(flat)
        return {**{k: v for k, v in data.items() if k in _RESERVED}, "params": merged}

    def parameters(self, overrides: Optional[Dict[str, Any]] = None) -> Params:
        """Validated parameter model; overrides win over the stored values"""
        merged = {**self.params, **(overrides or {})}
        return PARAMS[self.subcommand].model_validate(merged)
