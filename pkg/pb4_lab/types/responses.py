"""Result records emitted by the experiments; all serialize to JSON"""
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field

from .enums import CertificateStatus, Exactness, Region


class Record(BaseModel):
    model_config = ConfigDict(ser_json_inf_nan="constants", frozen=True)


class FormulaValue(Record):
    value: float
    exactness: Exactness = Exactness.EXACT


class ConvergenceRow(Record):
    epsilon: float
    C: float
    norm: float
    formula: float
    ratio: float


class StokesRecord(Record):
    region: Region
    signed_integral: float
    abs_integral: float


class LowerCertificate(Record):
    q: float
    A: float
    B: float
    inside_integral: float = Field(description="integral of |{F,G}|^q over Pi")
    complement_integral: float = Field(description="integral of |{F,G}|^q over the complement")
    inside_bound: float
    complement_bound: float
    total_norm: float
    formula: float
    tolerance: float
    passed: bool


class InvarianceReport(Record):
    map_name: str
    q: float
    norm_before: float
    norm_after: float
    relative_difference: float
    tolerance: float
    passed: bool


class FlexReport(Record):
    sup_dist_F: float
    lq_dist_G: float
    max_bracket: float
    delta: float
    eps_cell: float
    q: float
    modulus_bound: float = Field(description="sampled modulus of continuity of F at delta * sqrt(2)")
    lq_bound: float = Field(description="sup|G| * (Vol(support cells) * eps_cell)^(1/q)")


class DecayRow(Record):
    alpha: float
    grad_lq_q: float
    field_lq_q: float


class DecayTable(Record):
    rows: List[DecayRow] = Field(default_factory=list)

    def is_strictly_decreasing(self) -> bool:
        pairs = list(zip(self.rows, self.rows[1:]))
        return all(b.grad_lq_q < a.grad_lq_q and b.field_lq_q < a.field_lq_q for a, b in pairs)


class CurveReport(Record):
    A: float
    B: float
    q: float
    formula: float
    measured: Optional[float] = None
    certificate: Optional[LowerCertificate] = None


class HistoryRow(Record):
    iter: int
    objective: float
    step: float


class OptCertificate(Record):
    status: CertificateStatus
    final: float = Field(description="q-th root of the objective with the smoothing floor removed")
    formula: float
    ratio: float
    floor: float
    mu: float
    tolerance: float


class StokesReport(Record):
    inside: StokesRecord
    complement: StokesRecord
    tolerance: float
    passed: bool
