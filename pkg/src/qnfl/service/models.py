"""Request/response models of the qnfl service.

The CLI builds these same models and dispatches them either in-process or
over HTTP, so the service surface is the one public API.  Shot counts are
integers or the string/float infinity, serialized as "inf".
"""

from __future__ import annotations

import math

from pydantic import BaseModel, Field, field_serializer, field_validator, model_validator

from ..sweep import CANDIDATE_SHOT_MODES


def _parse_shots(value):
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity", ".inf"):
            return math.inf
        return int(value)
    if isinstance(value, float):
        if math.isinf(value) and value > 0:
            return math.inf
        if value.is_integer():
            return int(value)
        raise ValueError(f"shot count {value} must be an integer or inf")
    return value


def _dump_shots(value) -> str:
    return "inf" if math.isinf(value) else str(int(value))


class BoundRequest(BaseModel):
    """Inputs of the lower-bound evaluators; give either n (qubits) or d."""

    n: int | None = None
    d: int | None = None
    N: int = Field(ge=0)
    m: int | float = Field(union_mode="left_to_right")
    r: int = Field(ge=1)
    eps_tilde: float = 0.15
    gamma: float = 4.0
    log_multiplier: int = 1

    @field_validator("m", mode="before")
    @classmethod
    def _m(cls, v):
        return _parse_shots(v)

    @field_serializer("m", when_used="json")
    def _ser_m(self, v) -> str:
        return _dump_shots(v)

    @model_validator(mode="after")
    def _dims(self):
        if self.d is None and self.n is None:
            raise ValueError("give n or d")
        if self.d is None:
            self.d = 2**self.n
        elif self.n is None and self.d >= 2:
            n = self.d.bit_length() - 1
            if 2**n == self.d:
                self.n = n
        elif self.n is not None and self.d != 2**self.n:
            raise ValueError(f"inconsistent dimensions: d={self.d} but 2^n={2**self.n}")
        return self


class BoundResponse(BaseModel):
    d: int
    n: int | None
    formal: float
    informal: float | None
    ideal: float
    branch_switch_m: float


class TrialRequest(BaseModel):
    n: int
    r: int
    m: int | float
    N: int
    ortho: bool = False
    candidate_shots_mode: str = "same_as_m"
    master_seed: int = 0
    trial_u: int = 0
    trial_d: int = 0

    @field_validator("m", mode="before")
    @classmethod
    def _m(cls, v):
        return _parse_shots(v)

    @field_serializer("m", when_used="json")
    def _ser_m(self, v) -> str:
        return _dump_shots(v)

    @field_validator("candidate_shots_mode")
    @classmethod
    def _mode(cls, v):
        if v not in CANDIDATE_SHOT_MODES:
            raise ValueError(f"candidate_shots_mode must be one of {CANDIDATE_SHOT_MODES}")
        return v


class TrialResponse(BaseModel):
    n: int
    d: int
    r: int
    m: str
    N: int
    ortho: bool
    trial_u: int
    trial_d: int
    k_star: int
    k_hat: int
    error_indicator: int
    risk: float
    normalized_error: float
    seed_hash: int


class SweepRequest(BaseModel):
    n: int
    r_list: list[int]
    m_list: list[int | float]
    N_list: list[int]
    ortho: bool = False
    trials_unitary: int = 4
    trials_data: int = 10
    candidate_shots_mode: str = "same_as_m"
    master_seed: int = 0
    jobs: int = 1

    @field_validator("m_list", mode="before")
    @classmethod
    def _ms(cls, v):
        if isinstance(v, list):
            return [_parse_shots(x) for x in v]
        return v

    @field_serializer("m_list", when_used="json")
    def _ser_ms(self, v) -> list[str]:
        return [_dump_shots(x) for x in v]


class CsvResponse(BaseModel):
    csv: str
    rows: int


class AggregateRequest(BaseModel):
    results_csv: str


class CheckModel(BaseModel):
    name: str
    passed: bool
    observed: float
    expected: float
    band: float
    detail: str = ""


class VerifyRequest(BaseModel):
    suite: str = "all"
    samples: int = Field(default=100_000, ge=10)
    seed: int = 0


class VerifyResponse(BaseModel):
    suite: str
    samples: int
    seed: int
    all_pass: bool
    checks: list[CheckModel]


class HealthResponse(BaseModel):
    status: str
    version: str
