"""Request and response models for the HTTP service."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field


class SpanModel(BaseModel):
    line: int
    col: int
    len: int


class DiagnosticModel(BaseModel):
    code: str
    severity: str
    message: str
    span: SpanModel
    statement: str


class ParseErrorModel(BaseModel):
    message: str
    line: int
    col: int
    expected: list[str] = Field(default_factory=list)


class CheckRequest(BaseModel):
    source: str


class CheckResponse(BaseModel):
    ok: bool
    parse_errors: list[ParseErrorModel] = Field(default_factory=list)
    diagnostics: list[DiagnosticModel] = Field(default_factory=list)
    admissible_statements: list[str] = Field(default_factory=list)


class ProbRequest(BaseModel):
    source: str
    structure: str
    config: str


class ProbResponse(BaseModel):
    structure: str
    config: str
    probabilities: dict[str, float]


class BellRequest(BaseModel):
    a: float
    a_prime: float
    b: float
    b_prime: float
    degrees: bool = False


class LHVWitnessModel(BaseModel):
    alice: list[int]
    bob: list[int]


class BellResponse(BaseModel):
    angles: dict[str, float]
    correlations: dict[str, float]
    S: float
    abs_S: float
    lhv_max: float
    lhv_witness: LHVWitnessModel
    joint_distribution_exists: bool


class KSRequest(BaseModel):
    instance: Optional[str] = None  # builtin name
    source: Optional[str] = None  # instance file content


class KSResponse(BaseModel):
    instance: str
    dim: int
    rays: int
    contexts: int
    colorable: bool
    witness: Optional[list[int]] = None
    nodes_explored: int


class RepeatRequest(BaseModel):
    source: str
    structure: str
    config: str
    n: int = 100000
    seed: int = 0
    tol: float = 0.01


class RepeatResponse(BaseModel):
    structure: str
    config: str
    n: int
    seed: int
    tol: float
    max_abs_deviation: float
    passed: bool = Field(serialization_alias="pass")


class ExampleListResponse(BaseModel):
    examples: list[str]


class ExampleResponse(BaseModel):
    name: str
    source: str
    expected_codes: dict[str, list[str]]
