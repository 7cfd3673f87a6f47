from __future__ import annotations

import math

from pydantic import BaseModel, field_validator

METRICS = ("max", "endpoint", "phase-shift")


class SweepConfig(BaseModel):
    problem: str
    methods: list[str]
    steps: list[int]
    metric: str = "max"
    out: str | None = None
    workers: int = 1
    record_timing: bool = True

    @field_validator("methods")
    @classmethod
    def _methods_present(cls, value: list[str]) -> list[str]:
        cleaned = [item.strip() for item in value if item.strip()]
        if not cleaned:
            raise ValueError("at least one method id is required")
        return cleaned

    @field_validator("steps")
    @classmethod
    def _steps_increasing(cls, value: list[int]) -> list[int]:
        if len(value) < 2:
            raise ValueError("at least two step counts are required")
        if any(item <= 0 for item in value):
            raise ValueError("step counts must be positive")
        if any(later <= earlier for earlier, later in zip(value, value[1:])):
            raise ValueError(f"step counts must be strictly increasing, got {value}")
        return value

    @field_validator("metric")
    @classmethod
    def _metric_known(cls, value: str) -> str:
        if value not in METRICS:
            raise ValueError(f"unknown metric {value!r}; expected one of {', '.join(METRICS)}")
        return value

    @field_validator("workers")
    @classmethod
    def _workers_positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("workers must be >= 1")
        return value


class RunResult(BaseModel):
    method: str
    problem: str
    n_steps: int
    stages: int = 1
    work: int
    log10_work: float
    error: float
    accuracy: float
    wall_seconds: float
    corrector_iterations: int = 0
    note: str | None = None

    @property
    def failed(self) -> bool:
        return math.isnan(self.error)


class MethodInfo(BaseModel):
    method_id: str
    steps: int
    stages: int
    frequency_dependent: bool
    description: str


class ProblemInfo(BaseModel):
    problem_id: str
    dimension: int
    x_start: float
    x_end: float
    default_metric: str
    default_steps: list[int]
    description: str


class PhaseLagSummary(BaseModel):
    order_estimate: float
    constant_estimate: float
    fit_residual: float


class VerificationResult(BaseModel):
    method_id: str
    a_sum: float
    b_sum: float
    algebraic_order: int
    expected_algebraic_order: int
    phase_lag: PhaseLagSummary | None = None
    phase_lag_infinite: bool
    expected_phase_lag_order: int | None = None
    fitted_identity_max: float | None = None
    periodicity_bound: float
    passed: bool
    failures: list[str] = []


class SweepResponse(BaseModel):
    problem: str
    metric: str
    results: list[RunResult]
    failed_runs: int
