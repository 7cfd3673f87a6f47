from __future__ import annotations

from fastapi import APIRouter, HTTPException
from fastapi.responses import PlainTextResponse

from ..errors import ConfigError, UnknownIdentifier
from ..schemas import (
    MethodInfo,
    ProblemInfo,
    RunResult,
    SweepConfig,
    SweepResponse,
    VerificationResult,
)


def build_api_router(
    *,
    load_config,
    method_ids,
    problem_ids,
    get_method,
    get_problem_entry,
    run_sweep,
    validate_sweep,
    render_csv,
    verify_registered,
) -> APIRouter:
    router = APIRouter()

    @router.get("/methods", response_model=list[MethodInfo])
    def list_methods() -> list[MethodInfo]:
        """List registered integration methods."""
        response: list[MethodInfo] = []
        for method_id in method_ids():
            method = get_method(method_id)
            response.append(
                MethodInfo(
                    method_id=method_id,
                    steps=method.steps,
                    stages=method.stages,
                    frequency_dependent=method.frequency_dependent,
                    description=method.description,
                )
            )
        return response

    @router.get("/problems", response_model=list[ProblemInfo])
    def list_problems() -> list[ProblemInfo]:
        """List benchmark problems with their default metric and step grid."""
        config = load_config()
        response: list[ProblemInfo] = []
        for problem_id in problem_ids():
            entry = get_problem_entry(problem_id)
            problem = entry.factory()
            response.append(
                ProblemInfo(
                    problem_id=problem_id,
                    dimension=problem.dimension,
                    x_start=problem.x_start,
                    x_end=problem.x_end,
                    default_metric=entry.default_metric,
                    default_steps=config.steps_for(problem_id),
                    description=problem.description,
                )
            )
        return response

    @router.get("/verify", response_model=list[VerificationResult])
    def verify(methods: str | None = None) -> list[VerificationResult]:
        """Run the coefficient checks for all or selected methods."""
        selected = [item.strip() for item in methods.split(",") if item.strip()] if methods else None
        try:
            return verify_registered(selected)
        except UnknownIdentifier as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc

    def _run(payload: SweepConfig) -> list[RunResult]:
        config = load_config()
        try:
            validate_sweep(payload)
        except ConfigError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return run_sweep(payload, accuracy_cap=config.accuracy_cap, sample_x=config.phase_shift_sample_x)

    @router.post("/sweeps", response_model=SweepResponse)
    def create_sweep(payload: SweepConfig) -> SweepResponse:
        """Run a sweep synchronously and return the result rows."""
        results = _run(payload)
        return SweepResponse(
            problem=payload.problem,
            metric=payload.metric,
            results=results,
            failed_runs=sum(1 for row in results if row.failed),
        )

    @router.post("/sweeps/export", response_class=PlainTextResponse)
    def export_sweep(payload: SweepConfig) -> PlainTextResponse:
        """Run a sweep and return it in the CSV result format."""
        results = _run(payload)
        return PlainTextResponse(render_csv(results), media_type="text/csv")

    return router
