from __future__ import annotations

"""Method x step-count sweeps, error metrics and the CSV result format."""

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Iterable

import numpy as np
from pydantic import ValidationError

from ..activity import ActivityEvent, log_activity
from ..errors import ConfigError, OscintError
from ..methodRegistry import ProblemEntry, get_method, get_method_entry, get_problem_entry
from ..schemas import RunResult, SweepConfig
from .integrator import IvpProblem, Trajectory, integrate
from .problems import PHASE_SHIFT_SAMPLE_X, resonance_phase_shift

ACCURACY_CAP = 15.0
CSV_HEADER = (
    "method",
    "problem",
    "n_steps",
    "stages",
    "work",
    "log10_work",
    "error",
    "accuracy",
    "wall_seconds",
    "note",
)
RUN_FAILURES = (OscintError, ArithmeticError, ValueError)


def max_interval_error(traj: Trajectory, exact: Callable[[float], np.ndarray]) -> float:
    reference = np.array([np.asarray(exact(float(x)), dtype=float).reshape(-1) for x in traj.xs])
    return float(np.max(np.linalg.norm(traj.ys - reference, axis=1)))


def endpoint_error(traj: Trajectory, exact: Callable[[float], np.ndarray]) -> float:
    reference = np.asarray(exact(float(traj.xs[-1])), dtype=float).reshape(-1)
    return float(np.linalg.norm(traj.ys[-1] - reference))


def accuracy_from_error(error: float, cap: float = ACCURACY_CAP) -> float:
    """-log10(error), with errors below 10**-cap reported at the cap."""
    if math.isnan(error):
        return math.nan
    return min(-math.log10(max(error, 10.0**-cap)), cap)


def build_sweep_config(**values: object) -> SweepConfig:
    try:
        return SweepConfig(**values)
    except ValidationError as exc:
        messages = "; ".join(str(item.get("msg")) for item in exc.errors())
        raise ConfigError(f"invalid sweep configuration: {messages}") from exc


def _check_metric(entry: ProblemEntry, problem: IvpProblem, metric: str) -> None:
    if metric in ("max", "endpoint") and problem.exact_solution is None:
        raise ConfigError(f"metric {metric!r} needs an exact solution; {entry.problem_id} has none")
    if metric == "phase-shift" and entry.resonance is None:
        raise ConfigError(f"metric 'phase-shift' applies only to resonance problems, not {entry.problem_id}")


def validate_sweep(config: SweepConfig) -> None:
    """Resolve every id and check the metric against the problem; raises ConfigError."""
    entry = get_problem_entry(config.problem)
    _check_metric(entry, entry.factory(), config.metric)
    for method_id in config.methods:
        get_method_entry(method_id)


def measure_error(traj: Trajectory, entry: ProblemEntry, problem: IvpProblem, metric: str, sample_x: float) -> float:
    if metric == "phase-shift":
        return resonance_phase_shift(traj, entry.resonance, sample_x).abs_error
    if metric == "endpoint":
        return endpoint_error(traj, problem.exact_solution)
    return max_interval_error(traj, problem.exact_solution)


def run_one(
    problem_id: str,
    method_id: str,
    n_steps: int,
    metric: str,
    *,
    accuracy_cap: float = ACCURACY_CAP,
    sample_x: float = PHASE_SHIFT_SAMPLE_X,
    record_timing: bool = True,
) -> RunResult:
    """Integrate one (method, n_steps) pair; numerical failures become a failed row."""
    entry = get_problem_entry(problem_id)
    problem = entry.factory()
    method = get_method(method_id)
    work = n_steps * method.stages
    started = time.perf_counter()
    note: str | None = None
    iterations = 0
    try:
        with np.errstate(over="raise", invalid="raise"):
            traj = integrate(method, problem, n_steps)
            error = measure_error(traj, entry, problem, metric, sample_x)
        iterations = traj.corrector_iterations
        if not math.isfinite(error):
            raise FloatingPointError(f"error metric is not finite ({error!r})")
    except RUN_FAILURES as exc:
        error = math.nan
        note = f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - started if record_timing else 0.0
    return RunResult(
        method=method_id,
        problem=problem_id,
        n_steps=n_steps,
        stages=method.stages,
        work=work,
        log10_work=math.log10(work),
        error=error,
        accuracy=accuracy_from_error(error, accuracy_cap),
        wall_seconds=elapsed,
        corrector_iterations=iterations,
        note=note,
    )


def _run_task(task: tuple[str, str, int, str, float, float, bool]) -> RunResult:
    problem_id, method_id, n_steps, metric, cap, sample_x, record_timing = task
    return run_one(
        problem_id,
        method_id,
        n_steps,
        metric,
        accuracy_cap=cap,
        sample_x=sample_x,
        record_timing=record_timing,
    )


def run_sweep(
    config: SweepConfig,
    *,
    accuracy_cap: float = ACCURACY_CAP,
    sample_x: float = PHASE_SHIFT_SAMPLE_X,
) -> list[RunResult]:
    """Run every (method, n_steps) pair and return rows sorted by (method, n_steps)."""
    validate_sweep(config)
    tasks = [
        (config.problem, method_id, n_steps, config.metric, accuracy_cap, sample_x, config.record_timing)
        for method_id in config.methods
        for n_steps in config.steps
    ]
    log_activity(
        ActivityEvent.SWEEP_STARTED,
        f"{len(tasks)} runs on {config.problem}",
        metadata={"problem": config.problem, "methods": config.methods, "steps": config.steps,
                  "metric": config.metric, "workers": config.workers},
        source="run_sweep",
    )
    if config.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(config.workers, len(tasks))) as pool:
            results = list(pool.map(_run_task, tasks))
    else:
        results = [_run_task(task) for task in tasks]

    results.sort(key=lambda row: (row.method, row.n_steps))
    for row in results:
        if row.failed:
            log_activity(
                ActivityEvent.RUN_FAILED,
                row.note,
                level="warning",
                status="failed",
                metadata={"method": row.method, "n_steps": row.n_steps},
                source="run_sweep",
            )
        else:
            log_activity(
                ActivityEvent.RUN_COMPLETED,
                f"accuracy {row.accuracy:.3f}",
                level="debug",
                metadata={"method": row.method, "n_steps": row.n_steps, "error": row.error,
                          "corrector_iterations": row.corrector_iterations},
                source="run_sweep",
            )
    failed = sum(1 for row in results if row.failed)
    log_activity(
        ActivityEvent.SWEEP_COMPLETED,
        f"{len(results) - failed} ok, {failed} failed",
        status="success" if failed == 0 else "partial",
        metadata={"problem": config.problem, "failed": failed},
        source="run_sweep",
    )
    return results


def _format_float(value: float) -> str:
    if math.isnan(value):
        return "NaN"
    return format(value, ".17g")


def _csv_row(row: RunResult) -> list[str]:
    return [
        row.method,
        row.problem,
        str(row.n_steps),
        str(row.stages),
        str(row.work),
        _format_float(row.log10_work),
        _format_float(row.error),
        _format_float(row.accuracy),
        _format_float(row.wall_seconds),
        row.note or "",
    ]


def render_csv(results: Iterable[RunResult]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in results:
        writer.writerow(_csv_row(row))
    return buffer.getvalue()


def write_csv(results: Iterable[RunResult], path: Path | str) -> Path:
    target = Path(path)
    rows = list(results)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        with target.open("w", encoding="utf-8", newline="") as handle:
            handle.write(render_csv(rows))
    except OSError as exc:
        raise OscintError(f"cannot write results to {target}: {exc}") from exc
    log_activity(
        ActivityEvent.CSV_WRITTEN,
        str(target),
        metadata={"rows": len(rows)},
        source="write_csv",
    )
    return target


def read_csv(path: Path | str) -> list[RunResult]:
    source = Path(path)
    try:
        with source.open("r", encoding="utf-8", newline="") as handle:
            reader = csv.DictReader(handle)
            return [
                RunResult(
                    method=record["method"],
                    problem=record["problem"],
                    n_steps=int(record["n_steps"]),
                    stages=int(record["stages"]),
                    work=int(record["work"]),
                    log10_work=float(record["log10_work"]),
                    error=float(record["error"]),
                    accuracy=float(record["accuracy"]),
                    wall_seconds=float(record["wall_seconds"]),
                    note=record.get("note") or None,
                )
                for record in reader
            ]
    except OSError as exc:
        raise OscintError(f"cannot read results from {source}: {exc}") from exc


def successful_rows(results: Iterable[RunResult], method: str) -> list[RunResult]:
    return sorted((row for row in results if row.method == method and not row.failed), key=lambda row: row.work)


def accuracy_at_work(results: Iterable[RunResult], method: str, log10_work: float) -> float:
    """Accuracy of `method` interpolated linearly in log10(work)."""
    rows = successful_rows(results, method)
    if not rows:
        raise ValueError(f"no successful runs for {method}")
    return float(np.interp(log10_work, [row.log10_work for row in rows], [row.accuracy for row in rows]))


def convergence_exponents(results: Iterable[RunResult], method: str) -> list[float]:
    """Observed order between consecutive successful runs of `method`."""
    rows = successful_rows(results, method)
    return [
        math.log(coarse.error / fine.error) / math.log(fine.n_steps / coarse.n_steps)
        for coarse, fine in zip(rows, rows[1:])
        if coarse.error > 0.0 and fine.error > 0.0
    ]
