from __future__ import annotations

"""Fixed-step driver for symmetric 2k-step implicit methods on y'' = f(x, y)."""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import CorrectorDiverged, DomainError, SingularLinearSolve, StepTooLarge
from ..providers.base import MethodSpec
from ..providers.numerov import numerov_method
from .reference import DEFAULT_SUBSTEPS, reference_start

LINEAR_DENOMINATOR_FLOOR = 1e-12
CORRECTOR_TOLERANCE = 1e-14
CORRECTOR_MAX_ITERATIONS = 50
GRID_TOLERANCE = 1e-12

Vector = np.ndarray


@dataclass(frozen=True, eq=False)
class IvpProblem:
    """A second-order IVP y'' = rhs(x, y) on [x_start, x_end].

    `linear_coefficients(x)` returns (lam, g) with rhs = lam * y + g componentwise
    when the problem is linear in y. `frequency(x, y)` returns omega >= 0.
    """

    name: str
    dimension: int
    rhs: Callable[[float, Vector], Vector]
    x_start: float
    x_end: float
    y0: Vector
    dy0: Vector
    frequency: Callable[[float, Vector], float]
    exact_solution: Callable[[float], Vector] | None = None
    linear_coefficients: Callable[[float], tuple[Vector, Vector]] | None = None
    scale_start_to_step: bool = False
    description: str = ""

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise ValueError(f"{self.name}: dimension must be >= 1")
        if not self.x_end > self.x_start:
            raise ValueError(f"{self.name}: x_end must exceed x_start")
        object.__setattr__(self, "y0", np.array(self.y0, dtype=float).reshape(self.dimension))
        object.__setattr__(self, "dy0", np.array(self.dy0, dtype=float).reshape(self.dimension))

    @property
    def linear_in_y(self) -> bool:
        return self.linear_coefficients is not None

    @property
    def length(self) -> float:
        return self.x_end - self.x_start


@dataclass(frozen=True)
class StepRecord:
    index: int
    x: float
    y: Vector
    f: Vector
    iterations: int = 0


@dataclass(frozen=True)
class StepState:
    """Sliding window of the last 2k records, oldest first.

    Abscissas are x_start + index * h; a negative h runs the recurrence backwards.
    """

    records: tuple[StepRecord, ...]
    h: float
    x_start: float = 0.0

    def __post_init__(self) -> None:
        if self.h == 0.0 or not math.isfinite(self.h):
            raise ValueError(f"step length must be finite and nonzero, got {self.h!r}")
        for older, newer in zip(self.records, self.records[1:]):
            if abs(newer.x - older.x - self.h) >= GRID_TOLERANCE * max(1.0, abs(older.x)):
                raise ValueError(f"window abscissas are not equally spaced near x={older.x!r}")

    @property
    def newest(self) -> StepRecord:
        return self.records[-1]

    def next_abscissa(self) -> tuple[int, float]:
        index = self.newest.index + 1
        return index, self.x_start + index * self.h


@dataclass(frozen=True, eq=False)
class Trajectory:
    xs: np.ndarray
    ys: np.ndarray
    h: float
    method: str
    problem: str = ""
    corrector_iterations: int = 0  # worst step

    @property
    def n_steps(self) -> int:
        return len(self.xs) - 1


def make_state(problem: IvpProblem, h: float, ys: list[Vector], x_start: float | None = None) -> StepState:
    origin = problem.x_start if x_start is None else x_start
    records = []
    for index, y in enumerate(ys):
        x = origin + index * h
        y_arr = np.array(y, dtype=float).reshape(problem.dimension)
        records.append(StepRecord(index, x, y_arr, np.asarray(problem.rhs(x, y_arr), dtype=float)))
    return StepState(tuple(records), h, origin)


def bootstrap_start(problem: IvpProblem, h: float, steps: int = 8) -> StepState:
    """Produce the first `steps` grid points of the integration."""
    if not h > 0.0:
        raise StepTooLarge(f"step length must be positive, got {h!r}")
    if steps * h > problem.length * (1.0 + 1e-12):
        raise StepTooLarge(
            f"{problem.name}: {steps} starting steps of h={h:.6g} exceed the interval length {problem.length:.6g}"
        )
    if problem.exact_solution is not None:
        ys = [problem.exact_solution(problem.x_start + i * h) for i in range(steps)]
    else:
        ys = reference_start(problem.rhs, problem.x_start, problem.y0, problem.dy0, h, steps, DEFAULT_SUBSTEPS)
    if problem.scale_start_to_step and steps > 1:
        anchor = float(np.asarray(ys[1], dtype=float).reshape(-1)[0])
        if anchor == 0.0:
            raise StepTooLarge(f"{problem.name}: second starting value is zero, cannot normalize")
        factor = h / anchor
        ys = [np.asarray(y, dtype=float) * factor for y in ys]
        ys[1] = np.full(problem.dimension, h)
    return make_state(problem, h, ys)


def _fixed_point(
    explicit: Vector,
    x_new: float,
    weight: float,
    problem: IvpProblem,
    predictor: Vector,
) -> tuple[Vector, int]:
    y = np.array(predictor, dtype=float)
    for iteration in range(1, CORRECTOR_MAX_ITERATIONS + 1):
        updated = explicit + weight * np.asarray(problem.rhs(x_new, y), dtype=float)
        change = float(np.max(np.abs(updated - y)))
        scale = float(np.max(np.abs(updated)))
        if not (math.isfinite(change) and math.isfinite(scale)):
            raise CorrectorDiverged(f"{problem.name}: corrector produced non-finite values at x={x_new!r}")
        y = updated
        if change <= CORRECTOR_TOLERANCE * scale:
            return y, iteration
    raise CorrectorDiverged(
        f"{problem.name}: corrector did not converge in {CORRECTOR_MAX_ITERATIONS} iterations at x={x_new!r}"
    )


def solve_implicit(
    explicit: Vector,
    x_new: float,
    h: float,
    b_implicit: float,
    problem: IvpProblem,
    predictor: Vector,
) -> Vector:
    """Solve y = explicit + h**2 * b_implicit * f(x_new, y)."""
    y, _ = solve_implicit_counted(explicit, x_new, h, b_implicit, problem, predictor)
    return y


def solve_implicit_counted(
    explicit: Vector,
    x_new: float,
    h: float,
    b_implicit: float,
    problem: IvpProblem,
    predictor: Vector,
) -> tuple[Vector, int]:
    """Like `solve_implicit`, also returning the fixed-point iteration count (0 when solved directly)."""
    if b_implicit == 0.0:
        return np.array(explicit, dtype=float), 0
    weight = h * h * b_implicit
    if problem.linear_coefficients is not None:
        lam, g = problem.linear_coefficients(x_new)
        denominator = 1.0 - weight * np.asarray(lam, dtype=float)
        if np.any(np.abs(denominator) < LINEAR_DENOMINATOR_FLOOR):
            raise SingularLinearSolve(f"{problem.name}: linear corrector denominator vanished at x={x_new!r}")
        return (explicit + weight * np.asarray(g, dtype=float)) / denominator, 0
    return _fixed_point(explicit, x_new, weight, problem, predictor)


def _coefficients(method: MethodSpec, state: StepState, problem: IvpProblem, x_new: float) -> tuple[float, ...]:
    if not method.frequency_dependent:
        return method.b_at(0.0)
    omega = float(problem.frequency(x_new, state.newest.y))
    if not math.isfinite(omega) or omega < 0.0:
        raise DomainError(f"{problem.name}: frequency estimate {omega!r} at x={x_new!r} is not usable")
    return method.b_at(omega * abs(state.h))


def advance(method: MethodSpec, state: StepState, problem: IvpProblem) -> StepState:
    """Compute the next grid value and slide the window by one record."""
    k = method.half_steps
    records = state.records
    if len(records) != 2 * k:
        raise ValueError(f"{method.name} needs a window of {2 * k} records, got {len(records)}")
    index, x_new = state.next_abscissa()
    a = method.a_float()
    b = _coefficients(method, state, problem, x_new)
    h2 = state.h * state.h

    centre = records[k]
    explicit = -records[0].y - a[0] * centre.y
    history = b[k] * records[0].f + b[0] * centre.f
    for j in range(1, k):
        explicit = explicit - a[j] * (records[k + j].y + records[k - j].y)
        history = history + b[j] * (records[k + j].f + records[k - j].f)
    explicit = explicit + h2 * history

    predictor = explicit + h2 * b[k] * records[-1].f
    y_new, iterations = solve_implicit_counted(explicit, x_new, state.h, b[k], problem, predictor)
    f_new = np.asarray(problem.rhs(x_new, y_new), dtype=float)
    return StepState((*records[1:], StepRecord(index, x_new, y_new, f_new, iterations)), state.h, state.x_start)


def numerov_advance(state: StepState, problem: IvpProblem) -> StepState:
    return advance(_NUMEROV, state, problem)


def integrate(method: MethodSpec, problem: IvpProblem, n_steps: int) -> Trajectory:
    window = method.steps
    if n_steps < window:
        raise StepTooLarge(f"{method.name} needs at least {window} steps, got {n_steps}")
    h = problem.length / n_steps
    state = bootstrap_start(problem, h, window)
    ys = np.empty((n_steps + 1, problem.dimension))
    for record in state.records:
        ys[record.index] = record.y
    worst = 0
    for index in range(window, n_steps + 1):
        state = advance(method, state, problem)
        ys[index] = state.newest.y
        worst = max(worst, state.newest.iterations)
    xs = problem.x_start + np.arange(n_steps + 1) * h
    return Trajectory(xs=xs, ys=ys, h=h, method=method.name, problem=problem.name, corrector_iterations=worst)


_NUMEROV = numerov_method()
