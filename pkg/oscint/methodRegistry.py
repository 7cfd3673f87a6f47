from __future__ import annotations

"""Registry mapping method and problem ids to factories used by the CLI, HTTP routes and bench."""

from dataclasses import dataclass
from typing import Callable

from .errors import UnknownIdentifier
from .providers.base import MethodSpec
from .providers.numerov import numerov_method
from .providers.symmetric8 import fixed_method, phase_fitted_method
from .services.integrator import IvpProblem
from .services.problems import (
    RESONANCE_ENERGIES,
    ResonanceCase,
    duffing,
    franco_palacios,
    inhomogeneous,
    schrodinger_problem,
    two_body,
)


@dataclass(frozen=True)
class MethodEntry:
    method_id: str
    factory: Callable[[], MethodSpec]
    expected_algebraic_order: int
    # None means the phase lag vanishes identically (phase-fitted).
    expected_phase_lag_order: int | None


@dataclass(frozen=True)
class ProblemEntry:
    problem_id: str
    factory: Callable[[], IvpProblem]
    default_metric: str
    resonance: ResonanceCase | None = None


_METHODS: dict[str, MethodEntry] = {}
_PROBLEMS: dict[str, ProblemEntry] = {}


def register_method(
    method_id: str,
    factory: Callable[[], MethodSpec],
    *,
    expected_algebraic_order: int,
    expected_phase_lag_order: int | None,
    replace: bool = False,
) -> MethodEntry:
    """Register a method factory; plug-in providers enter the bench through here."""
    if method_id in _METHODS and not replace:
        raise ValueError(f"method id {method_id!r} is already registered")
    entry = MethodEntry(method_id, factory, expected_algebraic_order, expected_phase_lag_order)
    _METHODS[method_id] = entry
    return entry


def register_problem(
    problem_id: str,
    factory: Callable[[], IvpProblem],
    *,
    default_metric: str = "max",
    resonance: ResonanceCase | None = None,
    replace: bool = False,
) -> ProblemEntry:
    if problem_id in _PROBLEMS and not replace:
        raise ValueError(f"problem id {problem_id!r} is already registered")
    entry = ProblemEntry(problem_id, factory, default_metric, resonance)
    _PROBLEMS[problem_id] = entry
    return entry


def unregister_problem(problem_id: str) -> None:
    _PROBLEMS.pop(problem_id, None)


def method_ids() -> list[str]:
    return list(_METHODS)


def problem_ids() -> list[str]:
    return list(_PROBLEMS)


def get_method_entry(method_id: str) -> MethodEntry:
    try:
        return _METHODS[method_id]
    except KeyError as exc:
        raise UnknownIdentifier(
            f"unknown method {method_id!r}; registered: {', '.join(_METHODS)}"
        ) from exc


def get_problem_entry(problem_id: str) -> ProblemEntry:
    try:
        return _PROBLEMS[problem_id]
    except KeyError as exc:
        raise UnknownIdentifier(
            f"unknown problem {problem_id!r}; registered: {', '.join(_PROBLEMS)}"
        ) from exc


def get_method(method_id: str) -> MethodSpec:
    return get_method_entry(method_id).factory()


def get_problem(problem_id: str) -> IvpProblem:
    return get_problem_entry(problem_id).factory()


def _schrodinger_id(energy: float) -> str:
    return f"schrodinger-{int(energy)}"


def _register_defaults() -> None:
    register_method("phasefit8", phase_fitted_method, expected_algebraic_order=10, expected_phase_lag_order=None)
    register_method("fixed8", fixed_method, expected_algebraic_order=10, expected_phase_lag_order=10)
    register_method("numerov", numerov_method, expected_algebraic_order=4, expected_phase_lag_order=4)
    register_problem("franco-palacios", franco_palacios)
    register_problem("inhomogeneous", inhomogeneous)
    register_problem("two-body", two_body)
    register_problem("duffing", duffing)
    for energy in RESONANCE_ENERGIES:
        case = ResonanceCase(energy)
        register_problem(
            _schrodinger_id(energy),
            lambda case=case: schrodinger_problem(case),
            default_metric="phase-shift",
            resonance=case,
        )


_register_defaults()
