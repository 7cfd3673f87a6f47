from __future__ import annotations

"""Phase-lag, algebraic-order and periodicity checks for symmetric multistep methods."""

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from ..errors import DegenerateDenominator, DomainError, IdenticallyZero
from ..providers.base import MethodSpec, fraction_to_mp, symmetric_sum

DENOMINATOR_FLOOR = 1e-300
ORDER_TOLERANCE = 1e-9
MAX_ORDER_PROBE = 40
FIT_WINDOW = (1e-2, 1e-1)
FIT_SAMPLES = 20
FIT_DPS = 60
# Digits reserved for cancellation when deciding that a phase lag is zero.
ZERO_MARGIN_DIGITS = 15
FITTED_IDENTITY_WINDOW = (0.05, 3.0)
FITTED_IDENTITY_SAMPLES = 100
UNIT_CIRCLE_TOLERANCE = 1e-6


@dataclass(frozen=True)
class StabilityPolys:
    """Values A0(v)..Ak(v) of the characteristic-equation coefficients."""

    values: tuple[float, ...]

    def __getitem__(self, index: int) -> float:
        return self.values[index]

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class PhaseLagReport:
    order_estimate: float
    constant_estimate: float
    fit_residual: float


@dataclass(frozen=True)
class MethodVerification:
    method: str
    a_sum: float
    b_sum: float
    algebraic_order: int
    phase_lag: PhaseLagReport | None
    phase_lag_infinite: bool
    fitted_identity_max: float | None
    periodicity_bound: float


def stability_polys(method: MethodSpec, v: float) -> StabilityPolys:
    if not math.isfinite(v) or v < 0.0:
        raise DomainError(f"v must be a nonnegative finite number, got {v!r}")
    b = method.b_at(v)
    v2 = v * v
    return StabilityPolys(tuple(a + v2 * bj for a, bj in zip(method.a_float(), b)))


def _phase_lag_parts(polys, cosines) -> tuple[object, object]:
    numerator = polys[0]
    denominator = 0
    for j in range(1, len(polys)):
        numerator += 2 * polys[j] * cosines[j]
        denominator += 2 * j * j * polys[j]
    return numerator, denominator


def phase_lag_value(method: MethodSpec, v: float, *, dps: int | None = None):
    """Ratio whose expansion is -c * v**(q+2) + O(v**(q+4)).

    With `dps` set the ratio is evaluated in mpmath and an mpf is returned.
    """
    if not v > 0:
        raise DomainError(f"phase lag needs v > 0, got {v!r}")
    if dps is None:
        polys = stability_polys(method, v).values
        cosines = [math.cos(j * v) for j in range(len(polys))]
        numerator, denominator = _phase_lag_parts(polys, cosines)
        if abs(denominator) < DENOMINATOR_FLOOR:
            raise DegenerateDenominator(f"phase-lag denominator vanished at v={v!r}")
        return numerator / denominator
    with mpmath.workdps(dps):
        x = mpmath.mpf(v)
        b = method.b_provider.coefficients_mp(x, dps)
        polys = [fraction_to_mp(a) + x * x * bj for a, bj in zip(method.a, b)]
        cosines = [mpmath.cos(j * x) for j in range(len(polys))]
        numerator, denominator = _phase_lag_parts(polys, cosines)
        if abs(denominator) < DENOMINATOR_FLOOR:
            raise DegenerateDenominator(f"phase-lag denominator vanished at v={v!r}")
        return numerator / denominator


def estimate_phase_lag_order(
    method: MethodSpec,
    *,
    window: tuple[float, float] = FIT_WINDOW,
    samples: int = FIT_SAMPLES,
    dps: int = FIT_DPS,
) -> PhaseLagReport:
    """Least-squares fit of log|PL| against log v over a logarithmic grid."""
    grid = np.logspace(math.log10(window[0]), math.log10(window[1]), samples)
    values = [phase_lag_value(method, float(v), dps=dps) for v in grid]
    zero_floor = mpmath.mpf(10) ** (-(dps - ZERO_MARGIN_DIGITS))
    if all(abs(value) < zero_floor for value in values):
        raise IdenticallyZero(
            f"{method.name}: phase lag below {float(zero_floor):.1e} on {window}; infinite order"
        )
    if any(value == 0 for value in values):
        raise IdenticallyZero(f"{method.name}: phase lag vanishes at some samples of {window}")
    log_v = np.log(grid)
    log_pl = np.array([float(mpmath.log(abs(value))) for value in values])
    slope, intercept = np.polyfit(log_v, log_pl, 1)
    residual = float(np.max(np.abs(log_pl - (slope * log_v + intercept))))
    sign = 1.0 if values[-1] > 0 else -1.0
    return PhaseLagReport(
        order_estimate=float(slope) - 2.0,
        constant_estimate=-sign * math.exp(float(intercept)),
        fit_residual=residual,
    )


def _operator_terms(a: tuple[float, ...], b: tuple[float, ...], power: int) -> list[float]:
    """Terms of L[x**p] at x = 0, h = 1 with nodes -k..k."""
    terms: list[float] = [a[0] * (1.0 if power == 0 else 0.0)]
    if power >= 2:
        terms.append(-b[0] * power * (power - 1) * (1.0 if power == 2 else 0.0))
    for j in range(1, len(a)):
        terms.append(a[j] * (j**power + (-j) ** power))
        if power >= 2:
            terms.append(-b[j] * power * (power - 1) * (j ** (power - 2) + (-j) ** (power - 2)))
    return terms


def algebraic_order(method: MethodSpec, at_v: float = 0.0) -> int:
    """Largest p such that L vanishes on 1, x, ..., x**(p+1)."""
    if at_v > 0.0:
        b = method.b_at(at_v)
    else:
        b = method.b_provider.limit_coefficients()
    a = method.a_float()
    for power in range(MAX_ORDER_PROBE + 1):
        terms = _operator_terms(a, tuple(b), power)
        scale = max(abs(term) for term in terms)
        if scale == 0.0:
            continue
        if abs(math.fsum(terms)) >= ORDER_TOLERANCE * scale:
            return power - 2
    return MAX_ORDER_PROBE - 1


def characteristic_roots(method: MethodSpec, v: float) -> np.ndarray:
    polys = stability_polys(method, v).values
    coefficients = [*reversed(polys[1:]), polys[0], *polys[1:]]
    return np.roots(np.array(coefficients, dtype=float))


def _principal_root(roots: np.ndarray, v: float) -> complex:
    target = complex(math.cos(v), math.sin(v))
    return complex(roots[int(np.argmin(np.abs(roots - target)))])


def phase_error(method: MethodSpec, v: float) -> float:
    """t = v - theta(v) from the principal characteristic root."""
    root = _principal_root(characteristic_roots(method, v), v)
    return v - math.atan2(root.imag, root.real)


def is_periodic(method: MethodSpec, v: float, tolerance: float = UNIT_CIRCLE_TOLERANCE) -> bool:
    roots = characteristic_roots(method, v)
    principal = _principal_root(roots, v)
    if abs(abs(principal) - 1.0) > tolerance:
        return False
    return bool(np.all(np.abs(roots) <= 1.0 + tolerance))


def periodicity_bound(method: MethodSpec, v_max: float = 3.0, samples: int = 300) -> float:
    """Largest scanned v such that every smaller scanned v is periodic; (0, bound**2) in v**2."""
    grid = np.linspace(v_max / samples, v_max, samples)
    bound = 0.0
    for v in grid:
        try:
            periodic = is_periodic(method, float(v))
        except DomainError:
            break
        if not periodic:
            break
        bound = float(v)
    return bound


def fitted_identity_residual(
    method: MethodSpec,
    window: tuple[float, float] = FITTED_IDENTITY_WINDOW,
    samples: int = FITTED_IDENTITY_SAMPLES,
) -> float:
    grid = np.linspace(window[0], window[1], samples)
    return max(abs(phase_lag_value(method, float(v))) for v in grid)


def verify_method(method: MethodSpec) -> MethodVerification:
    b_limit = method.b_provider.limit_coefficients()
    try:
        report: PhaseLagReport | None = estimate_phase_lag_order(method)
        infinite = False
    except IdenticallyZero:
        report = None
        infinite = True
    return MethodVerification(
        method=method.name,
        a_sum=float(symmetric_sum(method.a)),
        b_sum=float(symmetric_sum(b_limit)),
        algebraic_order=algebraic_order(method),
        phase_lag=report,
        phase_lag_infinite=infinite,
        fitted_identity_max=fitted_identity_residual(method) if method.frequency_dependent else None,
        periodicity_bound=periodicity_bound(method),
    )
