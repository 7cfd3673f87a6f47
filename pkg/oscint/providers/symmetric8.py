from __future__ import annotations

"""Coefficient engines for the optimized symmetric eight-step implicit family.

The family fixes a0..a4 = (0, -1, 2, -2, 1) and keeps b4 free; b0..b3 follow
from b4 by four linear relations that secure the common order conditions.
Two members are bundled: the maximal-order member with rational b4, and the
phase-fitted member whose b4 depends on v = omega*h.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
from sympy import QQ
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.ring_series import rs_cos, rs_mul, rs_pow, rs_series_inversion, rs_trunc
from sympy.polys.rings import ring

from ..errors import DomainError
from .base import ConstantB, MethodSpec, fraction_to_mp

PHASE_FIT_SCALE = 24192
# Upper end of the b4 domain: D vanishes again where cos v = 1.
V_GUARD = 0.999
V_MAX = 2.0 * math.pi * V_GUARD
V_SWITCH = 1.0
SERIES_TERMS = 32  # powers of v**2 kept in the embedded expansion

FIXED_B_EXACT = (
    Fraction(17273, 72576),
    Fraction(280997, 181440),
    Fraction(-33961, 181440),
    Fraction(173531, 181440),
    Fraction(45767, 725760),
)

# (slope, intercept) of b0..b3 as functions of b4.
B4_DEPENDENCIES = (
    (70, Fraction(-12629, 3024)),
    (-56, Fraction(20483, 4032)),
    (28, Fraction(-3937, 2016)),
    (-8, Fraction(17671, 12096)),
)


@dataclass(frozen=True)
class ACoefficients:
    a0: Fraction = Fraction(0)
    a1: Fraction = Fraction(-1)
    a2: Fraction = Fraction(2)
    a3: Fraction = Fraction(-2)
    a4: Fraction = Fraction(1)

    def as_tuple(self) -> tuple[Fraction, ...]:
        return (self.a0, self.a1, self.a2, self.a3, self.a4)

    def consistency_sum(self) -> Fraction:
        return self.a0 + 2 * (self.a1 + self.a2 + self.a3 + self.a4)


@dataclass(frozen=True)
class BCoefficients:
    """Dimensionless weights of the h**2 * f terms, b0 at the centre node."""

    b0: float
    b1: float
    b2: float
    b3: float
    b4: float

    def as_tuple(self) -> tuple[float, ...]:
        return (self.b0, self.b1, self.b2, self.b3, self.b4)

    def consistency_sum(self) -> float:
        return self.b0 + 2.0 * (self.b1 + self.b2 + self.b3 + self.b4)


EIGHT_STEP_A = ACoefficients()


def dependent_b_values(b4):
    """Return (b0, b1, b2, b3, b4) for a b4 given as Fraction, int or float."""
    if isinstance(b4, (Fraction, int)):
        head = tuple(slope * b4 + intercept for slope, intercept in B4_DEPENDENCIES)
        return (*head, Fraction(b4))
    value = float(b4)
    head = tuple(slope * value + float(intercept) for slope, intercept in B4_DEPENDENCIES)
    return (*head, value)


def dependent_b_values_mp(b4: mpmath.mpf) -> tuple[mpmath.mpf, ...]:
    head = tuple(slope * b4 + fraction_to_mp(intercept) for slope, intercept in B4_DEPENDENCIES)
    return (*head, b4)


def dependent_b_from_b4(b4: float) -> BCoefficients:
    if not math.isfinite(b4):
        raise DomainError(f"b4 must be finite, got {b4!r}")
    return BCoefficients(*dependent_b_values(float(b4)))


def fixed_b_coefficients() -> BCoefficients:
    return BCoefficients(*(float(item) for item in FIXED_B_EXACT))


# --- exact power series in v, even powers only --------------------------------------


def _build_b4_series(terms: int) -> tuple[Fraction, ...]:
    # C and D both start at v**10; expand far enough to keep `terms` even powers after dividing.
    _, v = ring("v", QQ)
    lead = 10
    prec = 2 * terms + lead
    c = rs_cos(v, v, prec)
    c2 = rs_mul(c, c, v, prec)
    c3 = rs_mul(c2, c, v, prec)
    c4 = rs_mul(c3, c, v, prec)
    u = v**2
    numerator = (
        24192 * c4
        + 17671 * rs_mul(u, c3, v, prec)
        - 24192 * c3
        - 12096 * c2
        - 11811 * rs_mul(u, c2, v, prec)
        + 15120 * c
        + 2109 * rs_mul(u, c, v, prec)
        - 409 * u
        - 3024
    )
    denominator = rs_trunc(u * rs_pow(1 - c, 4, v, prec), v, prec)
    try:
        numerator = rs_trunc(numerator, v, prec).exquo(v**lead)
        denominator = denominator.exquo(v**lead)
    except ExactQuotientFailed as exc:
        raise RuntimeError("phase-fitted b4 expansion: leading orders do not cancel") from exc
    quotient = rs_mul(numerator, rs_series_inversion(denominator, v, 2 * terms), v, 2 * terms)
    coefficients = (quotient.coeff(v ** (2 * n)) for n in range(terms))
    return tuple(-Fraction(int(q.numerator), int(q.denominator)) / PHASE_FIT_SCALE for q in coefficients)


B4_SERIES_EXACT = _build_b4_series(SERIES_TERMS)
B4_SERIES = tuple(float(value) for value in B4_SERIES_EXACT)
B4_LIMIT = B4_SERIES_EXACT[0]


def _check_domain(v: float) -> None:
    if not math.isfinite(v) or v <= 0.0:
        raise DomainError(f"v = omega*h must be positive and finite, got {v!r}")
    if v >= V_MAX:
        raise DomainError(f"v = {v:.6g} is at or beyond 2*pi*{V_GUARD}; reduce the step size")


def b4_series(v: float) -> float:
    u = v * v
    acc = 0.0
    for coefficient in reversed(B4_SERIES):
        acc = acc * u + coefficient
    return acc


def b4_direct(v: float) -> float:
    """Closed form written in s = 1 - cos v = 2 sin(v/2)**2 to limit cancellation."""
    half_sin = math.sin(0.5 * v)
    s = 2.0 * half_sin * half_sin
    u = v * v
    c_value = s * (-15120.0 + s * (60480.0 + s * (-72576.0 + 24192.0 * s))) + u * (
        7560.0 + s * (-31500.0 + s * (41202.0 - 17671.0 * s))
    )
    d_value = 16.0 * u * half_sin**8
    return -c_value / (PHASE_FIT_SCALE * d_value)


@lru_cache(maxsize=4096)
def phase_fitted_b4(v: float) -> float:
    _check_domain(v)
    if v < V_SWITCH:
        return b4_series(v)
    return b4_direct(v)


def phase_fitted_b4_mp(v, dps: int = 50) -> mpmath.mpf:
    """Evaluate the closed form exactly as written, in `dps`-digit arithmetic."""
    with mpmath.workdps(dps):
        x = mpmath.mpf(v)
        if x <= 0 or x >= 2 * mpmath.pi * mpmath.mpf(V_GUARD):
            raise DomainError(f"v = {v!r} outside (0, 2*pi*{V_GUARD})")
        c = mpmath.cos(x)
        u = x * x
        c_value = (
            24192 * c**4
            + (17671 * u - 24192) * c**3
            - (12096 + 11811 * u) * c**2
            + (15120 + 2109 * u) * c
            - 409 * u
            - 3024
        )
        d_value = u * (c**4 - 4 * c**3 + 6 * c**2 - 4 * c + 1)
        return -c_value / (PHASE_FIT_SCALE * d_value)


@dataclass(frozen=True)
class PhaseFittedB:
    """b-coefficients that null the phase lag at the current v."""

    frequency_dependent: bool = field(default=True, init=False)

    def coefficients(self, v: float) -> tuple[float, ...]:
        if v == 0.0:
            return self.limit_coefficients()
        return dependent_b_values(phase_fitted_b4(float(v)))

    def coefficients_mp(self, v, dps: int = 50) -> tuple[mpmath.mpf, ...]:
        with mpmath.workdps(dps):
            if mpmath.mpf(v) == 0:
                b4 = fraction_to_mp(B4_LIMIT)
            else:
                b4 = phase_fitted_b4_mp(v, dps)
            return dependent_b_values_mp(b4)

    def limit_coefficients(self) -> tuple[float, ...]:
        return tuple(float(item) for item in dependent_b_values(B4_LIMIT))


def fixed_method() -> MethodSpec:
    return MethodSpec(
        name="fixed8",
        a=EIGHT_STEP_A.as_tuple(),
        b_provider=ConstantB(FIXED_B_EXACT),
        stages=1,
        description="Symmetric 8-step implicit, algebraic order 10, phase-lag order 10",
    )


def phase_fitted_method() -> MethodSpec:
    return MethodSpec(
        name="phasefit8",
        a=EIGHT_STEP_A.as_tuple(),
        b_provider=PhaseFittedB(),
        stages=1,
        description="Symmetric 8-step implicit, phase-fitted (infinite phase-lag order)",
    )
