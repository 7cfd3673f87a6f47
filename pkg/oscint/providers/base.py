from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Protocol, Sequence

import mpmath


class CoefficientProvider(Protocol):
    """Interface for b-coefficient sources behind a MethodSpec."""

    frequency_dependent: bool

    def coefficients(self, v: float) -> tuple[float, ...]:
        """Return (b0, ..., bk) at v = omega*h in double precision."""
        raise NotImplementedError

    def coefficients_mp(self, v: object, dps: int) -> tuple[mpmath.mpf, ...]:
        """Return (b0, ..., bk) at v evaluated with `dps` significant digits."""
        raise NotImplementedError

    def limit_coefficients(self) -> tuple[float, ...]:
        """Return the v -> 0 limit of (b0, ..., bk)."""
        raise NotImplementedError


def fraction_to_mp(value: Fraction) -> mpmath.mpf:
    return mpmath.mpf(value.numerator) / value.denominator


@dataclass(frozen=True)
class ConstantB:
    """Frequency-independent weights held as exact rationals."""

    values: tuple[Fraction, ...]
    frequency_dependent: bool = field(default=False, init=False)

    @cached_property
    def _float_values(self) -> tuple[float, ...]:
        return tuple(float(item) for item in self.values)

    def coefficients(self, v: float = 0.0) -> tuple[float, ...]:
        return self._float_values

    def coefficients_mp(self, v: object = 0, dps: int = 50) -> tuple[mpmath.mpf, ...]:
        with mpmath.workdps(dps):
            return tuple(fraction_to_mp(item) for item in self.values)

    def limit_coefficients(self) -> tuple[float, ...]:
        return self.coefficients()


@dataclass(frozen=True)
class MethodSpec:
    """A symmetric 2k-step method: fixed a-coefficients plus a b-coefficient provider.

    `a` lists a0..ak, the weights of y0 and of each symmetric pair (y_j + y_-j);
    ak is the weight of the implicit pair and is 1 for every bundled method.
    """

    name: str
    a: tuple[Fraction, ...]
    b_provider: CoefficientProvider
    stages: int = 1
    description: str = ""

    def __post_init__(self) -> None:
        if self.stages < 1:
            raise ValueError(f"stages must be >= 1, got {self.stages}")
        if len(self.a) < 2:
            raise ValueError(f"method {self.name} needs at least a0 and a1")
        if self.a[-1] != 1:
            raise ValueError(f"method {self.name} must be normalized so that a_k = 1")

    @property
    def half_steps(self) -> int:
        return len(self.a) - 1

    @property
    def steps(self) -> int:
        return 2 * self.half_steps

    @property
    def frequency_dependent(self) -> bool:
        return bool(self.b_provider.frequency_dependent)

    @cached_property
    def _a_values(self) -> tuple[float, ...]:
        return tuple(float(item) for item in self.a)

    def a_float(self) -> tuple[float, ...]:
        return self._a_values

    def b_at(self, v: float) -> tuple[float, ...]:
        values = self.b_provider.coefficients(v)
        if len(values) != len(self.a):
            raise ValueError(
                f"method {self.name}: provider returned {len(values)} b-coefficients, expected {len(self.a)}"
            )
        return values


def symmetric_sum(values: Sequence[float | Fraction]) -> float | Fraction:
    """Return c0 + 2*(c1 + ... + ck) for a symmetric coefficient list."""
    return values[0] + 2 * sum(values[1:])
