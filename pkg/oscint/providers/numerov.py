from __future__ import annotations

from fractions import Fraction

from .base import ConstantB, MethodSpec

# y_{n+1} - 2 y_n + y_{n-1} = h**2 (f_{n+1} + 10 f_n + f_{n-1}) / 12
NUMEROV_A = (Fraction(-2), Fraction(1))
NUMEROV_B = (Fraction(10, 12), Fraction(1, 12))


def numerov_method() -> MethodSpec:
    return MethodSpec(
        name="numerov",
        a=NUMEROV_A,
        b_provider=ConstantB(NUMEROV_B),
        stages=1,
        description="Classical two-step Numerov method, algebraic order 4",
    )
