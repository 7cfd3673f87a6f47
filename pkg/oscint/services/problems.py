from __future__ import annotations

"""Benchmark IVPs with oscillating solutions, the Woods-Saxon well and phase-shift extraction."""

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateSample, DomainError
from .integrator import IvpProblem, Trajectory

LONG_INTERVAL = 1000.0 * math.pi
FRANCO_EPSILON = 0.001
FRANCO_PSI = 0.01
DUFFING_FORCING = 0.002
DUFFING_DRIVE = 1.01
# Truncated cosine series used as the Duffing reference: (amplitude, multiple of the drive).
DUFFING_SERIES = (
    (0.200179477536, 1),
    (2.46946143e-4, 3),
    (3.04014e-7, 5),
    (3.74e-10, 7),
)
DUFFING_Y0 = 0.200426728067
SCHRODINGER_INTERVAL = (0.0, 15.0)
FREQUENCY_SWITCH_X = 6.5
ASYMPTOTIC_START = 10.0
PHASE_SHIFT_SAMPLE_X = 14.0
DEGENERATE_SAMPLE_RATIO = 1e-12
RESONANCE_ENERGIES = (989.701916, 341.495874, 163.215341)


@dataclass(frozen=True)
class WoodsSaxonParams:
    u0: float = -50.0
    a: float = 0.6
    x0: float = 7.0

    @property
    def u1(self) -> float:
        return -self.u0 / self.a


DEFAULT_WOODS_SAXON = WoodsSaxonParams()


@dataclass(frozen=True)
class ResonanceCase:
    energy: float
    l: int = 0

    def __post_init__(self) -> None:
        if not self.energy > 50.0:
            raise ValueError(f"resonance energy must exceed 50, got {self.energy!r}")
        if self.l != 0:
            raise ValueError("only l = 0 scattering is supported")

    @property
    def k(self) -> float:
        return math.sqrt(self.energy)


@dataclass(frozen=True)
class PhaseShiftResult:
    delta: float
    tan_delta: float
    abs_error: float
    x_i: float
    x_j: float


def _scalar(value: float) -> np.ndarray:
    return np.array([value], dtype=float)


def harmonic_oscillator(omega: float = 1.0, x_end: float = 10.0) -> IvpProblem:
    """y'' = -omega**2 y with y(0) = 1, y'(0) = 0."""
    lam = _scalar(-omega * omega)
    zero = _scalar(0.0)
    return IvpProblem(
        name=f"harmonic-{omega:g}",
        dimension=1,
        rhs=lambda x, y: -omega * omega * y,
        x_start=0.0,
        x_end=x_end,
        y0=[1.0],
        dy0=[0.0],
        frequency=lambda x, y: omega,
        exact_solution=lambda x: _scalar(math.cos(omega * x)),
        linear_coefficients=lambda x: (lam, zero),
        description="scalar test equation",
    )


def franco_palacios(epsilon: float = FRANCO_EPSILON, psi: float = FRANCO_PSI) -> IvpProblem:
    lam = np.array([-1.0, -1.0])
    denom = 1.0 - psi * psi
    cos_amp = (1.0 - epsilon - psi * psi) / denom
    sin_amp = (1.0 - epsilon * psi - psi * psi) / denom
    forced = epsilon / denom

    def forcing(x: float) -> np.ndarray:
        return np.array([epsilon * math.cos(psi * x), epsilon * math.sin(psi * x)])

    def exact(x: float) -> np.ndarray:
        return np.array(
            [
                cos_amp * math.cos(x) + forced * math.cos(psi * x),
                sin_amp * math.sin(x) + forced * math.sin(psi * x),
            ]
        )

    return IvpProblem(
        name="franco-palacios",
        dimension=2,
        rhs=lambda x, y: -y + forcing(x),
        x_start=0.0,
        x_end=LONG_INTERVAL,
        y0=[1.0, 0.0],
        dy0=[0.0, 1.0],
        frequency=lambda x, y: 1.0,
        exact_solution=exact,
        linear_coefficients=lambda x: (lam, forcing(x)),
        description="almost periodic orbit u'' + u = eps cos(psi x), v'' + v = eps sin(psi x)",
    )


def inhomogeneous() -> IvpProblem:
    lam = _scalar(-100.0)
    return IvpProblem(
        name="inhomogeneous",
        dimension=1,
        rhs=lambda x, y: -100.0 * y + 99.0 * math.sin(x),
        x_start=0.0,
        x_end=LONG_INTERVAL,
        y0=[1.0],
        dy0=[11.0],
        frequency=lambda x, y: 10.0,
        exact_solution=lambda x: _scalar(math.sin(x) + math.sin(10.0 * x) + math.cos(10.0 * x)),
        linear_coefficients=lambda x: (lam, _scalar(99.0 * math.sin(x))),
        description="y'' = -100 y + 99 sin x",
    )


def _two_body_rhs(x: float, y: np.ndarray) -> np.ndarray:
    r2 = float(y[0] * y[0] + y[1] * y[1])
    return -y / (r2 * math.sqrt(r2))


def _two_body_frequency(x: float, y: np.ndarray) -> float:
    r2 = float(y[0] * y[0] + y[1] * y[1])
    return r2 ** (-0.75)


def two_body() -> IvpProblem:
    return IvpProblem(
        name="two-body",
        dimension=2,
        rhs=_two_body_rhs,
        x_start=0.0,
        x_end=LONG_INTERVAL,
        y0=[1.0, 0.0],
        dy0=[0.0, 1.0],
        frequency=_two_body_frequency,
        exact_solution=lambda x: np.array([math.cos(x), math.sin(x)]),
        description="circular Kepler orbit, omega estimated as (y^2 + z^2)^(-3/4)",
    )


def duffing_reference(x: float) -> np.ndarray:
    return _scalar(math.fsum(amp * math.cos(mult * DUFFING_DRIVE * x) for amp, mult in DUFFING_SERIES))


def duffing() -> IvpProblem:
    return IvpProblem(
        name="duffing",
        dimension=1,
        rhs=lambda x, y: -y - y**3 + DUFFING_FORCING * math.cos(DUFFING_DRIVE * x),
        x_start=0.0,
        x_end=LONG_INTERVAL,
        y0=[DUFFING_Y0],
        dy0=[0.0],
        frequency=lambda x, y: 1.0,
        exact_solution=duffing_reference,
        description="forced undamped Duffing equation; reference is a truncated cosine series",
    )


def woods_saxon(x: float, params: WoodsSaxonParams = DEFAULT_WOODS_SAXON) -> float:
    t = (x - params.x0) / params.a
    if t > 0.0:
        # Rewrite in exp(-t) so large x decays to zero instead of overflowing.
        e = math.exp(-t)
        return params.u0 * e / (1.0 + e) + params.u1 * e / (1.0 + e) ** 2
    q = math.exp(t)
    return params.u0 / (1.0 + q) + params.u1 * q / (1.0 + q) ** 2


def resonance_frequency(x: float, case: ResonanceCase) -> float:
    """Two-zone frequency estimate; x <= 6.5 belongs to the inner zone."""
    if x <= FREQUENCY_SWITCH_X:
        return math.sqrt(case.energy - 50.0)
    return math.sqrt(case.energy)


def schrodinger_problem(
    case: ResonanceCase,
    params: WoodsSaxonParams = DEFAULT_WOODS_SAXON,
) -> IvpProblem:
    zero = _scalar(0.0)

    def lam(x: float) -> np.ndarray:
        return _scalar(woods_saxon(x, params) - case.energy)

    return IvpProblem(
        name=f"schrodinger-{case.energy:g}",
        dimension=1,
        rhs=lambda x, y: (woods_saxon(x, params) - case.energy) * y,
        x_start=SCHRODINGER_INTERVAL[0],
        x_end=SCHRODINGER_INTERVAL[1],
        y0=[0.0],
        dy0=[1.0],
        frequency=lambda x, y: resonance_frequency(x, case),
        linear_coefficients=lambda x: (lam(x), zero),
        scale_start_to_step=True,
        description=f"radial Schrodinger equation, l=0, Woods-Saxon well, E={case.energy}",
    )


def phase_shift(traj: Trajectory, case: ResonanceCase, i: int, j: int) -> PhaseShiftResult:
    """Phase shift from two asymptotic samples, with S = sin(kx) and C = cos(kx)."""
    if not 0 <= i < j < len(traj.xs):
        raise DomainError(f"sample indices must satisfy 0 <= i < j < {len(traj.xs)}, got {i}, {j}")
    x_i = float(traj.xs[i])
    x_j = float(traj.xs[j])
    if x_i < ASYMPTOTIC_START:
        raise DomainError(f"x_i = {x_i:.6g} is outside the asymptotic region x >= {ASYMPTOTIC_START}")
    k = case.k
    y_i = float(traj.ys[i][0])
    y_j = float(traj.ys[j][0])
    s_i, s_j = math.sin(k * x_i), math.sin(k * x_j)
    c_i, c_j = math.cos(k * x_i), math.cos(k * x_j)
    numerator = y_i * s_j - y_j * s_i
    denominator = y_j * c_i - y_i * c_j
    scale = abs(y_i * s_j) + abs(y_j * s_i) + abs(y_j * c_i) + abs(y_i * c_j)
    if math.hypot(numerator, denominator) <= DEGENERATE_SAMPLE_RATIO * scale:
        raise DegenerateSample(
            f"samples x={x_i:.6g} and x={x_j:.6g} are nearly k-resonant (k={k:.6g}); choose another pair"
        )
    delta = math.atan2(numerator, denominator)
    if delta > math.pi / 2:
        delta -= math.pi
    elif delta <= -math.pi / 2:
        delta += math.pi
    tan_delta = numerator / denominator if denominator != 0.0 else math.copysign(math.inf, numerator)
    abs_error = math.atan2(abs(denominator), abs(numerator))
    return PhaseShiftResult(delta=delta, tan_delta=tan_delta, abs_error=abs_error, x_i=x_i, x_j=x_j)


def resonance_phase_shift(
    traj: Trajectory,
    case: ResonanceCase,
    sample_x: float = PHASE_SHIFT_SAMPLE_X,
) -> PhaseShiftResult:
    """Phase shift from the grid point nearest `sample_x` and the final grid point."""
    i = int(np.argmin(np.abs(traj.xs - sample_x)))
    return phase_shift(traj, case, i, len(traj.xs) - 1)
