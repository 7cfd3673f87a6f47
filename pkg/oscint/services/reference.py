from __future__ import annotations

"""High-order one-step integrator used to produce multistep starting values."""

from functools import lru_cache
from typing import Callable

import numpy as np

from ..errors import CorrectorDiverged

GAUSS_STAGES = 5  # collocation order 2*s = 10
STAGE_TOLERANCE = 1e-15
MAX_STAGE_ITERATIONS = 60
DEFAULT_SUBSTEPS = 100

Rhs = Callable[[float, np.ndarray], np.ndarray]


@lru_cache(maxsize=None)
def gauss_legendre_tableau(stages: int = GAUSS_STAGES) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Butcher tableau (A, b, c) of the s-stage Gauss-Legendre collocation method."""
    nodes, weights = np.polynomial.legendre.leggauss(stages)
    c = 0.5 * (nodes + 1.0)
    b = 0.5 * weights
    a = np.empty((stages, stages))
    for j in range(stages):
        others = np.delete(c, j)
        basis = np.polynomial.Polynomial.fromroots(others) / np.prod(c[j] - others)
        primitive = basis.integ()
        a[:, j] = primitive(c) - primitive(0.0)
    a.setflags(write=False)
    b.setflags(write=False)
    c.setflags(write=False)
    return a, b, c


def gauss_legendre_step(
    rhs: Rhs,
    x: float,
    y: np.ndarray,
    dy: np.ndarray,
    h: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Advance y'' = rhs(x, y) by one step on the first-order system (y, y')."""
    a, b, c = gauss_legendre_tableau()
    f0 = np.asarray(rhs(x, y), dtype=float)
    stage_f = np.tile(f0, (len(c), 1))
    for _ in range(MAX_STAGE_ITERATIONS):
        stage_dy = dy + h * (a @ stage_f)
        stage_y = y + h * (a @ stage_dy)
        updated = np.array([rhs(x + ci * h, yi) for ci, yi in zip(c, stage_y)], dtype=float)
        change = float(np.max(np.abs(updated - stage_f)))
        scale = max(float(np.max(np.abs(updated))), np.finfo(float).tiny)
        stage_f = updated
        if change <= STAGE_TOLERANCE * scale:
            break
    else:
        raise CorrectorDiverged(f"Gauss-Legendre stages did not converge at x={x!r}, h={h!r}")
    stage_dy = dy + h * (a @ stage_f)
    return y + h * (b @ stage_dy), dy + h * (b @ stage_f)


def reference_start(
    rhs: Rhs,
    x0: float,
    y0: np.ndarray,
    dy0: np.ndarray,
    h: float,
    count: int,
    substeps: int = DEFAULT_SUBSTEPS,
) -> list[np.ndarray]:
    """Return y at x0 + i*h for i = 0..count-1; derivative values are discarded."""
    y = np.array(y0, dtype=float)
    dy = np.array(dy0, dtype=float)
    values = [y.copy()]
    small = h / substeps
    for interval in range(1, count):
        base = x0 + (interval - 1) * h
        for sub in range(substeps):
            y, dy = gauss_legendre_step(rhs, base + sub * small, y, dy, small)
        values.append(y.copy())
    return values
