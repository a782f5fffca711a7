"""Data behind the spin-1 comparison figures.

Figures 1 and 2 compare the variance sum, half the weighted bound at
``lam = 1`` and the Maccone-Pati bound ``L_MP2`` over ``theta`` for the
pairs (Jx, Jy) and (Jy, Jz). Figure 3 is the error function ``f(lam)``
and ``L2(lam)`` for (Jy, Jz) at fixed ``theta``. The orthogonal state is
``|1>`` throughout.
"""

from __future__ import annotations

import csv
import math
from typing import IO

import numpy as np

from .errors import NumericError, UsageError
from .pair_bounds import l2, mp2
from .sampling import JX, JY, JZ, spin1
from .search import GridSpec
from .states import PureState, variance

KET_ONE = PureState.basis(3, 1)
FIGURE_PAIRS = {1: (JX, JY), 2: (JY, JZ)}
THETA_COLUMNS = ("theta", "sum_var", "half_L2", "L_MP2")
LAMBDA_COLUMNS = ("lambda", "f_lambda", "L2")


def theta_grid(steps: int) -> np.ndarray:
    if steps < 1:
        raise UsageError("theta-steps must be >= 1")
    return 2.0 * math.pi * np.arange(steps) / steps


def theta_sweep(figure: int, steps: int = 400) -> list[tuple[float, ...]]:
    """Rows ``(theta, sum_var, half_L2, L_MP2)`` for theta on ``[0, 2pi)``."""
    if figure not in FIGURE_PAIRS:
        raise UsageError(f"theta sweeps exist for figures 1 and 2, not {figure!r}")
    a, b = FIGURE_PAIRS[figure]
    rows = []
    for theta in theta_grid(steps):
        psi = spin1(theta).psi
        rows.append((
            float(theta),
            variance(a, psi) + variance(b, psi),
            0.5 * l2(a, b, psi, 1.0, KET_ONE).bound,
            mp2(a, b, psi).bound,
        ))
    return rows


def lambda_sweep(theta: float, grid: GridSpec) -> list[tuple[float, ...]]:
    """Rows ``(lambda, f_lambda, L2)`` for (Jy, Jz) at fixed ``theta``."""
    psi = spin1(theta).psi
    rows = []
    for lam in grid.values():
        r = l2(JY, JZ, psi, float(lam), KET_ONE)
        rows.append((float(lam), r.slack, r.bound))
    return rows


def write_csv(rows, columns, stream: IO[str]) -> None:
    """17 significant digits, fixed column order, LF line endings."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        if not all(math.isfinite(x) for x in row):
            raise NumericError(f"non-finite value in row {row!r}")
        writer.writerow([f"{x:.17g}" for x in row])
