"""Seeded random instances and the spin-1 fixture.

Random draws use numpy's PCG64 bit generator seeded through
``SeedSequence``; an integer seed (or a sequence of integers, e.g.
``(root_seed, trial_index)``) always reproduces the same stream. There is
no module-level random state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import UsageError
from .states import Observable, PureState

SeedLike = Union[int, Sequence[int], np.random.Generator]


def rng_for(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_state(dim: int, seed: SeedLike) -> PureState:
    """Haar-random pure state: normalized vector of complex Gaussians."""
    if dim < 2:
        raise UsageError("dimension must be at least 2")
    v = _complex_gaussian(rng_for(seed), dim)
    return PureState(v / np.linalg.norm(v))


def random_hermitian(dim: int, seed: SeedLike, name: str = "H") -> Observable:
    """GUE-style observable ``(G + G^dagger) / 2``."""
    if dim < 2:
        raise UsageError("dimension must be at least 2")
    g = _complex_gaussian(rng_for(seed), (dim, dim))
    return Observable((g + g.conj().T) / 2, name)


def random_perp(psi: PureState, seed: SeedLike) -> PureState:
    """A random unit vector orthogonal to ``psi``."""
    rng = rng_for(seed)
    v = psi.amplitudes
    while True:
        w = _complex_gaussian(rng, v.shape[0])
        w = w - np.vdot(v, w) * v
        n = np.linalg.norm(w)
        if n > 1e-6:
            w = w / n
            # one more projection removes rounding drift
            w = w - np.vdot(v, w) * v
            return PureState(w / np.linalg.norm(w), norm_tol=1e-9)


def log_uniform(rng: np.random.Generator, lo: float, hi: float) -> float:
    return float(math.exp(rng.uniform(math.log(lo), math.log(hi))))


SQRT_HALF = 1.0 / math.sqrt(2.0)

JX = Observable(SQRT_HALF * np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex), "Jx")
JY = Observable(SQRT_HALF * np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]], dtype=complex), "Jy")
JZ = Observable(np.diag([1.0, 0.0, -1.0]).astype(complex), "Jz")

SIGMA_X = Observable(np.array([[0, 1], [1, 0]], dtype=complex), "sx")
SIGMA_Y = Observable(np.array([[0, -1j], [1j, 0]], dtype=complex), "sy")
SIGMA_Z = Observable(np.array([[1, 0], [0, -1]], dtype=complex), "sz")


def spin1_state(theta: float) -> PureState:
    """``cos(theta/2)|0> + sin(theta/2)|2>``."""
    return PureState([math.cos(theta / 2), 0.0, math.sin(theta / 2)])


@dataclass(frozen=True, eq=False)
class Spin1Fixture:
    theta: float
    jx: Observable
    jy: Observable
    jz: Observable
    psi: PureState

    def closed_form(self) -> dict[str, float]:
        """Closed-form variances on this state, keyed by observable."""
        s = math.sin(self.theta)
        return {
            "Jx": 0.5 * (1 + s),
            "Jy": 0.5 * (1 - s),
            "Jz": s * s,
            "Jx+Jy": 1.0,
            "Jy+Jz": 0.5 * (1 - s) + s * s,
            "Jx+Jz": 0.5 * (1 + s) + s * s,
            "Jx+Jy+Jz": 1 + s * s,
        }


def spin1(theta: float) -> Spin1Fixture:
    if not 0.0 <= theta < 2 * math.pi:
        raise UsageError(f"theta must lie in [0, 2pi), got {theta!r}")
    return Spin1Fixture(float(theta), JX, JY, JZ, spin1_state(theta))
