"""One-dimensional grid search with golden-section refinement."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import NumericError, UsageError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class GridSpec:
    """A 1-d grid ``[lo, hi]`` with ``points`` samples, endpoints included."""

    lo: float = 1e-3
    hi: float = 1e3
    points: int = 201
    scale: str = "log"

    def __post_init__(self):
        if self.scale not in ("log", "linear"):
            raise UsageError(f"grid scale must be 'log' or 'linear', got {self.scale!r}")
        if not self.hi > self.lo:
            raise UsageError("grid needs hi > lo")
        if self.points < 2:
            raise UsageError("grid needs at least 2 points")
        if self.scale == "log" and self.lo <= 0:
            raise UsageError("log grid needs lo > 0")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            v = np.geomspace(self.lo, self.hi, self.points)
        else:
            v = np.linspace(self.lo, self.hi, self.points)
        v[0], v[-1] = self.lo, self.hi
        return v

    @classmethod
    def parse(cls, text: str, scale: str = "log") -> "GridSpec":
        """Parse ``lo:hi:N``."""
        try:
            lo, hi, n = text.split(":")
            return cls(float(lo), float(hi), int(n), scale)
        except ValueError as exc:
            raise UsageError(f"bad grid {text!r}, expected lo:hi:N") from exc


@dataclass(frozen=True)
class LambdaScan:
    samples: tuple[tuple[float, float], ...]
    argmax: tuple[float, float]
    refined: bool


def golden_section_max(fn: Callable[[float], float], lo: float, hi: float, rel_tol: float = 1e-6,
                       max_iter: int = 500) -> tuple[float, float]:
    """Maximize a unimodal ``fn`` on ``[lo, hi]``.

    Stops once the bracket is narrower than ``rel_tol * x`` at the current
    best point. Returns ``(x, fn(x))`` for the best point evaluated.
    """
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = fn(c), fn(d)
    best = (c, fc) if fc >= fd else (d, fd)
    for _ in range(max_iter):
        if b - a <= rel_tol * max(abs(best[0]), 1e-300):
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = fn(c)
            if fc > best[1]:
                best = (c, fc)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = fn(d)
            if fd > best[1]:
                best = (d, fd)
    return best


def _checked(fn: Callable[[float], float]) -> Callable[[float], float]:
    def wrapped(x: float) -> float:
        y = float(fn(x))
        if not math.isfinite(y):
            raise NumericError(f"non-finite value {y!r} at lambda = {float(x)!r}")
        return y
    return wrapped


def scan_lambda(fn: Callable[[float], float], grid: GridSpec | Sequence[float],
                refine: bool = True) -> LambdaScan:
    """Evaluate ``fn`` on a grid, then golden-section refine around the best sample.

    The refinement bracket is the pair of grid neighbours of the grid
    argmax. The refined point replaces the grid argmax only if it is
    strictly better, so the reported maximum dominates every sample.
    """
    xs = grid.values() if isinstance(grid, GridSpec) else np.asarray(sorted(set(map(float, grid))))
    if xs.size == 0:
        raise UsageError("empty lambda grid")
    f = _checked(fn)
    ys = [f(x) for x in xs]
    k = int(np.argmax(ys))
    best = (float(xs[k]), ys[k])
    refined = False
    if refine and xs.size >= 2:
        lo = xs[max(k - 1, 0)]
        hi = xs[min(k + 1, xs.size - 1)]
        x, y = golden_section_max(f, float(lo), float(hi))
        if y > best[1]:
            best = (x, y)
            refined = True
    return LambdaScan(tuple(zip(map(float, xs), ys)), best, refined)
