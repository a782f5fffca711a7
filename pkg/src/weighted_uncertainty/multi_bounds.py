"""Sum uncertainty relations for n observables.

All of them rest on the exact identity

    sum_{i,j} (l_i/l_j) dA_i^2 = ||S^ psi||^2
        + sum_{i<j} ||(sqrt(l_i/l_j) A_i^ - sqrt(l_j/l_i) A_j^) psi||^2

with ``S = sum_i A_i``; each bound relaxes some of the right-hand terms by
Cauchy-Schwarz. Pair indices are zero-based ``(i, j)`` with ``i < j``.

Weight ratios of 1e6 push both sides to ~1e7 while their difference stays
O(1), so everything here is evaluated in ``numpy.longdouble`` (80-bit on
x86-64 Linux) and the slack is taken before rounding back to float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import UsageError
from .pair_bounds import PerpArg, _resolve_perp
from .report import BoundReport
from .states import Observable, PerpChoice, PureState, _as_matrix, _as_vector

EXT = np.clongdouble
EXT_REAL = np.longdouble


@dataclass(frozen=True, eq=False)
class MultiInstance:
    observables: tuple
    psi: PureState
    weights: tuple = field(default=())

    def __post_init__(self):
        obs = tuple(self.observables)
        if len(obs) < 2:
            raise UsageError("need at least two observables")
        psi = self.psi if isinstance(self.psi, PureState) else PureState(self.psi)
        dims = {_as_matrix(o).shape[0] for o in obs}
        if dims != {psi.dim}:
            raise UsageError(f"dimension mismatch among observables {sorted(dims)} and state {psi.dim}")
        w = tuple(float(x) for x in self.weights) if self.weights else (1.0,) * len(obs)
        if len(w) != len(obs):
            raise UsageError(f"{len(w)} weights for {len(obs)} observables")
        if any(not (x > 0 and math.isfinite(x)) for x in w):
            raise UsageError("weights must be positive and finite")
        object.__setattr__(self, "observables", obs)
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return len(self.observables)

    def matrices(self) -> list[np.ndarray]:
        return [_as_matrix(o) for o in self.observables]

    def total(self) -> np.ndarray:
        """The sum ``S`` of all observables."""
        return sum(self.matrices())


class _Ext:
    """Extended-precision view of one instance: centered actions and variances."""

    def __init__(self, m: MultiInstance):
        psi = _as_vector(m.psi).astype(EXT)
        self.psi = psi / np.sqrt(np.vdot(psi, psi).real)
        self.mats = [a.astype(EXT) for a in m.matrices()]
        self.weights = [EXT_REAL(w) for w in m.weights]
        self.actions = []
        self.variances = []
        for a in self.mats:
            av = a @ self.psi
            mean = np.vdot(self.psi, av).real
            self.actions.append(av - mean * self.psi)
            self.variances.append(np.vdot(av, av).real - mean * mean)
        self.n = len(self.mats)
        self._vaidman = None
        self._lhs = None
        self._pair_cache = {}

    def coef(self, i, j):
        return np.sqrt(self.weights[i] / self.weights[j])

    def pair_matrix(self, i, j):
        return self.coef(i, j) * self.mats[i] - self.coef(j, i) * self.mats[j]

    def pair_exact(self, i, j):
        key = (i, j)
        if key not in self._pair_cache:
            w = self.coef(i, j) * self.actions[i] - self.coef(j, i) * self.actions[j]
            self._pair_cache[key] = np.vdot(w, w).real
        return self._pair_cache[key]

    def vaidman_sum(self, m: MultiInstance):
        if self._vaidman is None:
            self._vaidman = self.cross(sum(self.mats), PerpChoice.vaidman(m.total()))
        return self._vaidman

    def sum_action(self):
        return sum(self.actions)

    def lhs(self):
        if self._lhs is None:
            inv = sum(1 / w for w in self.weights)
            self._lhs = sum(w * inv * v for w, v in zip(self.weights, self.variances))
        return self._lhs

    def cross(self, m: np.ndarray, perp: PerpArg):
        """``|<psi|M|u>|^2`` for a resolved perp, re-orthonormalized in extended precision.

        ``perp=None`` is the saturating choice, whose value is the squared
        norm of ``M psi`` projected off ``psi``.
        """
        mv = m @ self.psi
        if perp is None:
            w = mv - np.vdot(self.psi, mv) * self.psi
            return np.vdot(w, w).real, False
        u = _resolve_perp(perp, self.psi.astype(np.complex128), m.astype(np.complex128))
        if u is None:
            return EXT_REAL(0), True
        u = u.astype(EXT)
        u = u - np.vdot(self.psi, u) * self.psi
        u = u / np.sqrt(np.vdot(u, u).real)
        return abs(np.vdot(mv, u)) ** 2, False


def _pairs(n: int):
    return combinations(range(n), 2)


def _check_pair(m: MultiInstance, pair) -> tuple[int, int]:
    i, j = (int(k) for k in pair)
    if not 0 <= i < j < m.n:
        raise UsageError(f"pair {tuple(pair)!r} invalid for n={m.n}; need 0 <= i < j < n")
    return i, j


def _report(relation, lhs, terms, flags=(), extra=None) -> BoundReport:
    slack = lhs - sum(v for _, v in terms)
    return BoundReport(relation, float(lhs), tuple((k, float(v)) for k, v in terms), tuple(flags),
                       extra=extra or {}, precise_slack=float(slack))


def weighted_lhs(m: MultiInstance) -> float:
    """``sum_{i,j} (l_i/l_j) dA_i^2``, diagonal terms included."""
    return float(_Ext(m).lhs())


def lemma1(m: MultiInstance) -> BoundReport:
    """``sum_i dA_i^2 >= |<psi|S|u_S>|^2 / n`` with ``u_S`` the Vaidman state of S."""
    e = _Ext(m)
    s = sum(e.mats)
    term, degenerate = e.cross(s, PerpChoice.vaidman(m.total()))
    return _report("lemma1", sum(e.variances), [("vaidman_sum", term / m.n)],
                   ["vaidman_sum"] if degenerate else [])


def _l0(m: MultiInstance, e: _Ext, perp0: PerpArg) -> BoundReport:
    perp0 = PerpChoice.vaidman(m.total()) if perp0 is None else perp0
    first, degenerate = e.cross(sum(e.mats), perp0)
    terms = [("sum", first)] + [(f"pair{i},{j}", e.pair_exact(i, j)) for i, j in _pairs(m.n)]
    return _report("l0", e.lhs(), terms, ["sum"] if degenerate else [])


def l0(m: MultiInstance, perp0: PerpArg = None) -> BoundReport:
    """``|<psi|S|u_0>|^2`` plus every pairwise term evaluated exactly.

    ``perp0=None`` uses the Vaidman state of ``S``.
    """
    return _l0(m, _Ext(m), perp0)


def _lij(m: MultiInstance, e: _Ext, i: int, j: int, perp: PerpArg, mode: str) -> BoundReport:
    flags = []
    vaidman, degenerate = e.vaidman_sum(m)
    if degenerate:
        flags.append("vaidman_sum")
    relaxed, degenerate = e.cross(e.pair_matrix(i, j), perp)
    if degenerate:
        flags.append(f"pair{i},{j}")
    terms = [("vaidman_sum", vaidman), (f"pair{i},{j}", relaxed)]
    for k, l in _pairs(m.n):
        if (k, l) == (i, j) or (mode == "disjoint" and {k, l} & {i, j}):
            continue
        terms.append((f"pair{k},{l}", e.pair_exact(k, l)))
    return _report("lij", e.lhs(), terms, flags, {"pair": [i, j], "mode": mode})


def lij(m: MultiInstance, pair: tuple[int, int], perp: PerpArg = None, mode: str = "others") -> BoundReport:
    """Bound with only the ``(i, j)`` pair relaxed by Cauchy-Schwarz.

    ``mode="others"`` keeps every other pair ``(k, l) != (i, j)`` exactly,
    which makes the bound a rearrangement of the exact identity.
    ``mode="disjoint"`` keeps only pairs sharing no index with ``(i, j)``.
    """
    i, j = _check_pair(m, pair)
    if mode not in ("others", "disjoint"):
        raise UsageError(f"unknown mode {mode!r}")
    return _lij(m, _Ext(m), i, j, perp, mode)


def theorem7(m: MultiInstance, perp0: PerpArg = None, pair_perps: PerpArg | dict = None) -> BoundReport:
    """Maximum of :func:`l0` and every :func:`lij`.

    ``pair_perps`` is one perp argument shared by all pairs or a dict keyed
    by ``(i, j)``; missing entries use the saturating default.
    """
    e = _Ext(m)
    candidates = [("L0", _l0(m, e, perp0))]
    for p in _pairs(m.n):
        perp = pair_perps.get(p) if isinstance(pair_perps, dict) else pair_perps
        candidates.append((f"L{p[0]},{p[1]}", _lij(m, e, p[0], p[1], perp, "others")))
    branch, win = max(candidates, key=lambda c: c[1].bound)
    return BoundReport("theorem7", win.lhs, win.terms, win.degenerate_flags, precise_slack=win.precise_slack,
                       extra={"branch": branch, "candidates": {k: r.bound for k, r in candidates}})


def multi_parallelogram_residual(m: MultiInstance) -> float:
    """Absolute residual of the weighted multi-observable identity."""
    e = _Ext(m)
    sh = e.sum_action()
    rhs = np.vdot(sh, sh).real + sum(e.pair_exact(i, j) for i, j in _pairs(m.n))
    return float(abs(e.lhs() - rhs))


def from_observables(observables: Sequence[Observable], psi, weights: Sequence[float] = ()) -> MultiInstance:
    return MultiInstance(tuple(observables), psi, tuple(weights))
