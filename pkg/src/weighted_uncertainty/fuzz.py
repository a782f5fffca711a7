"""Seeded fuzzing of every relation on random instances.

Trial ``k`` of a run with root seed ``s`` draws all of its randomness from
``SeedSequence((s, k))``, so a failure is reproduced by re-running that
single trial (``--start k --trials 1``). Each check returns a violation
measure (0 when the relation holds exactly) or ``None`` when the trial
does not meet the relation's hypotheses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import multi_bounds as mb
from . import pair_bounds as pb
from .errors import PreconditionError, UsageError
from .sampling import log_uniform, random_perp, rng_for
from .search import GridSpec
from .states import Observable, PureState, variance

INEQUALITY_TOL = 1e-9
DOMINANCE_TOL = 1e-12
LAMBDA_RANGE = (1e-3, 1e3)


@dataclass
class Trial:
    """Everything one fuzz trial needs, drawn from one random stream."""

    index: int
    dim: int
    a: Observable
    b: Observable
    psi: PureState
    lam: float
    lam1: float
    lam2: float
    x: float
    y: float
    perps: list
    multi: mb.MultiInstance
    pair: tuple
    multi_perp: PureState


def _gaussian_hermitian(rng, d, name):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return Observable((g + g.conj().T) / 2, name)


def _haar_state(rng, d):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(v / np.linalg.norm(v))


def make_trial(seed: int, index: int, dim_max: int = 8, n_max: int = 6) -> Trial:
    rng = rng_for((seed, index))
    d = int(rng.integers(2, dim_max + 1))
    a, b = _gaussian_hermitian(rng, d, "A"), _gaussian_hermitian(rng, d, "B")
    psi = _haar_state(rng, d)
    lam = log_uniform(rng, *LAMBDA_RANGE)
    lam1 = log_uniform(rng, 1.0 + 1e-6, LAMBDA_RANGE[1])
    lam2 = log_uniform(rng, LAMBDA_RANGE[0], 1.0 - 1e-6)
    x, y = log_uniform(rng, 1e-2, 1e2), log_uniform(rng, 1e-2, 1e2)
    perps = [random_perp(psi, rng) for _ in range(3)]

    n = int(rng.integers(2, n_max + 1))
    dm = int(rng.integers(2, dim_max + 1))
    obs = tuple(_gaussian_hermitian(rng, dm, f"A{i + 1}") for i in range(n))
    mpsi = _haar_state(rng, dm)
    weights = tuple(log_uniform(rng, *LAMBDA_RANGE) for _ in range(n))
    i, j = sorted(rng.choice(n, size=2, replace=False).tolist())
    return Trial(index, d, a, b, psi, lam, lam1, lam2, x, y, perps,
                 mb.MultiInstance(obs, mpsi, weights), (i, j), random_perp(mpsi, rng))


def _neg(slack: float) -> float:
    return max(0.0, -slack)


def _amended_hr(t: Trial):
    try:
        return _neg(pb.amended_hr(t.a, t.b, t.psi, t.perps[0]).slack)
    except PreconditionError:
        return None


def _dominance(t: Trial):
    mp2 = pb.mp2(t.a, t.b, t.psi).bound
    return max(0.0, mp2 - 0.5 * pb.l2(t.a, t.b, t.psi, 1.0, t.perps[0]).bound)


def _consistency(t: Trial):
    u = t.perps[0]
    l1_one = pb.l1(t.a, t.b, t.psi, 1.0, u, u).bound
    mp1 = pb.mp1(t.a, t.b, t.psi, u).bound
    mp2 = pb.mp2(t.a, t.b, t.psi).bound
    half_var = 0.5 * variance(t.a.matrix + t.b.matrix, t.psi)
    return max(abs(l1_one - 2.0 * mp1), abs(mp2 - half_var))


def _saturation_l1(t: Trial):
    p1, p2 = pb.l1_saturating_perps(t.a, t.b, t.psi, t.lam)
    return abs(pb.l1(t.a, t.b, t.psi, t.lam, p1, p2).slack)


def _saturation_l2(t: Trial):
    p = pb.l2_saturating_perp(t.a, t.b, t.psi, t.lam)
    return abs(pb.l2(t.a, t.b, t.psi, t.lam, p).slack)


def _theorem7(t: Trial):
    return _neg(mb.theorem7(t.multi, t.multi_perp, t.multi_perp).slack)


FUZZ_GRID = GridSpec(1e-3, 1e3, 13)


@dataclass(frozen=True)
class Relation:
    name: str
    check: Callable[[Trial], float | None]
    tol: float = INEQUALITY_TOL
    kind: str = "inequality"


RELATIONS: dict[str, Relation] = {r.name: r for r in [
    Relation("robertson", lambda t: _neg(pb.robertson(t.a, t.b, t.psi).slack)),
    Relation("schrodinger", lambda t: _neg(pb.schrodinger(t.a, t.b, t.psi).slack)),
    Relation("mp1", lambda t: _neg(pb.mp1(t.a, t.b, t.psi, t.perps[0]).slack)),
    Relation("mp2", lambda t: _neg(pb.mp2(t.a, t.b, t.psi).slack)),
    Relation("amended_hr", _amended_hr),
    Relation("l1", lambda t: _neg(pb.l1(t.a, t.b, t.psi, t.lam, t.perps[0], t.perps[1]).slack)),
    Relation("l2", lambda t: _neg(pb.l2(t.a, t.b, t.psi, t.lam, t.perps[2]).slack)),
    Relation("theorem3", lambda t: _neg(pb.theorem3(t.a, t.b, t.psi, t.lam, *t.perps).slack)),
    Relation("derived_sum_L1", lambda t: _neg(pb.derived_sum_bound(
        t.a, t.b, t.psi, t.lam1, t.lam2, k=1, perp1=t.perps[0], perp2=t.perps[1]).slack)),
    Relation("derived_sum_L2", lambda t: _neg(pb.derived_sum_bound(
        t.a, t.b, t.psi, t.lam1, t.lam2, k=2, perp=t.perps[2]).slack)),
    Relation("derived_sum_saturating", lambda t: _neg(pb.derived_sum_bound(
        t.a, t.b, t.psi, t.lam1, t.lam2, k=2).slack)),
    Relation("derived_sum_limit", lambda t: _neg(pb.derived_sum_bound(
        t.a, t.b, t.psi, 1.0, 1.0, k=2, perp=t.perps[2]).slack)),
    Relation("corollary1", lambda t: _neg(pb.corollary1(t.a, t.b, t.psi, t.perps[2], FUZZ_GRID).slack)),
    Relation("theorem4", lambda t: _neg(pb.theorem4(t.a, t.b, t.psi, t.x, t.y, t.perps[2]).slack)),
    Relation("lemma1", lambda t: _neg(mb.lemma1(t.multi).slack)),
    Relation("l0", lambda t: _neg(mb.l0(t.multi, t.multi_perp).slack)),
    Relation("lij", lambda t: _neg(mb.lij(t.multi, t.pair, t.multi_perp).slack)),
    Relation("theorem7", _theorem7),
    Relation("parallelogram", lambda t: pb.parallelogram_residual(
        t.a, t.b, t.psi, t.lam, complex(np.exp(1j * 2 * math.pi * (t.index % 97) / 97))), kind="identity"),
    Relation("multi_parallelogram", lambda t: mb.multi_parallelogram_residual(t.multi), kind="identity"),
    Relation("saturation_l1", _saturation_l1, kind="equality"),
    Relation("saturation_l2", _saturation_l2, kind="equality"),
    Relation("dominance", _dominance, tol=DOMINANCE_TOL),
    Relation("consistency", _consistency, kind="identity"),
]}


@dataclass
class Tally:
    checked: int = 0
    skipped: int = 0
    max_violation: float = 0.0
    failures: list = field(default_factory=list)


@dataclass
class FuzzResult:
    seed: int
    trials: int
    start: int
    tallies: dict[str, Tally]

    @property
    def ok(self) -> bool:
        return all(not t.failures for t in self.tallies.values())

    def summary(self) -> str:
        lines = [f"fuzz seed={self.seed} start={self.start} trials={self.trials}"]
        for name, t in self.tallies.items():
            status = "ok" if not t.failures else "FAIL"
            line = (f"{name:24s} checked={t.checked:<6d} skipped={t.skipped:<6d} "
                    f"max_violation={t.max_violation:.3e} {status}")
            if t.failures:
                idx, val = t.failures[0]
                line += f" first_failure=seed:{self.seed},trial:{idx},violation:{val:.3e}"
            lines.append(line)
        lines.append("result: " + ("PASS" if self.ok else "FAIL"))
        return "\n".join(lines)


def run(trials: int, seed: int = 0, dim_max: int = 8, n_max: int = 6,
        relations: list[str] | None = None, start: int = 0) -> FuzzResult:
    """Run the selected relations on ``trials`` random instances."""
    if trials < 1:
        raise UsageError("trials must be >= 1")
    if dim_max < 2 or n_max < 2:
        raise UsageError("dim-max and n-max must be >= 2")
    names = list(RELATIONS) if not relations or relations == ["all"] else relations
    unknown = [n for n in names if n not in RELATIONS]
    if unknown:
        raise UsageError(f"unknown relation(s) {unknown}; choose from {sorted(RELATIONS)}")
    tallies = {n: Tally() for n in names}
    for k in range(start, start + trials):
        trial = make_trial(seed, k, dim_max, n_max)
        for name in names:
            rel, tally = RELATIONS[name], tallies[name]
            v = rel.check(trial)
            if v is None:
                tally.skipped += 1
                continue
            tally.checked += 1
            tally.max_violation = max(tally.max_violation, v)
            if v > rel.tol:
                tally.failures.append((k, v))
    return FuzzResult(seed, trials, start, tallies)
