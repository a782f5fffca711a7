import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weighted_uncertainty import multi_bounds as mb
from weighted_uncertainty import pair_bounds as pb
from weighted_uncertainty.errors import UsageError
from weighted_uncertainty.sampling import JX, JY, JZ, spin1
from weighted_uncertainty.states import Degenerate, PureState

from conftest import o_cross, o_hat, o_herm, o_perp, o_state, o_var

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def draw(seed, n=None, d=None, spread=1e3):
    rng = np.random.default_rng(seed)
    n = n or int(rng.integers(2, 7))
    d = d or int(rng.integers(2, 9))
    obs = [o_herm(rng, d) for _ in range(n)]
    psi = o_state(rng, d)
    w = np.exp(rng.uniform(-np.log(spread), np.log(spread), n))
    return rng, obs, psi, w


def o_weighted_lhs(obs, psi, w):
    return sum(w[i] / w[j] * o_var(obs[i], psi) for i in range(len(obs)) for j in range(len(obs)))


def o_pair(obs, psi, w, i, j):
    v = math.sqrt(w[i] / w[j]) * o_hat(obs[i], psi) - math.sqrt(w[j] / w[i]) * o_hat(obs[j], psi)
    return np.vdot(v, v).real


def o_pair_matrix(obs, w, i, j):
    return math.sqrt(w[i] / w[j]) * obs[i] - math.sqrt(w[j] / w[i]) * obs[j]


def rel(x, y):
    return abs(x - y) / max(1.0, abs(x), abs(y))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_l0_matches_oracle(seed):
    rng, obs, psi, w = draw(seed)
    m = mb.MultiInstance(tuple(obs), psi, tuple(w))
    u = o_perp(rng, psi)
    r = mb.l0(m, PureState(u))
    s = sum(obs)
    expect = o_cross(s, psi, u) + sum(o_pair(obs, psi, w, i, j) for i, j in combinations(range(len(obs)), 2))
    assert rel(r.lhs, o_weighted_lhs(obs, psi, w)) < 1e-10
    assert rel(r.bound, expect) < 1e-10
    assert r.slack >= -1e-9


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_lij_matches_oracle(seed):
    rng, obs, psi, w = draw(seed)
    n = len(obs)
    m = mb.MultiInstance(tuple(obs), psi, tuple(w))
    u = o_perp(rng, psi)
    i, j = sorted(rng.choice(n, 2, replace=False))
    for mode in ("others", "disjoint"):
        r = mb.lij(m, (i, j), PureState(u), mode)
        kept = [(k, l) for k, l in combinations(range(n), 2)
                if (k, l) != (i, j) and (mode == "others" or not {k, l} & {i, j})]
        expect = (o_var(sum(obs), psi) + o_cross(o_pair_matrix(obs, w, i, j), psi, u)
                  + sum(o_pair(obs, psi, w, k, l) for k, l in kept))
        assert rel(r.bound, expect) < 1e-10
        assert r.slack >= -1e-9


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_theorem7_is_max_of_candidates(seed):
    rng, obs, psi, w = draw(seed)
    m = mb.MultiInstance(tuple(obs), psi, tuple(w))
    u = PureState(o_perp(rng, psi))
    r = mb.theorem7(m, u, u)
    bounds = [mb.l0(m, u).bound] + [mb.lij(m, p, u).bound for p in combinations(range(m.n), 2)]
    assert r.bound == max(bounds)
    assert r.slack >= -1e-9
    assert set(r.extra["candidates"]) == {"L0"} | {f"L{i},{j}" for i, j in combinations(range(m.n), 2)}


def test_theorem7_per_pair_perps():
    psi = spin1(1.0).psi
    m = mb.MultiInstance((JX, JY, JZ), psi)
    r = mb.theorem7(m, None, {(0, 1): PureState.basis(3, 1)})
    assert r.slack >= -1e-12


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_lemma1_is_convexity(seed):
    _, obs, psi, _ = draw(seed)
    r = mb.lemma1(mb.MultiInstance(tuple(obs), psi))
    assert rel(r.bound, o_var(sum(obs), psi) / len(obs)) < 1e-10
    assert rel(r.lhs, sum(o_var(a, psi) for a in obs)) < 1e-12
    assert r.slack >= -1e-9


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_multi_identity_with_extreme_weights(seed):
    _, obs, psi, w = draw(seed, spread=1e3)
    m = mb.MultiInstance(tuple(obs), psi, tuple(w))
    assert mb.multi_parallelogram_residual(m) <= 1e-9


def test_saturating_pairs_make_l0_exact():
    """With every pair exact, L0 with the Vaidman state of S is the identity itself."""
    rng, obs, psi, w = draw(7, n=4, d=5)
    m = mb.MultiInstance(tuple(obs), psi, tuple(w))
    assert abs(mb.l0(m).slack) <= 1e-9
    assert abs(mb.lij(m, (1, 3)).slack) <= 1e-9


def test_spin1_all_ones():
    m = mb.from_observables([JX, JY, JZ], spin1(0.0).psi)
    # variances 1/2, 1/2, 0 with unit weights give 3 * 1
    assert abs(mb.weighted_lhs(m) - 3.0) < 1e-12


@pytest.mark.parametrize("kwargs", [
    dict(observables=(JX,), psi=spin1(0.0).psi),
    dict(observables=(JX, JY), psi=spin1(0.0).psi, weights=(1.0,)),
    dict(observables=(JX, JY), psi=spin1(0.0).psi, weights=(1.0, -2.0)),
    dict(observables=(JX, np.eye(2)), psi=spin1(0.0).psi),
])
def test_instance_validation(kwargs):
    with pytest.raises(UsageError):
        mb.MultiInstance(**kwargs)


@pytest.mark.parametrize("pair", [(0, 0), (1, 0), (0, 3), (-1, 1)])
def test_bad_pairs(pair):
    m = mb.MultiInstance((JX, JY, JZ), spin1(0.0).psi)
    with pytest.raises(UsageError):
        mb.lij(m, pair)


def test_bad_mode():
    m = mb.MultiInstance((JX, JY, JZ), spin1(0.0).psi)
    with pytest.raises(UsageError):
        mb.lij(m, (0, 1), mode="all")


def test_two_observables_reduce_to_pair_bounds():
    psi = spin1(1.3).psi
    m = mb.MultiInstance((JX, JZ), psi)
    assert abs(mb.l0(m).bound - pb.l2(JX, JZ, psi, 1.0).bound) <= 1e-12
    assert abs(mb.lemma1(mb.MultiInstance((JX, JY), psi)).bound - pb.mp2(JX, JY, psi).bound) <= 1e-12
    lam = 2.5
    weighted = mb.weighted_lhs(mb.MultiInstance((JX, JZ), psi, (lam, 1.0)))
    pair = (1 + lam) * o_var(JX.matrix, psi.amplitudes) + (1 + 1 / lam) * o_var(JZ.matrix, psi.amplitudes)
    assert abs(weighted - pair) <= 1e-12


@pytest.mark.parametrize("theta", np.linspace(0, 2 * math.pi, 9, endpoint=False))
def test_spin1_lemma1_and_identity(theta):
    psi = spin1(theta).psi
    r = mb.lemma1(mb.MultiInstance((JX, JY, JZ), psi))
    assert abs(r.bound - (1 + math.sin(theta) ** 2) / 3) <= 1e-12
    m = mb.MultiInstance((JX, JY, JZ), psi, (2.0, 3.0, 5.0))
    assert mb.multi_parallelogram_residual(m) <= 1e-10
    t7 = mb.theorem7(mb.MultiInstance((JX, JY, JZ), psi), None, None)
    assert t7.slack >= -1e-12


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_l0_keeps_more_than_lemma1(seed):
    _, obs, psi, _ = draw(seed)
    m = mb.MultiInstance(tuple(obs), psi)
    assert mb.l0(m).bound >= len(obs) * mb.lemma1(m).bound - 1e-9


def test_degenerate_pair_perp_and_common_eigenstate():
    psi = PureState.basis(3, 0)
    m = mb.MultiInstance((JZ, 2 * JZ, -JZ), psi)
    assert mb.l0(m, Degenerate("x")).bound == 0.0
    m = mb.MultiInstance((JX, JY, JZ), spin1(0.4).psi)
    r = mb.lij(m, (0, 1), Degenerate("x"))
    assert r.degenerate_flags == ("pair0,1",) and r.slack >= 0
