import numpy as np
import pytest

from weighted_uncertainty import fuzz
from weighted_uncertainty.errors import UsageError


def test_trials_are_reproducible():
    a, b = fuzz.make_trial(5, 11), fuzz.make_trial(5, 11)
    assert np.array_equal(a.a.matrix, b.a.matrix)
    assert np.array_equal(a.multi_perp.amplitudes, b.multi_perp.amplitudes)
    assert (a.lam, a.pair, a.multi.weights) == (b.lam, b.pair, b.multi.weights)


def test_trial_parameter_ranges():
    for k in range(50):
        t = fuzz.make_trial(1, k, dim_max=5, n_max=4)
        assert 2 <= t.dim <= 5 and 2 <= t.multi.n <= 4
        assert 1e-3 <= t.lam <= 1e3 and t.lam1 > 1 > t.lam2 > 0
        assert 0 <= t.pair[0] < t.pair[1] < t.multi.n


def test_short_run_passes_everything():
    result = fuzz.run(40, seed=3)
    assert result.ok
    assert set(result.tallies) == set(fuzz.RELATIONS)
    assert result.summary().endswith("result: PASS")


@pytest.mark.parametrize("k", [0, 3, 8])
def test_single_trial_rerun_matches(k):
    single = fuzz.run(1, seed=9, relations=["l2"], start=k)
    assert single.tallies["l2"].max_violation == fuzz.RELATIONS["l2"].check(fuzz.make_trial(9, k))


def test_failures_report_seed_and_trial(monkeypatch):
    broken = fuzz.Relation("broken", lambda t: 1.0 if t.index == 2 else 0.0)
    monkeypatch.setitem(fuzz.RELATIONS, "broken", broken)
    result = fuzz.run(4, seed=17, relations=["broken"])
    assert not result.ok
    assert "first_failure=seed:17,trial:2" in result.summary()
    assert result.summary().endswith("result: FAIL")


@pytest.mark.parametrize("kwargs", [
    dict(trials=0), dict(trials=1, dim_max=1), dict(trials=1, relations=["nope"]),
])
def test_usage_errors(kwargs):
    with pytest.raises(UsageError):
        fuzz.run(**kwargs)
