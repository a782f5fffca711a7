import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weighted_uncertainty import optimize as opt
from weighted_uncertainty.errors import NumericError, UsageError
from weighted_uncertainty.pair_bounds import l2_saturating_perp
from weighted_uncertainty.sampling import JX, JY, JZ, spin1
from weighted_uncertainty.states import PureState, variance

KET1 = PureState.basis(3, 1)


def test_grid_values_pin_endpoints():
    g = opt.GridSpec(1e-3, 1e3, 7)
    v = g.values()
    assert v[0] == 1e-3 and v[-1] == 1e3 and len(v) == 7
    assert np.allclose(np.diff(np.log10(v)), 1.0)
    assert np.allclose(opt.GridSpec(0, 1, 5, "linear").values(), [0, 0.25, 0.5, 0.75, 1])


@pytest.mark.parametrize("text", ["1:2", "a:2:3", "2:1:5", "0:1:5", "1:2:1"])
def test_grid_parse_rejects(text):
    with pytest.raises(UsageError):
        opt.GridSpec.parse(text)


def test_grid_parse():
    assert opt.GridSpec.parse("0.1:10:50") == opt.GridSpec(0.1, 10.0, 50)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.2, 8.0))
def test_golden_section_finds_peak(peak):
    x, y = opt.golden_section_max(lambda t: -(t - peak) ** 2, 0.1, 10.0, rel_tol=1e-9)
    assert abs(x - peak) < 1e-6 * peak and y <= 0


def test_scan_refines_and_never_loses():
    scan = opt.scan_lambda(lambda t: -(math.log(t) - 0.3) ** 2, opt.GridSpec(0.1, 10, 5))
    assert scan.refined and abs(scan.argmax[0] - math.exp(0.3)) < 1e-4
    assert scan.argmax[1] >= max(y for _, y in scan.samples)
    flat = opt.scan_lambda(lambda t: 1.0, [1, 2, 3])
    assert flat.argmax == (1.0, 1.0) and not flat.refined


def test_scan_errors():
    with pytest.raises(UsageError):
        opt.scan_lambda(lambda t: t, [])
    with pytest.raises(NumericError, match="lambda = 2"):
        opt.scan_lambda(lambda t: math.nan if t == 2 else t, [1, 2, 3])


def test_central_difference():
    assert abs(opt.central_difference(lambda x: x ** 3, 2.0) - 12.0) < 1e-8
    assert abs(opt.central_difference(math.log, 1e3) - 1e-3) < 1e-12


@pytest.mark.parametrize("theta", [0.2, 1.0, math.pi / 2, 2.5, 4.0])
@pytest.mark.parametrize("lam", [0.1, 1.0, 7.5])
def test_error_function_closed_form(theta, lam):
    f = opt.error_function(JY, JZ, spin1(theta).psi, lam, KET1)
    assert abs(f - math.sin(theta) ** 2 / lam) <= 1e-10


def test_find_extrema_on_known_functions():
    grid = opt.GridSpec(0.1, 10, 41)
    (x, kind), = opt.find_extrema(lambda t: -(t - 2.0) ** 2, grid)
    assert abs(x - 2.0) < 1e-6 and kind == "max"
    (x, kind), = opt.find_extrema(lambda t: t + 4.0 / t, grid)
    assert abs(x - 2.0) < 1e-6 and kind == "min"
    assert opt.find_extrema(lambda t: 3.0, grid) == []


def test_extremal_lambda_and_equilibrium():
    # f = sin^2/lam is monotone; the closed forms leave no stationary point
    assert opt.find_extremal_lambda(JY, JZ, spin1(math.pi / 2).psi, KET1) == []
    # f is identically zero at theta = 0, so f'(1) = 0 there
    assert opt.is_equilibrium(JY, JZ, spin1(0.0).psi, KET1)
    assert not opt.is_equilibrium(JY, JZ, spin1(math.pi / 2).psi, KET1)
    with pytest.raises(UsageError):
        opt.is_equilibrium(JX, JY, spin1(0.0).psi, KET1, tol=0)


def test_scan_of_l2_dominates_lambda_one():
    psi = spin1(math.pi / 2).psi
    scan = opt.scan_lambda(lambda x: opt.l2_value(JY, JZ, psi, x, KET1), opt.GridSpec())
    assert scan.argmax[1] >= opt.l2_value(JY, JZ, psi, 1.0, KET1)


def test_equilibrium_check_runs_on_identical_pair():
    psi = spin1(0.9).psi
    assert isinstance(opt.is_equilibrium(JX, JX, psi), bool)
    assert variance(JX, psi) - variance(JX, psi) == 0.0


@pytest.mark.parametrize("theta", [0.0, 1.0])
def test_error_function_vanishes_with_saturating_perp(theta):
    psi = spin1(theta).psi
    for lam in (0.3, 3.0):
        assert abs(opt.error_function(JY, JZ, psi, lam, l2_saturating_perp(JY, JZ, psi, lam))) <= 1e-12
