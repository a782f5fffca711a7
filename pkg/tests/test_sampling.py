import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weighted_uncertainty import sampling
from weighted_uncertainty.errors import UsageError
from weighted_uncertainty.linalg import is_hermitian
from weighted_uncertainty.states import variance

from conftest import o_var


def test_streams_are_reproducible():
    a = sampling.rng_for((42, 7)).standard_normal(5)
    b = sampling.rng_for((42, 7)).standard_normal(5)
    c = sampling.rng_for((42, 8)).standard_normal(5)
    assert np.array_equal(a, b) and not np.array_equal(a, c)
    assert isinstance(sampling.rng_for(1).bit_generator, np.random.PCG64)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31), st.integers(2, 8))
def test_random_objects_are_valid(seed, d):
    psi = sampling.random_state(d, seed)
    h = sampling.random_hermitian(d, seed)
    u = sampling.random_perp(psi, seed + 1)
    assert abs(np.linalg.norm(psi.amplitudes) - 1) < 1e-12
    assert np.allclose(h.matrix, h.matrix.conj().T)
    assert abs(np.vdot(psi.amplitudes, u.amplitudes)) < 1e-12
    assert abs(np.linalg.norm(u.amplitudes) - 1) < 1e-12


def test_dimension_guard():
    with pytest.raises(UsageError):
        sampling.random_state(1, 0)
    with pytest.raises(UsageError):
        sampling.random_hermitian(1, 0)


def test_log_uniform_range():
    rng = sampling.rng_for(3)
    xs = [sampling.log_uniform(rng, 1e-3, 1e3) for _ in range(2000)]
    assert min(xs) >= 1e-3 and max(xs) <= 1e3
    # half the mass sits below the geometric midpoint
    assert 0.45 < np.mean(np.array(xs) < 1.0) < 0.55


def test_spin_matrices_satisfy_su2():
    jx, jy, jz = (o.matrix for o in (sampling.JX, sampling.JY, sampling.JZ))
    assert np.allclose(jx @ jy - jy @ jx, 1j * jz)
    assert np.allclose(jx @ jx + jy @ jy + jz @ jz, 2 * np.eye(3))


@pytest.mark.parametrize("theta", np.linspace(0, 2 * math.pi, 13, endpoint=False))
def test_spin1_closed_forms(theta):
    fx = sampling.spin1(theta)
    ops = {"Jx": fx.jx.matrix, "Jy": fx.jy.matrix, "Jz": fx.jz.matrix}
    for key, expect in fx.closed_form().items():
        m = sum(ops[k] for k in key.split("+"))
        assert abs(o_var(m, fx.psi.amplitudes) - expect) <= 1e-12
        assert abs(variance(m, fx.psi) - expect) <= 1e-12


@pytest.mark.parametrize("theta", [-0.1, 2 * math.pi, 7.0])
def test_spin1_theta_domain(theta):
    with pytest.raises(UsageError):
        sampling.spin1(theta)


def test_haar_and_gue_moments():
    p0 = [abs(sampling.random_state(2, (5, k)).amplitudes[0]) ** 2 for k in range(10_000)]
    assert abs(np.mean(p0) - 0.5) < 0.02
    traces = [np.trace(sampling.random_hermitian(4, (6, k)).matrix).real for k in range(10_000)]
    assert abs(np.mean(traces)) < 0.1


def test_random_hermitian_exactly_hermitian():
    assert is_hermitian(sampling.random_hermitian(6, 11).matrix, tol=0.0)


def test_closed_forms_on_fine_grid():
    worst = 0.0
    for theta in np.linspace(0, 2 * math.pi, 1000, endpoint=False):
        fx = sampling.spin1(float(theta))
        ops = {"Jx": fx.jx, "Jy": fx.jy, "Jz": fx.jz}
        for key, expect in fx.closed_form().items():
            m = sum(ops[k].matrix for k in key.split("+"))
            worst = max(worst, abs(variance(m, fx.psi) - expect))
    assert worst <= 1e-12
