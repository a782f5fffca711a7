"""Shared oracles.

The oracles below work on raw numpy arrays with textbook formulas so the
library is never checked against itself.
"""

import numpy as np
import pytest


def o_mean(a, psi):
    a, psi = np.asarray(a), np.asarray(psi)
    return (psi.conj() @ a @ psi).real


def o_var(a, psi):
    """``<A^2> - <A>^2`` straight from the definition."""
    a, psi = np.asarray(a), np.asarray(psi)
    return (psi.conj() @ a @ a @ psi).real - o_mean(a, psi) ** 2


def o_hat(a, psi):
    """``(A - <A>) psi``."""
    a, psi = np.asarray(a), np.asarray(psi)
    return a @ psi - o_mean(a, psi) * psi


def o_cross(m, psi, u):
    """``|<psi|M|u>|^2``."""
    m, psi, u = np.asarray(m), np.asarray(psi), np.asarray(u)
    return abs(psi.conj() @ m @ u) ** 2


def o_comm(a, b, psi):
    a, b, psi = np.asarray(a), np.asarray(b), np.asarray(psi)
    return psi.conj() @ (a @ b - b @ a) @ psi


def o_perp_norm_sq(m, psi):
    """Largest ``|<psi|M|u>|^2`` over unit ``u`` orthogonal to psi."""
    m, psi = np.asarray(m), np.asarray(psi)
    w = m.conj().T @ psi
    w = w - (psi.conj() @ w) * psi
    return float(np.vdot(w, w).real)


def o_herm(rng, d):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (g + g.conj().T) / 2


def o_state(rng, d):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def o_perp(rng, psi):
    w = rng.standard_normal(psi.shape[0]) + 1j * rng.standard_normal(psi.shape[0])
    w = w - np.vdot(psi, w) * psi
    w = w / np.linalg.norm(w)
    return w - np.vdot(psi, w) * psi


@pytest.fixture
def rng():
    return np.random.default_rng(20240501)
