"""Small dense complex linear algebra.

Vectors and matrices are plain read-only ``complex128`` numpy arrays. The
constructors :func:`cvector` and :func:`cmatrix` validate shape and
finiteness once; every other function here is pure.
"""

from __future__ import annotations

import numpy as np

from .errors import UsageError

HERMITIAN_TOL = 1e-10


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def cvector(entries) -> np.ndarray:
    """Build a validated, immutable complex vector."""
    v = np.array(entries, dtype=np.complex128)
    if v.ndim != 1 or v.size == 0:
        raise UsageError(f"expected a non-empty 1-d vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise UsageError("vector has non-finite entries")
    return _freeze(v)


def cmatrix(entries) -> np.ndarray:
    """Build a validated, immutable square complex matrix."""
    m = np.array(entries, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise UsageError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise UsageError("matrix has non-finite entries")
    return _freeze(m)


def identity(dim: int) -> np.ndarray:
    return _freeze(np.eye(dim, dtype=np.complex128))


def basis_vector(dim: int, index: int) -> np.ndarray:
    if not 0 <= index < dim:
        raise UsageError(f"basis index {index} out of range for dimension {dim}")
    e = np.zeros(dim, dtype=np.complex128)
    e[index] = 1.0
    return _freeze(e)


def inner(u: np.ndarray, v: np.ndarray) -> complex:
    """Return ``<u|v>``, conjugate-linear in ``u``."""
    if u.shape != v.shape:
        raise UsageError(f"dimension mismatch: {u.shape} vs {v.shape}")
    return complex(np.vdot(u, v))


def norm_sq(v: np.ndarray) -> float:
    return float(np.vdot(v, v).real)


def apply(m: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Matrix-vector product ``M|v>``."""
    if m.shape[1] != v.shape[0]:
        raise UsageError(f"dimension mismatch: matrix {m.shape} vs vector {v.shape}")
    return m @ v


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    """True iff ``max |M_jk - conj(M_kj)| <= tol``."""
    if tol < 0:
        raise UsageError("tolerance must be non-negative")
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)
