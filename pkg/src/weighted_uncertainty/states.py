"""Pure states, observables and orthogonal-state construction.

Everything is computed for a normalized pure state ``psi``. Centered
operators ``A - <A>`` enter most formulas only through the vector
``(A - <A>)|psi>``, so :func:`centered_action` is the workhorse.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import linalg
from .errors import NumericError, PreconditionError, UsageError

NORM_TOL = 1e-10
PERP_TOL = 1e-9
DEGENERATE_NORM = 1e-12
IMAG_TOL = 1e-10
VARIANCE_CLAMP = 1e-12


@dataclass(frozen=True, eq=False)
class PureState:
    """A normalized state vector."""

    amplitudes: np.ndarray
    norm_tol: float = NORM_TOL

    def __post_init__(self):
        amps = linalg.cvector(self.amplitudes)
        object.__setattr__(self, "amplitudes", amps)
        n = linalg.norm_sq(amps)
        if abs(n - 1.0) > self.norm_tol:
            raise PreconditionError(f"state is not normalized: <psi|psi> = {n!r}")

    @classmethod
    def normalized(cls, entries) -> "PureState":
        v = np.array(entries, dtype=np.complex128)
        n = np.linalg.norm(v)
        if n <= DEGENERATE_NORM:
            raise UsageError("cannot normalize a zero vector")
        return cls(v / n)

    @classmethod
    def basis(cls, dim: int, index: int) -> "PureState":
        return cls(linalg.basis_vector(dim, index))

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)


@dataclass(frozen=True, eq=False)
class Observable:
    """A Hermitian matrix with a display name.

    Real linear combinations stay Hermitian, so ``+``, ``-`` and real
    scalar multiplication are supported and name the result accordingly.
    """

    matrix: np.ndarray
    name: str = "A"

    def __post_init__(self):
        m = linalg.cmatrix(self.matrix)
        if not linalg.is_hermitian(m, linalg.HERMITIAN_TOL):
            raise PreconditionError(f"observable {self.name!r} is not Hermitian")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __add__(self, other: "Observable") -> "Observable":
        return Observable(self.matrix + other.matrix, f"{self.name}+{other.name}")

    def __sub__(self, other: "Observable") -> "Observable":
        return Observable(self.matrix - other.matrix, f"{self.name}-{other.name}")

    def __neg__(self) -> "Observable":
        return Observable(-self.matrix, f"-{self.name}")

    def __mul__(self, c: float) -> "Observable":
        c = float(c)
        return Observable(c * self.matrix, f"{c:g}*{self.name}")

    __rmul__ = __mul__

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


@dataclass(frozen=True)
class Degenerate:
    """Marker for an orthogonal state that does not exist (zero pre-image)."""

    reason: str

    def __bool__(self) -> bool:
        return False


def _as_matrix(op) -> np.ndarray:
    if isinstance(op, Observable):
        return op.matrix
    return np.asarray(op, dtype=np.complex128)


def _as_vector(state) -> np.ndarray:
    if isinstance(state, PureState):
        return state.amplitudes
    return np.asarray(state, dtype=np.complex128)


def _check_dims(m: np.ndarray, v: np.ndarray) -> None:
    if m.shape[0] != v.shape[0]:
        raise UsageError(f"dimension mismatch: operator {m.shape} vs state {v.shape}")


def expectation(obs, psi) -> float:
    """Return ``<psi|A|psi>`` for a Hermitian ``A``.

    Raises
    ------
    NumericError
        If the imaginary part is larger than Hermiticity allows.
    """
    m, v = _as_matrix(obs), _as_vector(psi)
    _check_dims(m, v)
    val = np.vdot(v, m @ v)
    scale = max(1.0, float(np.max(np.abs(m))))
    if abs(val.imag) > IMAG_TOL * scale:
        raise NumericError(f"expectation has imaginary part {val.imag!r}; operator is not Hermitian")
    return float(val.real)


def centered_action(obs, psi) -> np.ndarray:
    """Return ``(A - <A>)|psi>``."""
    m, v = _as_matrix(obs), _as_vector(psi)
    _check_dims(m, v)
    av = m @ v
    return av - np.vdot(v, av).real * v


def variance(obs, psi) -> float:
    """``<A^2> - <A>^2``.

    ``<A^2>`` is taken as ``||A psi||^2``. Tiny negative values from
    cancellation are clamped to zero.
    """
    m, v = _as_matrix(obs), _as_vector(psi)
    mean = expectation(m, v)
    var = linalg.norm_sq(m @ v) - mean * mean
    if var < -VARIANCE_CLAMP * max(1.0, mean * mean):
        raise NumericError(f"negative variance {var!r}")
    return max(var, 0.0)


def commutator_expectation(a, b, psi) -> complex:
    """``<psi|[A, B]|psi>``; purely imaginary for Hermitian ``A``, ``B``."""
    ma, mb, v = _as_matrix(a), _as_matrix(b), _as_vector(psi)
    _check_dims(ma, v)
    _check_dims(mb, v)
    av, bv = ma @ v, mb @ v
    # <AB> - <BA> = <A psi|B psi> - <B psi|A psi>
    return complex(np.vdot(av, bv) - np.vdot(bv, av))


def anticommutator_centered_expectation(a, b, psi) -> float:
    """``<psi|{A - <A>, B - <B>}|psi>``, which is real."""
    ah, bh = centered_action(a, psi), centered_action(b, psi)
    return 2.0 * float(np.vdot(ah, bh).real)


def centered(obs, psi) -> np.ndarray:
    """The matrix ``A - <A> I``."""
    m = _as_matrix(obs)
    return linalg.cmatrix(m - expectation(m, psi) * np.eye(m.shape[0]))


@dataclass(frozen=True, eq=False)
class PerpChoice:
    """Recipe for a unit vector orthogonal to the current state.

    Modes
    -----
    ``vaidman``
        ``(A - <A>)|psi> / Delta A`` for the observable in ``payload``.
    ``optimal``
        The unit vector ``u`` orthogonal to ``psi`` maximizing
        ``|<psi|M|u>|``, i.e. ``M^dagger |psi>`` projected off ``psi``.
    ``explicit``
        A user supplied vector; it must already be orthogonal and normalized.
    ``basis_completion``
        Basis vector ``payload`` with its ``psi`` component removed.
    """

    mode: str
    payload: object = field(default=None)

    MODES = ("vaidman", "optimal", "explicit", "basis_completion")

    def __post_init__(self):
        if self.mode not in self.MODES:
            raise UsageError(f"unknown perp mode {self.mode!r}; expected one of {self.MODES}")

    @classmethod
    def vaidman(cls, of) -> "PerpChoice":
        return cls("vaidman", of)

    @classmethod
    def optimal(cls, matrix) -> "PerpChoice":
        return cls("optimal", matrix)

    @classmethod
    def explicit(cls, vector) -> "PerpChoice":
        return cls("explicit", vector)

    @classmethod
    def basis_completion(cls, index: int) -> "PerpChoice":
        return cls("basis_completion", int(index))


Perp = Union[PureState, Degenerate]


def _fix_phase(v: np.ndarray) -> np.ndarray:
    for a in v:
        if abs(a) > DEGENERATE_NORM:
            return v * (abs(a) / a)
    return v


def perp_from_vector(w: np.ndarray, psi, reason: str) -> Perp:
    """Project ``w`` off ``psi`` and normalize; Degenerate if nothing is left."""
    v = _as_vector(psi)
    w = w - np.vdot(v, w) * v
    n = np.sqrt(linalg.norm_sq(w))
    if n <= DEGENERATE_NORM:
        return Degenerate(reason)
    u = _fix_phase(w / n)
    return PureState(u, norm_tol=PERP_TOL)


def make_perp(choice: PerpChoice, psi) -> Perp:
    """Resolve ``choice`` into a unit state orthogonal to ``psi``."""
    v = _as_vector(psi)
    if choice.mode == "vaidman":
        w = centered_action(choice.payload, v)
        return perp_from_vector(w, v, "state is an eigenstate of the Vaidman observable")
    if choice.mode == "optimal":
        m = _as_matrix(choice.payload)
        _check_dims(m, v)
        return perp_from_vector(linalg.dagger(m) @ v, v, "M^dagger psi is parallel to psi")
    if choice.mode == "basis_completion":
        e = linalg.basis_vector(v.shape[0], choice.payload)
        return perp_from_vector(e, v, f"basis vector {choice.payload} is parallel to psi")
    # explicit
    u = _as_vector(choice.payload)
    if u.shape != v.shape:
        raise UsageError(f"explicit perp has shape {u.shape}, state has {v.shape}")
    if abs(linalg.norm_sq(u) - 1.0) > PERP_TOL:
        raise PreconditionError("explicit perp is not normalized")
    if abs(np.vdot(v, u)) > PERP_TOL:
        raise PreconditionError(f"explicit perp is not orthogonal to psi: |<psi|u>| = {abs(np.vdot(v, u))!r}")
    return choice.payload if isinstance(choice.payload, PureState) else PureState(u, norm_tol=PERP_TOL)
