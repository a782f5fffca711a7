"""Two-observable uncertainty bounds.

Every function returns a :class:`~weighted_uncertainty.report.BoundReport`.
Wherever a bound contains a term ``|<psi|M|u>|^2`` with ``u`` orthogonal
to ``psi``, the caller chooses ``u`` through a *perp* argument, which may be

* ``None``: the saturating choice, ``u`` proportional to ``M^dagger psi``
  projected off ``psi``. This makes the Cauchy-Schwarz step tight.
* a :class:`PerpChoice`, :class:`PureState` or :class:`Degenerate`.
* a callable ``lam -> PerpChoice`` for lambda-dependent rules.

A perp that cannot be built (zero pre-image) contributes a zero term and
its label is added to ``degenerate_flags``.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence, Union

import numpy as np

from .errors import PreconditionError, UsageError
from .report import BoundReport
from .search import GridSpec, scan_lambda
from .states import (
    DEGENERATE_NORM,
    Degenerate,
    Observable,
    PerpChoice,
    PureState,
    _as_matrix,
    _as_vector,
    centered_action,
    commutator_expectation,
    anticommutator_centered_expectation,
    make_perp,
    perp_from_vector,
    variance,
)

COMMUTATOR_TIE = 1e-12
DENOMINATOR_MIN = 1e-12

PerpArg = Union[PerpChoice, PureState, Degenerate, Callable[[float], PerpChoice], None]


def _resolve_perp(perp: PerpArg, psi: np.ndarray, m: np.ndarray, lam: float | None = None):
    """Turn a perp argument into a unit vector, or ``None`` if degenerate."""
    if perp is None:
        u = make_perp(PerpChoice.optimal(m), psi)
    elif isinstance(perp, Degenerate):
        u = perp
    elif isinstance(perp, PureState):
        u = make_perp(PerpChoice.explicit(perp), psi)
    elif isinstance(perp, PerpChoice):
        u = make_perp(perp, psi)
    elif callable(perp):
        return _resolve_perp(perp(lam), psi, m, lam)
    else:
        raise UsageError(f"unsupported perp argument {perp!r}")
    return None if isinstance(u, Degenerate) else u.amplitudes


def _cross_term(m: np.ndarray, psi: np.ndarray, u: np.ndarray | None) -> float:
    """``|<psi|M|u>|^2``, zero for a degenerate ``u``."""
    if u is None:
        return 0.0
    return float(abs(np.vdot(psi, m @ u)) ** 2)


def _term(label, m, psi, perp, flags, lam=None, scale=1.0):
    u = _resolve_perp(perp, psi, m, lam)
    if u is None:
        flags.append(label)
    return (label, float(scale * _cross_term(m, psi, u)))


def _commutator_sign(comm: complex, factor: complex) -> tuple[int, float]:
    """Pick ``s`` in {+1, -1} so that ``s * factor * comm`` is non-negative.

    Ties (vanishing commutator) resolve to ``+1``.
    """
    base = (factor * comm).real
    if abs(comm) <= COMMUTATOR_TIE or base >= 0:
        return 1, base
    return -1, -base


def _weighted_lhs(var_a: float, var_b: float, lam: float) -> float:
    return (1.0 + lam) * var_a + (1.0 + 1.0 / lam) * var_b


def _check_lambda(lam: float, extended: bool = False) -> float:
    lam = float(lam)
    if not math.isfinite(lam) or lam == 0.0 or lam == -1.0:
        raise UsageError(f"lambda must be finite and not 0 or -1, got {lam!r}")
    if lam < 0 and not extended:
        raise UsageError(f"lambda must be positive, got {lam!r} (pass extended=True for negative values)")
    return lam


def robertson(a, b, psi) -> BoundReport:
    """``Delta A * Delta B >= |<[A, B]>| / 2``."""
    lhs = math.sqrt(variance(a, psi) * variance(b, psi))
    comm = commutator_expectation(a, b, psi)
    return BoundReport("robertson", lhs, (("commutator", 0.5 * abs(comm)),))


def schrodinger(a, b, psi) -> BoundReport:
    """Robertson strengthened by the centered anticommutator."""
    lhs = variance(a, psi) * variance(b, psi)
    comm = commutator_expectation(a, b, psi)
    anti = anticommutator_centered_expectation(a, b, psi)
    return BoundReport("schrodinger", lhs, (
        ("commutator", abs(0.5 * comm) ** 2),
        ("anticommutator", (0.5 * anti) ** 2),
    ))


def mp1(a, b, psi, perp: PerpArg = None) -> BoundReport:
    """First sum-of-variances bound, ``s i<[A,B]> + |<psi|A + s iB|u>|^2``."""
    ma, mb, v = _as_matrix(a), _as_matrix(b), _as_vector(psi)
    lhs = variance(ma, v) + variance(mb, v)
    s, first = _commutator_sign(commutator_expectation(ma, mb, v), 1j)
    flags: list[str] = []
    cross = _term("cross", ma + s * 1j * mb, v, perp, flags)
    return BoundReport("mp1", lhs, (("commutator", first), cross), tuple(flags), sign_used=s)


def mp2(a, b, psi) -> BoundReport:
    """Second sum-of-variances bound, half the variance of ``A + B``.

    Evaluated as ``|<u|A+B|psi>|^2 / 2`` with ``u`` the Vaidman state of ``A + B``.
    """
    ma, mb, v = _as_matrix(a), _as_matrix(b), _as_vector(psi)
    lhs = variance(ma, v) + variance(mb, v)
    flags: list[str] = []
    s = ma + mb
    term = _term("vaidman_sum", s, v, PerpChoice.vaidman(s), flags, scale=0.5)
    return BoundReport("mp2", lhs, (term,), tuple(flags))


def amended_hr(a, b, psi, perp: PerpArg = None) -> BoundReport:
    """Amended Heisenberg-Robertson bound on ``Delta A * Delta B``.

    Raises
    ------
    PreconditionError
        If either standard deviation vanishes or the denominator is not positive.
    """
    ma, mb, v = _as_matrix(a), _as_matrix(b), _as_vector(psi)
    sd_a, sd_b = math.sqrt(variance(ma, v)), math.sqrt(variance(mb, v))
    for sd, op in ((sd_a, a), (sd_b, b)):
        if sd <= DEGENERATE_NORM:
            name = op.name if isinstance(op, Observable) else "observable"
            raise PreconditionError(f"{name} has zero variance on this state")
    s, numerator = _commutator_sign(commutator_expectation(ma, mb, v), 0.5j)
    flags: list[str] = []
    m = ma / sd_a + s * 1j * mb / sd_b
    _, cross = _term("cross", m, v, perp, flags)
    denominator = 1.0 - 0.5 * cross
    if denominator <= DENOMINATOR_MIN:
        raise PreconditionError(f"non-positive denominator {denominator!r}")
    return BoundReport("amended_hr", sd_a * sd_b, (("commutator_over_denominator", numerator / denominator),),
                       tuple(flags), sign_used=s, extra={"denominator": float(denominator)})


def l1(a, b, psi, lam: float, perp1: PerpArg = None, perp2: PerpArg = None) -> BoundReport:
    """Weighted bound with the commutator term.

    ``(1+lam) dA^2 + (1+1/lam) dB^2 >= -2is<[A,B]> + |<psi|A - s iB|u1>|^2
    + |<psi|lam A - s iB|u2>|^2 / lam`` with ``s`` making the first term
    non-negative.
    """
    lam = _check_lambda(lam)
    ma, mb, v = _as_matrix(a), _as_matrix(b), _as_vector(psi)
    lhs = _weighted_lhs(variance(ma, v), variance(mb, v), lam)
    s, first = _commutator_sign(commutator_expectation(ma, mb, v), -2j)
    flags: list[str] = []
    t1 = _term("cross_1", ma - s * 1j * mb, v, perp1, flags, lam)
    t2 = _term("cross_2", lam * ma - s * 1j * mb, v, perp2, flags, lam, scale=1.0 / lam)
    return BoundReport("l1", lhs, (("commutator", first), t1, t2), tuple(flags), lam=lam, sign_used=s)


def _saturating(w: np.ndarray, psi: np.ndarray, reason: str) -> PerpChoice | Degenerate:
    u = perp_from_vector(w, psi, reason)
    return u if isinstance(u, Degenerate) else PerpChoice.explicit(u)


def l1_saturating_perps(a, b, psi, lam: float):
    """The pair of states making :func:`l1` an equality.

    They are ``(A^ + s iB^)|psi>`` and ``(lam A^ + s iB^)|psi>``, normalized,
    with the same sign ``s`` that :func:`l1` selects. Either entry may be
    :class:`Degenerate`.
    """
    lam = _check_lambda(lam)
    ma, mb, v = _as_matrix(a), _as_matrix(b), _as_vector(psi)
    s, _ = _commutator_sign(commutator_expectation(ma, mb, v), -2j)
    ah, bh = centered_action(ma, v), centered_action(mb, v)
    return (
        _saturating(ah + s * 1j * bh, v, "(A^ + s iB^)psi vanishes"),
        _saturating(lam * ah + s * 1j * bh, v, "(lam A^ + s iB^)psi vanishes"),
    )


def l2(a, b, psi, lam: float, perp: PerpArg = None, extended: bool = False) -> BoundReport:
    """Weighted bound ``|<psi|A+B|u_{A+B}>|^2 + |<psi|lam A - B|u>|^2 / lam``.

    ``u_{A+B}`` is the Vaidman state of ``A + B``. With ``extended=True``
    negative ``lam`` (other than -1) is accepted and the report is marked.
    For ``lam < 0`` the relation runs the other way (``lhs <= bound``),
    with equality at the saturating perp.
    """
    lam = _check_lambda(lam, extended)
    ma, mb, v = _as_matrix(a), _as_matrix(b), _as_vector(psi)
    lhs = _weighted_lhs(variance(ma, v), variance(mb, v), lam)
    flags: list[str] = []
    s = ma + mb
    t1 = _term("vaidman_sum", s, v, PerpChoice.vaidman(s), flags)
    t2 = _term("weighted_difference", lam * ma - mb, v, perp, flags, lam, scale=1.0 / lam)
    extra = {"negative_lambda": True} if lam < 0 else {}
    return BoundReport("l2", lhs, (t1, t2), tuple(flags), lam=lam, extra=extra)


def l2_saturating_perp(a, b, psi, lam: float, extended: bool = False) -> PerpChoice | Degenerate:
    """Normalized ``(lam A^ - B^)|psi>``, the state making :func:`l2` tight."""
    lam = _check_lambda(lam, extended)
    ma, mb, v = _as_matrix(a), _as_matrix(b), _as_vector(psi)
    w = lam * centered_action(ma, v) - centered_action(mb, v)
    return _saturating(w, v, "(lam A^ - B^)psi vanishes")


def theorem3(a, b, psi, lam: float, perp1: PerpArg = None, perp2: PerpArg = None,
             perp: PerpArg = None) -> BoundReport:
    """The larger of :func:`l1` and :func:`l2`."""
    r1 = l1(a, b, psi, lam, perp1, perp2)
    r2 = l2(a, b, psi, lam, perp)
    win, branch = (r1, "L1") if r1.bound >= r2.bound else (r2, "L2")
    return BoundReport("theorem3", win.lhs, win.terms, win.degenerate_flags, lam=lam,
                       sign_used=win.sign_used, extra={"branch": branch, "L1": r1.bound, "L2": r2.bound})


def _lk(k, a, b, psi, lam, perp, perp1, perp2) -> BoundReport:
    if k == 1:
        return l1(a, b, psi, lam, perp1, perp2)
    if k == 2:
        return l2(a, b, psi, lam, perp)
    raise UsageError(f"k must be 1 or 2, got {k!r}")


def derived_sum_bound(a, b, psi, lam1: float, lam2: float, k: int = 2, perp: PerpArg = None,
                      perp1: PerpArg = None, perp2: PerpArg = None) -> BoundReport:
    """Bound on the plain sum ``dA^2 + dB^2`` recovered from two weighted bounds.

    Requires ``lam1 > 1 > lam2 > 0``; ``lam1 == lam2 == 1`` selects the
    limiting form ``L_k(1) / 2``. Perp arguments are resolved separately
    at each lambda, so the saturating default adapts to both.
    """
    v = _as_vector(psi)
    lhs = variance(a, v) + variance(b, v)
    if lam1 == 1.0 and lam2 == 1.0:
        r = _lk(k, a, b, v, 1.0, perp, perp1, perp2)
        terms = tuple((f"half:{name}", 0.5 * val) for name, val in r.terms)
        return BoundReport(f"derived_sum_L{k}", lhs, terms, r.degenerate_flags, lam=1.0,
                           sign_used=r.sign_used, extra={"limit": True})
    if not (lam1 > 1.0 > lam2 > 0.0):
        raise UsageError(f"need lam1 > 1 > lam2 > 0, got lam1={lam1!r}, lam2={lam2!r}")
    c1 = (1.0 - lam2) / (1.0 + 1.0 / lam1) / (lam1 - lam2)
    c2 = (lam1 - 1.0) / (1.0 + 1.0 / lam2) / (lam1 - lam2)
    r1 = _lk(k, a, b, v, lam1, perp, perp1, perp2)
    r2 = _lk(k, a, b, v, lam2, perp, perp1, perp2)
    terms = tuple((f"lam1:{n}", c1 * x) for n, x in r1.terms) + tuple((f"lam2:{n}", c2 * x) for n, x in r2.terms)
    flags = tuple(f"lam1:{f}" for f in r1.degenerate_flags) + tuple(f"lam2:{f}" for f in r2.degenerate_flags)
    return BoundReport(f"derived_sum_L{k}", lhs, terms, flags,
                       extra={"lam1": lam1, "lam2": lam2, "coef1": c1, "coef2": c2})


def rescaled_l2_terms(a, b, psi, perp: PerpArg = None) -> Callable[[float], tuple[float, float]]:
    """Return ``lam -> (vaidman term, weighted term)`` of ``L2`` applied to the
    rescaled pair ``A/sqrt(1+lam)``, ``B/sqrt(1+1/lam)``.

    The rescaled weighted sum equals ``dA^2 + dB^2`` for every ``lam``, so
    each value is a valid bound on the plain sum. With a fixed perp the
    needed matrix elements are precomputed once.
    """
    ma, mb, v = _as_matrix(a), _as_matrix(b), _as_vector(psi)
    ah, bh = centered_action(ma, v), centered_action(mb, v)
    fixed = isinstance(perp, (PerpChoice, PureState, Degenerate))
    if fixed:
        u = _resolve_perp(perp, v, ma - mb)
        if u is None:
            ea = eb = 0.0
        else:
            ea, eb = np.vdot(v, ma @ u), np.vdot(v, mb @ u)

    def terms(lam: float) -> tuple[float, float]:
        p, q = 1.0 / math.sqrt(1.0 + lam), 1.0 / math.sqrt(1.0 + 1.0 / lam)
        w = p * ah + q * bh
        first = float(np.vdot(w, w).real)
        if fixed:
            second = float(abs(lam * p * ea - q * eb) ** 2 / lam)
        else:
            sa, sb = Observable(p * ma, "A'"), Observable(q * mb, "B'")
            second = l2(sa, sb, v, lam, perp).terms[1][1]
        return first, second

    return terms


def corollary1(a, b, psi, perp: PerpArg, grid: GridSpec | Sequence[float] | None = None) -> BoundReport:
    """Supremum over lambda of ``L2`` for the rescaled pair.

    The grid is searched together with ``lam = 1``, then refined by golden
    section around the best grid point, so the result never falls below
    the unweighted (``lam = 1``) value recorded in ``extra``.
    """
    v = _as_vector(psi)
    lhs = variance(a, v) + variance(b, v)
    if grid is None:
        grid = GridSpec()
    xs = grid.values() if isinstance(grid, GridSpec) else np.asarray(list(grid), dtype=float)
    if xs.size == 0:
        raise UsageError("empty lambda grid")
    if np.any(xs <= 0) or not np.all(np.isfinite(xs)):
        raise UsageError("lambda grid must be positive and finite")
    xs = np.union1d(xs, [1.0])
    terms = rescaled_l2_terms(a, b, v, perp)
    scan = scan_lambda(lambda x: sum(terms(x)), xs)
    lam_star, _ = scan.argmax
    t1, t2 = terms(lam_star)
    at_one = sum(terms(1.0))
    flags = ("vaidman_sum",) if t1 <= DEGENERATE_NORM ** 2 else ()
    return BoundReport("corollary1", lhs, (("vaidman_sum", t1), ("weighted_difference", t2)), flags,
                       lam=lam_star, extra={"value_at_1": float(at_one), "refined": scan.refined})


def theorem4(a, b, psi, x: float, y: float, perp: PerpArg = None) -> BoundReport:
    """General weights: ``x dA^2 + y dB^2 >= xy/(x+y) L2(x/y)``.

    Only ``x y (x + y) > 0`` is required for the call to succeed. When the
    weights have opposite signs ``L2`` is taken at a negative lambda, the
    inequality reverses and the report is marked ``mixed_sign_weights``.
    """
    x, y = float(x), float(y)
    if not x * y * (x + y) > 0:
        raise UsageError(f"weights must satisfy x*y*(x+y) > 0, got x={x!r}, y={y!r}")
    v = _as_vector(psi)
    lam = x / y
    r = l2(a, b, v, lam, perp, extended=True)
    c = x * y / (x + y)
    lhs = x * variance(a, v) + y * variance(b, v)
    extra = {"coefficient": c}
    if lam < 0:
        extra["mixed_sign_weights"] = True
    return BoundReport("theorem4", lhs, tuple((n, c * t) for n, t in r.terms), r.degenerate_flags,
                       lam=lam, extra=extra)


def nth_root_factorial(n: int) -> float:
    """``(n!)^(1/n)`` via log-gamma."""
    return math.exp(math.lgamma(n + 1) / n)


def remark1(a, b, psi, perp: PerpArg = None, n_terms: int = 20) -> BoundReport:
    """Truncated series bound on ``1/(1 - dA) + exp(dB)``.

    Term ``n`` is ``[L2(r_n) / (2 (r_n + 1))]^n`` with ``r_n = (n!)^(1/n)``
    and the ``n = 0`` term equal to 1. Whether ``bound <= lhs`` actually
    held is recorded in ``extra["holds"]``; it is not assumed.
    """
    if n_terms < 0:
        raise UsageError("number of series terms must be >= 0")
    v = _as_vector(psi)
    sd_a = math.sqrt(variance(a, v))
    if sd_a >= 1.0 - 1e-9:
        raise PreconditionError(f"need Delta A < 1, got {sd_a!r}")
    lhs = 1.0 / (1.0 - sd_a) + math.exp(math.sqrt(variance(b, v)))
    terms = [("n=0", 1.0)]
    flags = []
    for n in range(1, n_terms + 1):
        r = nth_root_factorial(n)
        rep = l2(a, b, v, r, perp)
        if rep.bound == 0.0:
            flags.append(f"n={n}")
        terms.append((f"n={n}", (rep.bound / (2.0 * (r + 1.0))) ** n))
    holds = math.fsum(t for _, t in terms) <= lhs
    return BoundReport("remark1", lhs, tuple(terms), tuple(flags), extra={"tail": terms[-1][1], "holds": holds})


def parallelogram_residual(a, b, psi, lam: float, alpha: complex) -> float:
    """Residual of the weighted parallelogram identity

    ``(1+lam) dA^2 + (1+1/lam) dB^2 = ||(A^ - alpha B^)psi||^2 + ||(lam A^ + alpha B^)psi||^2 / lam``

    for ``|alpha| = 1`` and any real non-zero ``lam``.
    """
    if abs(abs(alpha) - 1.0) > 1e-10:
        raise UsageError(f"|alpha| must be 1, got {abs(alpha)!r}")
    lam = float(lam)
    if lam == 0.0 or not math.isfinite(lam):
        raise UsageError("lambda must be finite and non-zero")
    v = _as_vector(psi)
    ah, bh = centered_action(a, v), centered_action(b, v)
    lhs = _weighted_lhs(variance(a, v), variance(b, v), lam)
    w1 = ah - alpha * bh
    w2 = lam * ah + alpha * bh
    rhs = np.vdot(w1, w1).real + np.vdot(w2, w2).real / lam
    return abs(lhs - rhs)
