"""Lambda analysis of the weighted bound ``L2``.

Derivatives are central differences; ``L2`` depends on lambda through its
coefficients and, for lambda-dependent perp rules, through the perp state,
so no closed form is assumed.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import UsageError
from .pair_bounds import PerpArg, l2
from .search import GridSpec, LambdaScan, golden_section_max, scan_lambda
from .states import variance

__all__ = [
    "GridSpec",
    "LambdaScan",
    "scan_lambda",
    "golden_section_max",
    "error_function",
    "l2_value",
    "central_difference",
    "find_extrema",
    "find_extremal_lambda",
    "is_equilibrium",
]

DERIVATIVE_STEP = 1e-5
BISECTION_TOL = 1e-8


def error_function(a, b, psi, lam: float, perp: PerpArg = None) -> float:
    """``f(lam) = (1+lam) dA^2 + (1+1/lam) dB^2 - L2(lam)``; never below zero up to rounding."""
    return l2(a, b, psi, lam, perp).slack


def l2_value(a, b, psi, lam: float, perp: PerpArg = None) -> float:
    return l2(a, b, psi, lam, perp).bound


def central_difference(fn: Callable[[float], float], x: float, step: float = DERIVATIVE_STEP) -> float:
    h = step * max(1.0, abs(x))
    return (fn(x + h) - fn(x - h)) / (2.0 * h)


def _second_difference(fn, x, step=1e-4):
    h = step * max(1.0, abs(x))
    return (fn(x + h) - 2.0 * fn(x) + fn(x - h)) / (h * h)


def find_extrema(fn: Callable[[float], float], grid: GridSpec, flat_tol: float = 1e-7) -> list[tuple[float, str]]:
    """Interior stationary points of ``fn`` on the grid.

    The derivative is sampled on the grid; values within ``flat_tol``
    (relative to the largest ``|fn|`` seen) count as zero and never form a
    sign change, so a constant function has no extrema. Each bracketed
    root is bisected to ``1e-8`` and tagged ``"min"`` or ``"max"`` from
    the second difference.
    """
    xs = grid.values()
    ds = np.array([central_difference(fn, x) for x in xs])
    scale = max(1.0, max(abs(fn(x)) for x in xs))
    signs = np.where(np.abs(ds) <= flat_tol * scale, 0, np.sign(ds)).astype(int)

    roots = []
    prev = None
    for k, sg in enumerate(signs):
        if sg == 0:
            continue
        if prev is not None and signs[prev] != sg:
            lo, hi = xs[prev], xs[k]
            d_lo = ds[prev]
            while hi - lo > BISECTION_TOL:
                mid = 0.5 * (lo + hi)
                d_mid = central_difference(fn, mid)
                if np.sign(d_mid) == np.sign(d_lo):
                    lo, d_lo = mid, d_mid
                else:
                    hi = mid
            x0 = 0.5 * (lo + hi)
            curvature = _second_difference(fn, x0)
            if curvature == 0.0:
                kind = "min" if signs[prev] < 0 else "max"
            else:
                kind = "min" if curvature > 0 else "max"
            roots.append((float(x0), kind))
        prev = k
    return roots


def find_extremal_lambda(a, b, psi, perp: PerpArg = None, grid: GridSpec | None = None) -> list[tuple[float, str]]:
    """Stationary points of the error function ``f(lam)``."""
    return find_extrema(lambda x: error_function(a, b, psi, x, perp), grid or GridSpec())


def is_equilibrium(a, b, psi, perp: PerpArg = None, tol: float = 1e-6) -> bool:
    """True when ``L2'(1)`` matches ``dA^2 - dB^2``, i.e. ``f'(1) = 0``."""
    if not tol > 0:
        raise UsageError("tol must be positive")
    slope = central_difference(lambda x: l2_value(a, b, psi, x, perp), 1.0)
    return abs(slope - (variance(a, psi) - variance(b, psi))) <= tol
