"""Weighted variance-based uncertainty relations for finite-dimensional observables."""

from .errors import NumericError, PreconditionError, UncertaintyError, UsageError
from .multi_bounds import MultiInstance, l0, lemma1, lij, multi_parallelogram_residual, theorem7
from .pair_bounds import (
    amended_hr,
    corollary1,
    derived_sum_bound,
    l1,
    l1_saturating_perps,
    l2,
    l2_saturating_perp,
    mp1,
    mp2,
    parallelogram_residual,
    remark1,
    robertson,
    schrodinger,
    theorem3,
    theorem4,
)
from .report import BoundReport
from .states import Degenerate, Observable, PerpChoice, PureState, variance

__all__ = [
    "BoundReport", "Degenerate", "MultiInstance", "NumericError", "Observable", "PerpChoice",
    "PreconditionError", "PureState", "UncertaintyError", "UsageError", "amended_hr", "corollary1",
    "derived_sum_bound", "l0", "l1", "l1_saturating_perps", "l2", "l2_saturating_perp", "lemma1",
    "lij", "mp1", "mp2", "multi_parallelogram_residual", "parallelogram_residual", "remark1",
    "robertson", "schrodinger", "theorem3", "theorem4", "theorem7", "variance",
]
