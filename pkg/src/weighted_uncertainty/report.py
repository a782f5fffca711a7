"""The structured result returned by every bound."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

SATURATION_TOL = 1e-9


@dataclass(frozen=True)
class BoundReport:
    """Left-hand side, bound and a term-by-term breakdown of one inequality.

    ``bound`` is always the sum of ``terms``. ``slack`` is ``lhs - bound``
    and is non-negative (up to rounding) whenever the relation's
    hypotheses hold. Relations whose two sides are large and nearly equal
    compute the difference in extended precision and pass it as
    ``precise_slack``, which then takes the place of the double-precision
    difference.
    """

    relation: str
    lhs: float
    terms: tuple[tuple[str, float], ...]
    degenerate_flags: tuple[str, ...] = ()
    lam: float | None = None
    sign_used: int | None = None
    extra: dict = field(default_factory=dict)
    precise_slack: float | None = None

    @property
    def bound(self) -> float:
        return math.fsum(v for _, v in self.terms)

    @property
    def slack(self) -> float:
        if self.precise_slack is not None:
            return self.precise_slack
        return self.lhs - self.bound

    @property
    def saturated(self) -> bool:
        return abs(self.slack) <= SATURATION_TOL

    def term(self, label: str) -> float:
        for name, value in self.terms:
            if name == label:
                return value
        raise KeyError(label)

    def to_dict(self) -> dict:
        out = {
            "relation": self.relation,
            "lhs": self.lhs,
            "bound": self.bound,
            "slack": self.slack,
            "saturated": self.saturated,
            "terms": [[k, v] for k, v in self.terms],
            "degenerate_flags": list(self.degenerate_flags),
            "lambda": self.lam,
            "sign_used": self.sign_used,
        }
        if self.extra:
            out["extra"] = self.extra
        return out

    def format(self) -> str:
        lines = [
            f"relation   {self.relation}",
            f"lhs        {self.lhs:.17g}",
            f"bound      {self.bound:.17g}",
            f"slack      {self.slack:.17g}",
            f"saturated  {'yes' if self.saturated else 'no'}",
        ]
        if self.lam is not None:
            lines.append(f"lambda     {self.lam:.17g}")
        if self.sign_used is not None:
            lines.append(f"sign       {self.sign_used:+d}")
        for name, value in self.terms:
            lines.append(f"  term {name}: {value:.17g}")
        for flag in self.degenerate_flags:
            lines.append(f"  degenerate: {flag}")
        for key, value in self.extra.items():
            lines.append(f"  {key}: {value}")
        return "\n".join(lines)
