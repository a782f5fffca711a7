"""Command-line entry point: ``wur bounds | sweep | fuzz | instance``.

Exit codes: 0 success, 1 fuzz violation, 2 usage, 3 precondition or
unwritable output, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import figures, fuzz
from . import multi_bounds as mb
from . import pair_bounds as pb
from .errors import NumericError, PreconditionError, UncertaintyError, UsageError
from .instance import ProblemInstance, instance_to_dict, load_instance, vector_payload
from .report import BoundReport
from .sampling import JX, JY, JZ, SIGMA_X, SIGMA_Y, spin1_state
from .search import GridSpec
from .states import PerpChoice, PureState

PAIR_BOUNDS = ("robertson", "schrodinger", "mp1", "mp2", "ahr", "l1", "l2", "t3", "t4", "c1", "r1", "derived")
MULTI_BOUNDS = ("lemma1", "l0", "lij", "t7")


def _floats(text: str, what: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad {what} {text!r}") from exc


def parse_perp(text: str | None, inst: ProblemInstance):
    """Perp flag grammar.

    ``saturating``; ``file`` (the instance's own perp); ``vaidman`` (sum of
    the selected observables) or ``vaidman:NAME[+NAME...]``;
    ``explicit:eK`` (basis ket ``|K>``, zero-based); ``basis:K``
    (complete ``|K>`` against psi); ``optimal:NAME``.
    """
    if text is None:
        return inst.perp
    mode, _, arg = text.partition(":")
    if mode == "saturating" and not arg:
        return None
    if mode == "file" and not arg:
        if not inst.perp_spec:
            raise UsageError("--perp file given but the instance has no perp")
        return inst.perp
    if mode == "vaidman":
        names = arg.split("+") if arg else None
        return ("vaidman", names)
    if mode == "explicit" and arg.startswith("e"):
        return PerpChoice.explicit(PureState.basis(inst.dim, _index(arg[1:], inst.dim)))
    if mode == "basis" and arg:
        return PerpChoice.basis_completion(_index(arg, inst.dim))
    if mode == "optimal" and arg:
        return PerpChoice.optimal(inst.observable(arg).matrix)
    raise UsageError(f"bad --perp {text!r}")


def _index(text: str, dim: int) -> int:
    try:
        k = int(text)
    except ValueError as exc:
        raise UsageError(f"bad basis index {text!r}") from exc
    if not 0 <= k < dim:
        raise UsageError(f"basis index {k} out of range for dim {dim}")
    return k


def _finish_perp(perp, selected):
    """Resolve a deferred ``vaidman`` perp once the observables are known."""
    if isinstance(perp, tuple) and perp[0] == "vaidman":
        names = perp[1]
        mats = [o.matrix for o in selected if names is None or o.name in names]
        if names is not None and len(mats) != len(set(names)):
            raise UsageError(f"vaidman perp names {names} not all among the selected observables")
        return PerpChoice.vaidman(sum(mats))
    return perp


def _select(inst: ProblemInstance, names: str | None, count: int | None):
    if names:
        chosen = [inst.observable(n) for n in names.split(",")]
    else:
        chosen = list(inst.observables)
    if count is not None:
        if len(chosen) < count:
            raise UsageError(f"bound needs {count} observables, instance has {len(chosen)}")
        chosen = chosen[:count]
    return chosen


def _weights(args, inst: ProblemInstance, n: int):
    if args.weights:
        w = _floats(args.weights, "--weights")
    else:
        w = list(inst.weights)
    if w and len(w) != n:
        raise UsageError(f"{len(w)} weights for {n} observables")
    return w


def _pair(text: str | None, n: int) -> tuple[int, int]:
    if text is None:
        raise UsageError("--pair i,j is required for lij")
    try:
        i, j = (int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad --pair {text!r}") from exc
    if not 1 <= i < j <= n:
        raise UsageError(f"--pair needs 1 <= i < j <= {n}, got {text!r}")
    return i - 1, j - 1


def compute_bound(args, inst: ProblemInstance) -> BoundReport:
    perp = parse_perp(args.perp, inst)
    psi = inst.psi
    lam = args.lam
    if args.bound in MULTI_BOUNDS:
        obs = _select(inst, args.observables, None)
        perp = _finish_perp(perp, obs)
        m = mb.MultiInstance(tuple(obs), psi, tuple(_weights(args, inst, len(obs))))
        if args.bound == "lemma1":
            return mb.lemma1(m)
        if args.bound == "l0":
            return mb.l0(m, perp)
        if args.bound == "lij":
            return mb.lij(m, _pair(args.pair, m.n), perp, args.lij_mode)
        return mb.theorem7(m, perp, perp)

    a, b = _select(inst, args.observables, 2)
    perp = _finish_perp(perp, (a, b))
    if args.bound == "robertson":
        return pb.robertson(a, b, psi)
    if args.bound == "schrodinger":
        return pb.schrodinger(a, b, psi)
    if args.bound == "mp1":
        return pb.mp1(a, b, psi, perp)
    if args.bound == "mp2":
        return pb.mp2(a, b, psi)
    if args.bound == "ahr":
        return pb.amended_hr(a, b, psi, perp)
    if args.bound == "l1":
        return pb.l1(a, b, psi, lam, perp, perp)
    if args.bound == "l2":
        return pb.l2(a, b, psi, lam, perp)
    if args.bound == "t3":
        return pb.theorem3(a, b, psi, lam, perp, perp, perp)
    if args.bound == "t4":
        w = _weights(args, inst, 2) if (args.weights or len(inst.weights) == 2) else []
        if not w:
            raise UsageError("t4 needs two weights via --weights x,y or the instance")
        return pb.theorem4(a, b, psi, w[0], w[1], perp)
    if args.bound == "c1":
        grid = GridSpec.parse(args.lambda_range) if args.lambda_range else None
        return pb.corollary1(a, b, psi, perp, grid)
    if args.bound == "r1":
        return pb.remark1(a, b, psi, perp, args.terms)
    lam2 = args.lambda2 if args.lambda2 is not None else lam
    if args.k == 1:
        return pb.derived_sum_bound(a, b, psi, lam, lam2, k=1, perp1=perp, perp2=perp)
    return pb.derived_sum_bound(a, b, psi, lam, lam2, k=2, perp=perp)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    if isinstance(x, float) and not math.isfinite(x):
        raise NumericError(f"non-finite value {x!r} in report")
    return x


def cmd_bounds(args) -> int:
    inst = load_instance(args.input)
    report = compute_bound(args, inst)
    if args.json:
        print(json.dumps(_jsonable(report.to_dict()), allow_nan=False))
    else:
        print(report.format())
    return 0


def cmd_sweep(args) -> int:
    if args.figure == 3:
        if args.theta is None:
            raise UsageError("--figure 3 needs --theta")
        grid = GridSpec.parse(args.lambda_range or "0.1:10:200")
        rows, cols = figures.lambda_sweep(args.theta, grid), figures.LAMBDA_COLUMNS
    else:
        rows, cols = figures.theta_sweep(args.figure, args.theta_steps), figures.THETA_COLUMNS
    try:
        with open(args.out, "w", newline="") as fh:
            figures.write_csv(rows, cols, fh)
    except OSError as exc:
        raise PreconditionError(f"cannot write {args.out}: {exc}") from exc
    return 0


def cmd_fuzz(args) -> int:
    result = fuzz.run(args.trials, args.seed, args.dim_max, args.n_max, args.relation, args.start)
    print(result.summary())
    return 0 if result.ok else 1


def format_instance(doc: dict) -> str:
    """One JSON line per matrix row, so fixtures stay readable."""
    lines = ["{", f' "dim": {doc["dim"]},', ' "observables": [']
    for k, od in enumerate(doc["observables"]):
        rows = ",\n    ".join(json.dumps(r) for r in od["matrix"])
        sep = "," if k + 1 < len(doc["observables"]) else ""
        lines.append(f'  {{"name": {json.dumps(od["name"])}, "matrix": [\n    {rows}]}}{sep}')
    lines.append(" ],")
    tail = [f' "state": {json.dumps(doc["state"])}']
    for key in ("weights", "perp"):
        if key in doc:
            tail.append(f' "{key}": {json.dumps(doc[key])}')
    lines.append(",\n".join(tail))
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_instance(args) -> int:
    if args.kind == "spin1":
        doc = instance_to_dict([JX, JY, JZ], np.asarray(spin1_state(args.theta).amplitudes),
                               perp={"mode": "explicit", "payload": vector_payload(np.eye(3)[1])})
    else:
        doc = instance_to_dict([SIGMA_X, SIGMA_Y], np.array([1.0, 0.0]))
    text = format_instance(doc)
    if args.out is None:
        sys.stdout.write(text)
        return 0
    try:
        Path(args.out).write_text(text)
    except OSError as exc:
        raise PreconditionError(f"cannot write {args.out}: {exc}") from exc
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wur", description="Weighted variance uncertainty bounds.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", help="evaluate one bound on a JSON instance")
    b.add_argument("--input", required=True)
    b.add_argument("--bound", required=True, choices=PAIR_BOUNDS + MULTI_BOUNDS)
    b.add_argument("--lambda", dest="lam", type=float, default=1.0)
    b.add_argument("--lambda2", type=float)
    b.add_argument("--k", type=int, choices=(1, 2), default=2, help="which bound feeds 'derived'")
    b.add_argument("--pair", help="1-based i,j for lij")
    b.add_argument("--lij-mode", choices=("others", "disjoint"), default="others")
    b.add_argument("--perp", help="saturating | file | vaidman[:A+B] | explicit:eK | basis:K | optimal:NAME")
    b.add_argument("--observables", help="comma-separated names; pair bounds use the first two")
    b.add_argument("--weights", help="comma-separated weights (t4 and multi bounds)")
    b.add_argument("--lambda-range", help="lo:hi:N grid for c1")
    b.add_argument("--terms", type=int, default=20, help="series terms for r1")
    b.add_argument("--json", action="store_true")
    b.set_defaults(func=cmd_bounds)

    s = sub.add_parser("sweep", help="write figure data as CSV")
    s.add_argument("--figure", type=int, choices=(1, 2, 3), required=True)
    s.add_argument("--theta-steps", type=int, default=400)
    s.add_argument("--theta", type=float)
    s.add_argument("--lambda-range")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_sweep)

    f = sub.add_parser("fuzz", help="check every relation on seeded random instances")
    f.add_argument("--trials", type=int, default=1000)
    f.add_argument("--dim-max", type=int, default=8)
    f.add_argument("--n-max", type=int, default=6)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--start", type=int, default=0, help="first trial index")
    f.add_argument("--relation", action="append", help=f"repeatable; 'all' or one of {', '.join(fuzz.RELATIONS)}")
    f.set_defaults(func=cmd_fuzz)

    i = sub.add_parser("instance", help="emit a fixture instance as JSON")
    i.add_argument("kind", choices=("spin1", "pauli"))
    i.add_argument("--theta", type=float, default=0.0)
    i.add_argument("--out")
    i.set_defaults(func=cmd_instance)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UncertaintyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
