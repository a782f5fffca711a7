"""JSON problem instances.

Layout::

    {
      "dim": 3,
      "observables": [{"name": "Jx", "matrix": [[[re, im], ...], ...]}, ...],
      "state": [[re, im], ...],
      "weights": [1.0, 2.0, ...],                  # optional
      "perp": {"mode": "explicit", "payload": ...}  # optional
    }

Complex numbers are ``[re, im]`` pairs. Perp modes are ``explicit``
(payload: vector), ``basis_completion`` (payload: index), ``vaidman``
(payload: observable name or list of names to sum), ``optimal`` (payload:
matrix) and ``saturating`` (no payload). Observables must be Hermitian to
1e-10 and the state normalized to 1e-10.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import UsageError
from .states import Observable, PerpChoice, PureState


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    observables: tuple[Observable, ...]
    psi: PureState
    weights: tuple[float, ...] = ()
    perp: PerpChoice | None = None
    perp_spec: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.psi.dim

    def observable(self, name: str) -> Observable:
        for o in self.observables:
            if o.name == name:
                return o
        raise UsageError(f"no observable named {name!r}; have {[o.name for o in self.observables]}")


def _complex_array(data, what: str) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{what}: expected nested [re, im] pairs") from exc
    if arr.ndim == 0 or arr.shape[-1] != 2:
        raise UsageError(f"{what}: innermost entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def _pairs(arr: np.ndarray) -> list:
    if arr.ndim == 1:
        return [[float(z.real), float(z.imag)] for z in arr]
    return [_pairs(row) for row in arr]


def _parse_perp(entry: dict | None, observables) -> PerpChoice | None:
    if not entry:
        return None
    mode = entry.get("mode")
    payload = entry.get("payload")
    if mode == "saturating":
        return None
    if mode == "explicit":
        return PerpChoice.explicit(_complex_array(payload, "perp payload"))
    if mode == "basis_completion":
        return PerpChoice.basis_completion(int(payload))
    if mode == "optimal":
        return PerpChoice.optimal(_complex_array(payload, "perp payload"))
    if mode == "vaidman":
        names = [payload] if isinstance(payload, str) else list(payload or [o.name for o in observables])
        by_name = {o.name: o for o in observables}
        missing = [n for n in names if n not in by_name]
        if missing:
            raise UsageError(f"vaidman perp names unknown observables {missing}")
        return PerpChoice.vaidman(sum(by_name[n].matrix for n in names))
    raise UsageError(f"unknown perp mode {mode!r}")


def parse_instance(doc: dict) -> ProblemInstance:
    if not isinstance(doc, dict):
        raise UsageError("instance must be a JSON object")
    try:
        dim = int(doc["dim"])
        obs_docs = doc["observables"]
        state = doc["state"]
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"instance is missing a required field: {exc}") from exc
    observables = []
    for k, od in enumerate(obs_docs):
        m = _complex_array(od["matrix"], f"observable {k}")
        if m.shape != (dim, dim):
            raise UsageError(f"observable {k} has shape {m.shape}, expected {(dim, dim)}")
        observables.append(Observable(m, od.get("name", f"A{k + 1}")))
    psi_vec = _complex_array(state, "state")
    if psi_vec.shape != (dim,):
        raise UsageError(f"state has shape {psi_vec.shape}, expected {(dim,)}")
    psi = PureState(psi_vec)
    weights = tuple(float(w) for w in doc.get("weights") or ())
    perp_spec = doc.get("perp") or {}
    return ProblemInstance(tuple(observables), psi, weights, _parse_perp(perp_spec, observables), perp_spec)


def load_instance(path: str | Path) -> ProblemInstance:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read instance {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc
    return parse_instance(doc)


def instance_to_dict(observables, psi, weights=(), perp: dict | None = None) -> dict:
    v = np.asarray(psi, dtype=complex)
    doc = {
        "dim": int(v.shape[0]),
        "observables": [{"name": o.name, "matrix": _pairs(np.asarray(o.matrix))} for o in observables],
        "state": _pairs(v),
    }
    if weights:
        doc["weights"] = [float(w) for w in weights]
    if perp:
        doc["perp"] = perp
    return doc


def vector_payload(v) -> list:
    return _pairs(np.asarray(v, dtype=complex))
