"""Instance files: the full problem statement (metric, A, B, T) + tolerances.

The on-disk format is JSON with an index-encoded map so fixtures stay
unambiguous and diff-able::

    {
      "metric": {"kind": "euclidean"}              # or {"kind": "explicit-matrix",
                                                   #     "matrix": [[...], ...]}
      "A": [[0.0, 0.0], [0.0, 1.0]],               # matrix spaces: integer indices
      "B": [[1.0, 0.0]],
      "T": [0, 0],                                 # B-position of T(A[i])
      "tolerances": {"eps_prox": 0.0, "tol": 1e-9},
      "alpha": 0.5                                 # optional declared constant
    }

Saving is canonical (sorted keys, fixed indentation, normalized floats), so
load/save round-trips are idempotent byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

from .engine import DEFAULT_TOL, ProximityMap
from .geometry import SetPair, default_eps_prox
from .metric import EUCLIDEAN, EXPLICIT_MATRIX, Metric


class InstanceFormatError(ValueError):
    """A structurally invalid instance file (wrong shape, indices, map)."""


@dataclass(frozen=True)
class Instance:
    pair: SetPair
    t_map: ProximityMap
    eps_prox: float
    tol: float
    alpha_declared: float | None = None

    @property
    def metric(self) -> Metric:
        return self.pair.metric

    def with_tolerances(
        self, eps_prox: float | None = None, tol: float | None = None
    ) -> "Instance":
        out = self
        if eps_prox is not None:
            out = replace(out, eps_prox=float(eps_prox))
        if tol is not None:
            out = replace(out, tol=float(tol))
        return out


def make_instance(
    metric: Metric,
    a,
    b,
    t_image,
    *,
    eps_prox: float | None = None,
    tol: float = DEFAULT_TOL,
    alpha_declared: float | None = None,
) -> Instance:
    """Assemble and validate an instance from in-memory pieces."""
    pair = SetPair(metric, tuple(a), tuple(b))
    t_map = ProximityMap(tuple(t_image))
    t_map.validate(pair)
    if eps_prox is None:
        eps_prox = default_eps_prox(metric)
    if eps_prox < 0:
        raise ValueError("eps_prox must be >= 0")
    if tol <= 0:
        raise ValueError("tol must be > 0")
    return Instance(pair, t_map, float(eps_prox), float(tol), alpha_declared)


def _fail(field: str, problem: str) -> InstanceFormatError:
    return InstanceFormatError(f"field {field!r}: {problem}")


def _parse_metric(payload) -> Metric:
    if not isinstance(payload, dict):
        raise _fail("metric", "must be an object")
    kind = payload.get("kind")
    if kind == EUCLIDEAN:
        if "matrix" in payload:
            raise _fail("metric.matrix", "euclidean metric takes no matrix")
        return Metric(EUCLIDEAN)
    if kind == EXPLICIT_MATRIX:
        matrix = payload.get("matrix")
        if not isinstance(matrix, list) or not matrix:
            raise _fail("metric.matrix", "required nonempty array of rows")
        try:
            return Metric(EXPLICIT_MATRIX, tuple(tuple(row) for row in matrix))
        except (TypeError, ValueError) as err:
            raise _fail("metric.matrix", str(err)) from None
    raise _fail("metric.kind", f"must be {EUCLIDEAN!r} or {EXPLICIT_MATRIX!r}, got {kind!r}")


def _parse_points(metric: Metric, payload, field: str):
    if not isinstance(payload, list) or not payload:
        raise _fail(field, "must be a nonempty array of points")
    pts = []
    for pos, item in enumerate(payload):
        if metric.kind == EUCLIDEAN:
            if not isinstance(item, list) or not item:
                raise _fail(f"{field}[{pos}]", "euclidean point must be a coordinate array")
            try:
                pts.append(tuple(float(c) for c in item))
            except (TypeError, ValueError):
                raise _fail(f"{field}[{pos}]", f"non-numeric coordinate in {item!r}") from None
        else:
            if isinstance(item, bool) or not isinstance(item, int):
                raise _fail(f"{field}[{pos}]", f"matrix-space point must be an index, got {item!r}")
            pts.append(item)
    return tuple(pts)


def parse_instance(payload) -> Instance:
    """Build an Instance from a decoded JSON object, with field diagnostics."""
    if not isinstance(payload, dict):
        raise InstanceFormatError("top-level value must be an object")
    for required in ("metric", "A", "B", "T"):
        if required not in payload:
            raise _fail(required, "missing")
    metric = _parse_metric(payload["metric"])
    a = _parse_points(metric, payload["A"], "A")
    b = _parse_points(metric, payload["B"], "B")
    t_raw = payload["T"]
    if not isinstance(t_raw, list) or any(
        isinstance(v, bool) or not isinstance(v, int) for v in t_raw
    ):
        raise _fail("T", "must be an array of B indices")

    tolerances = payload.get("tolerances", {})
    if not isinstance(tolerances, dict):
        raise _fail("tolerances", "must be an object")
    eps_prox = tolerances.get("eps_prox")
    tol = tolerances.get("tol", DEFAULT_TOL)
    for name, value in (("eps_prox", eps_prox), ("tol", tol)):
        if value is not None and not isinstance(value, (int, float)):
            raise _fail(f"tolerances.{name}", f"must be a number, got {value!r}")

    alpha = payload.get("alpha")
    if alpha is not None:
        if not isinstance(alpha, (int, float)) or alpha < 0:
            raise _fail("alpha", f"must be a nonnegative number, got {alpha!r}")
        alpha = float(alpha)

    try:
        return make_instance(
            metric,
            a,
            b,
            t_raw,
            eps_prox=eps_prox,
            tol=float(tol),
            alpha_declared=alpha,
        )
    except (TypeError, ValueError) as err:
        if isinstance(err, InstanceFormatError):
            raise
        raise InstanceFormatError(str(err)) from None


def load_instance(path) -> Instance:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except OSError as err:
        raise InstanceFormatError(f"cannot read {path}: {err}") from None
    except json.JSONDecodeError as err:
        raise InstanceFormatError(
            f"invalid JSON at line {err.lineno} column {err.colno}: {err.msg}"
        ) from None
    return parse_instance(payload)


def instance_payload(inst: Instance) -> dict:
    """The canonical JSON-able form of an instance."""
    metric: dict = {"kind": inst.metric.kind}
    if inst.metric.kind == EXPLICIT_MATRIX:
        metric["matrix"] = [list(row) for row in inst.metric.matrix]
    payload = {
        "metric": metric,
        "A": [list(p) if isinstance(p, tuple) else p for p in inst.pair.a],
        "B": [list(p) if isinstance(p, tuple) else p for p in inst.pair.b],
        "T": list(inst.t_map.image),
        "tolerances": {"eps_prox": inst.eps_prox, "tol": inst.tol},
    }
    if inst.alpha_declared is not None:
        payload["alpha"] = inst.alpha_declared
    return payload


def dumps_instance(inst: Instance) -> str:
    return json.dumps(instance_payload(inst), indent=2, sort_keys=True) + "\n"


def save_instance(inst: Instance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_instance(inst))
