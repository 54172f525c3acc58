"""Metric evaluation and metric-axiom validation.

Two space kinds are supported:

* ``euclidean`` -- points are finite real coordinate vectors, distance is the
  usual 2-norm of the difference;
* ``explicit-matrix`` -- points are integer indices into a user-supplied
  symmetric distance table.

Additional coordinate metrics (l1, l-infinity) would slot in behind
:func:`distance` / :func:`pairwise_distances`; only these two kinds are needed
at desk scale.

Everything here is immutable after construction and every function is pure,
so concurrent read-only use is safe.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

EUCLIDEAN = "euclidean"
EXPLICIT_MATRIX = "explicit-matrix"

#: A point is either a coordinate vector (euclidean spaces) or a non-negative
#: index into the distance table (explicit-matrix spaces).
Point = tuple[float, ...] | int

# Matrices up to this many points are validated exhaustively; larger tables
# and coordinate spaces fall back to seeded sampling.
EXHAUSTIVE_LIMIT = 200

# Absolute slack for the sampled triangle check on coordinate spaces.  All
# desk-scale instances have coordinates of magnitude <= 1e3, where accumulated
# rounding stays far below this.  Matrix tables are checked exactly.
TRIANGLE_SLACK = 1e-9


@dataclass(frozen=True)
class Metric:
    """A metric over coordinate vectors or an explicit finite table.

    ``matrix`` must be present exactly when ``kind`` is ``explicit-matrix``;
    it is stored as a tuple of tuples so the object stays hashable and
    immutable.  Construction checks only structural shape; run
    :func:`validate_metric` to check the metric axioms themselves.
    """

    kind: str
    matrix: tuple[tuple[float, ...], ...] | None = None

    def __post_init__(self) -> None:
        if self.kind not in (EUCLIDEAN, EXPLICIT_MATRIX):
            raise ValueError(f"unknown metric kind {self.kind!r}")
        if self.kind == EUCLIDEAN:
            if self.matrix is not None:
                raise ValueError("euclidean metric takes no matrix")
            return
        if self.matrix is None:
            raise ValueError("explicit-matrix metric requires a matrix")
        rows = tuple(tuple(float(v) for v in row) for row in self.matrix)
        if not rows or any(len(row) != len(rows) for row in rows):
            raise ValueError("distance matrix must be square and nonempty")
        object.__setattr__(self, "matrix", rows)

    @property
    def size(self) -> int:
        """Cardinality of an explicit space (undefined for euclidean)."""
        if self.matrix is None:
            raise ValueError("euclidean metric has no fixed cardinality")
        return len(self.matrix)

    def distance(self, p, q) -> float:
        return distance(self, p, q)


def euclidean_metric() -> Metric:
    return Metric(EUCLIDEAN)


def matrix_metric(matrix: Sequence[Sequence[float]]) -> Metric:
    return Metric(EXPLICIT_MATRIX, tuple(tuple(float(v) for v in row) for row in matrix))


def check_point(metric: Metric, p) -> None:
    """Raise ValueError if ``p`` is not a valid point of ``metric``'s space."""
    if metric.kind == EUCLIDEAN:
        if isinstance(p, (int, bool)) or not isinstance(p, (tuple, list)):
            raise ValueError(f"euclidean point must be a coordinate vector, got {p!r}")
        if len(p) < 1:
            raise ValueError("euclidean point needs dimension >= 1")
        for c in p:
            if not math.isfinite(c):
                raise ValueError(f"non-finite coordinate in point {p!r}")
    else:
        if isinstance(p, bool) or not isinstance(p, int):
            raise ValueError(f"matrix-space point must be an integer index, got {p!r}")
        if not 0 <= p < metric.size:
            raise ValueError(f"point index {p} out of range for {metric.size}-point space")


def distance(metric: Metric, p, q) -> float:
    """Evaluate d(p, q).

    The euclidean path accumulates squared differences left-to-right, which is
    bitwise identical to the vectorized path in :func:`pairwise_distances` for
    desk-scale dimensions.
    """
    if metric.kind == EUCLIDEAN:
        if len(p) != len(q):
            raise ValueError(f"dimension mismatch: {len(p)} vs {len(q)}")
        s = 0.0
        for a, b in zip(p, q):
            d = a - b
            s += d * d
        return math.sqrt(s)
    n = metric.size
    if not (0 <= p < n and 0 <= q < n):
        raise ValueError(f"index out of range for {n}-point space: ({p}, {q})")
    return metric.matrix[p][q]


def pairwise_distances(metric: Metric, ps: Sequence, qs: Sequence) -> np.ndarray:
    """Dense |ps| x |qs| distance table, exactly matching :func:`distance`."""
    if metric.kind == EUCLIDEAN:
        a = np.asarray(ps, dtype=float)
        b = np.asarray(qs, dtype=float)
        if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[1]:
            raise ValueError("coordinate arrays must share one dimension")
        diff = a[:, None, :] - b[None, :, :]
        return np.sqrt((diff * diff).sum(axis=-1))
    table = np.asarray(metric.matrix, dtype=float)
    ia = np.asarray(ps, dtype=int)
    ib = np.asarray(qs, dtype=int)
    return table[np.ix_(ia, ib)]


@dataclass(frozen=True)
class AxiomCheck:
    """Outcome of one axiom: ``witness`` names the offending points on failure.

    Witness shapes: symmetry/nonnegativity -> (i, j); identity -> (i,);
    triangle -> (i, j, k) meaning d(i,j) > d(i,k) + d(k,j).
    """

    name: str
    passed: bool
    witness: tuple | None = None
    detail: str = ""


@dataclass(frozen=True)
class MetricValidation:
    checks: tuple[AxiomCheck, ...]
    exhaustive: bool
    samples: int

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> tuple[AxiomCheck, ...]:
        return tuple(c for c in self.checks if not c.passed)

    def check(self, name: str) -> AxiomCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def validate_metric(
    metric: Metric,
    sample_budget: int = 1000,
    *,
    points: Sequence | None = None,
    dimension: int = 2,
    seed: int = 0,
) -> MetricValidation:
    """Check symmetry, identity, nonnegativity and the triangle inequality.

    Explicit matrices up to ``EXHAUSTIVE_LIMIT`` points are scanned
    exhaustively and exactly; witnesses are the lexicographically first
    violations.  Larger tables and coordinate spaces are sampled with a seeded
    generator so reports are reproducible.  For coordinate spaces, ``points``
    supplies the sample pool (random points of ``dimension`` are drawn
    otherwise), and the triangle check allows ``TRIANGLE_SLACK`` absolute
    rounding slack.

    Failure is a report outcome, never an exception.
    """
    if sample_budget < 1:
        raise ValueError("sample_budget must be >= 1")
    if metric.kind == EXPLICIT_MATRIX and metric.size <= EXHAUSTIVE_LIMIT:
        return _validate_matrix_exhaustive(metric)
    if metric.kind == EXPLICIT_MATRIX:
        pool = list(range(metric.size))
        return _validate_sampled(metric, pool, sample_budget, seed, exact=True)
    rng = random.Random(seed)
    if points:
        pool = [tuple(float(c) for c in p) for p in points]
    else:
        pool = [
            tuple(rng.uniform(-100.0, 100.0) for _ in range(dimension))
            for _ in range(max(3, min(sample_budget, 64)))
        ]
    return _validate_sampled(metric, pool, sample_budget, seed, exact=False)


def _validate_matrix_exhaustive(metric: Metric) -> MetricValidation:
    m = np.asarray(metric.matrix, dtype=float)
    n = len(m)

    sym_w = None
    bad = np.argwhere(m != m.T)
    if len(bad):
        i, j = (int(v) for v in bad[0])
        sym_w = (min(i, j), max(i, j))
    symmetry = AxiomCheck(
        "symmetry",
        sym_w is None,
        sym_w,
        "" if sym_w is None else f"d{sym_w} = {m[sym_w]} but d{sym_w[::-1]} = {m[sym_w[::-1]]}",
    )

    diag = np.flatnonzero(np.diagonal(m) != 0.0)
    ident_w = (int(diag[0]),) if len(diag) else None
    identity = AxiomCheck(
        "identity",
        ident_w is None,
        ident_w,
        "" if ident_w is None else f"d({ident_w[0]},{ident_w[0]}) = {m[ident_w[0], ident_w[0]]} != 0",
    )

    neg = np.argwhere(m < 0.0)
    neg_w = tuple(int(v) for v in neg[0]) if len(neg) else None
    nonneg = AxiomCheck(
        "nonnegativity",
        neg_w is None,
        neg_w,
        "" if neg_w is None else f"d{neg_w} = {m[neg_w]} < 0",
    )

    tri_w = None
    off = ~np.eye(n, dtype=bool)
    for i in range(n):
        # viol[j, k] <=> d(i,j) > d(i,k) + d(k,j); scan order matches the
        # lexicographic (i, j, k) loop, so the first hit is the witness.
        viol = m[i][:, None] > m[i][None, :] + m.T
        viol[i, :] = False
        viol[:, i] = False
        viol &= off.T
        hits = np.argwhere(viol)
        if len(hits):
            j, k = (int(v) for v in hits[0])
            tri_w = (i, j, k)
            break
    triangle = AxiomCheck(
        "triangle",
        tri_w is None,
        tri_w,
        ""
        if tri_w is None
        else (
            f"d({tri_w[0]},{tri_w[1]}) = {m[tri_w[0], tri_w[1]]} > "
            f"{m[tri_w[0], tri_w[2]]} + {m[tri_w[2], tri_w[1]]} via {tri_w[2]}"
        ),
    )

    return MetricValidation(
        checks=(symmetry, identity, nonneg, triangle),
        exhaustive=True,
        samples=n * n * n,
    )


def _validate_sampled(
    metric: Metric, pool: list, budget: int, seed: int, exact: bool
) -> MetricValidation:
    rng = random.Random(seed)
    slack = 0.0 if exact else TRIANGLE_SLACK
    sym_w = ident_w = neg_w = tri_w = None
    sym_d = ident_d = neg_d = tri_d = ""
    for _ in range(budget):
        p, q, r = (rng.choice(pool) for _ in range(3))
        dpq, dqp = distance(metric, p, q), distance(metric, q, p)
        if sym_w is None and dpq != dqp:
            sym_w, sym_d = (p, q), f"d(p,q) = {dpq} but d(q,p) = {dqp}"
        if ident_w is None and distance(metric, p, p) != 0.0:
            ident_w, ident_d = (p,), f"d(p,p) = {distance(metric, p, p)} != 0"
        if neg_w is None and dpq < 0.0:
            neg_w, neg_d = (p, q), f"d(p,q) = {dpq} < 0"
        dpr, dqr = distance(metric, p, r), distance(metric, q, r)
        if tri_w is None and dpr > dpq + dqr + slack:
            tri_w, tri_d = (p, r, q), f"d(p,r) = {dpr} > {dpq} + {dqr} via q"
    return MetricValidation(
        checks=(
            AxiomCheck("symmetry", sym_w is None, sym_w, sym_d),
            AxiomCheck("identity", ident_w is None, ident_w, ident_d),
            AxiomCheck("nonnegativity", neg_w is None, neg_w, neg_d),
            AxiomCheck("triangle", tri_w is None, tri_w, tri_d),
        ),
        exhaustive=False,
        samples=budget,
    )
