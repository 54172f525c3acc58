"""Induced self-map construction, contraction certification and iteration.

Given a map T from A into B whose restriction to A0 lands in B0, each x in A0
has a proximal partner of T(x) back in A0; when that partner is unique the
assignment x -> partner(T(x)) is a self-map of A0 (the *induced map*).  A best
proximity point of T is exactly a fixed point of the induced map, so the
solver is a plain Picard iteration, certified by an empirically measured
contraction constant:

    alpha_hat = max over distinct x1, x2 in A0 of d(S(x1), S(x2)) / d(x1, x2)

Two iteration schemes are provided and must agree step for step:

* :func:`banach_iterate` walks the prebuilt induced-map table;
* :func:`direct_iterate` re-derives each successor by scanning A for the
  proximal partner of T(x_k), without building the table.

Ambiguity is never resolved silently: a point with two proximal partners is a
hypothesis failure (it forces alpha >= 1) and is surfaced with both witnesses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import PairGeometry, SetPair
from .metric import distance, pairwise_distances

CONTRACTION = "contraction"
NOT_CONTRACTION = "not-contraction"

CONVERGED = "converged"
MAX_ITERATIONS = "max-iterations"
CYCLE_DETECTED = "cycle-detected"

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITER = 10_000


class SolverError(Exception):
    """Base class for hypothesis and iteration failures."""


class HypothesisViolation(SolverError):
    """T(A0) is not contained in B0: some image has no proximal partner in A.

    ``partial_indices`` holds the iterate prefix when raised mid-iteration.
    """

    def __init__(self, a_index: int, b_index: int):
        self.a_index = a_index
        self.b_index = b_index
        self.partial_indices: tuple[int, ...] = ()
        super().__init__(
            f"T(A0) ⊄ B0: image of A[{a_index}] (= B[{b_index}]) has no "
            "proximal partner in A"
        )


class NonUniquePartner(SolverError):
    """Two distinct proximal partners found for one image.

    A proximal contraction forces partners of a common image to coincide, so
    ambiguity signals that the contraction hypothesis fails; both witnesses
    are reported rather than picking one silently.
    """

    def __init__(self, a_index: int, b_index: int, partners: tuple[int, ...]):
        self.a_index = a_index
        self.b_index = b_index
        self.partners = tuple(partners)
        self.partial_indices: tuple[int, ...] = ()
        super().__init__(
            f"non-unique proximal partner: image of A[{a_index}] (= B[{b_index}]) "
            f"pairs with A indices {self.partners}"
        )


class StartNotInA0(SolverError):
    def __init__(self, start):
        self.start = start
        super().__init__(f"start point {start!r} is not in A0")


class MaxIterationsExceeded(SolverError):
    """Iteration budget exhausted; ``trace`` holds everything computed."""

    def __init__(self, trace: "IterationTrace"):
        self.trace = trace
        super().__init__(f"no convergence within {len(trace.indices) - 1} iterations")


@dataclass(frozen=True)
class ProximityMap:
    """T : A -> B as an index table: image[i] is the B-position of T(A[i])."""

    image: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "image", tuple(int(v) for v in self.image))

    def validate(self, sp: SetPair) -> None:
        if len(self.image) != len(sp.a):
            raise ValueError(
                f"map must be total on A: {len(self.image)} entries for {len(sp.a)} points"
            )
        for i, v in enumerate(self.image):
            if not 0 <= v < len(sp.b):
                raise ValueError(f"map entry {i} -> {v} is outside B (size {len(sp.b)})")


@dataclass(frozen=True)
class InducedMap:
    """The self-map of A0 sending x to the unique proximal partner of T(x)."""

    geometry: PairGeometry
    t_map: ProximityMap
    table: dict[int, int]

    def __call__(self, a_index: int) -> int:
        return self.table[a_index]


@dataclass(frozen=True)
class ContractionCertificate:
    """Empirical contraction constant over all distinct pairs examined.

    ``witness`` is the pair of A indices attaining ``alpha_hat`` (ties broken
    by the lexicographically smallest index pair); re-evaluating the ratio at
    the witness reproduces ``alpha_hat``.
    """

    alpha_hat: float
    witness: tuple[int, int] | None
    pair_count: int
    verdict: str
    scope: str = "a0"


@dataclass(frozen=True)
class IterationTrace:
    indices: tuple[int, ...]
    points: tuple
    step_gaps: tuple[float, ...]
    residuals: tuple[float, ...]
    a_priori_bounds: tuple[float, ...]
    alpha_hat: float
    stop_reason: str


@dataclass(frozen=True)
class BestProximityResult:
    index: int
    point: object
    residual: float
    iterations: int
    trace: IterationTrace
    guaranteed: bool


def build_induced_map(geom: PairGeometry, t_map: ProximityMap) -> InducedMap:
    """Resolve the unique proximal partner of T(x) for every x in A0.

    Raises :class:`HypothesisViolation` when some image has no partner (so
    T(A0) is not inside B0) and :class:`NonUniquePartner` on ambiguity.
    """
    t_map.validate(geom.pair)
    table: dict[int, int] = {}
    for i in geom.a0:
        img = t_map.image[i]
        partners = geom.partners_in_a(img)
        if not partners:
            raise HypothesisViolation(i, img)
        if len(partners) > 1:
            raise NonUniquePartner(i, img, partners)
        table[i] = partners[0]
    return InducedMap(geometry=geom, t_map=t_map, table=table)


def defining_defect(induced: InducedMap) -> float:
    """max over A0 of | d(S(x), T(x)) - d(A,B) |, the induced-map residual."""
    geom = induced.geometry
    sp = geom.pair
    worst = 0.0
    for i, j in induced.table.items():
        d = distance(sp.metric, sp.a[j], sp.b[induced.t_map.image[i]])
        worst = max(worst, abs(d - geom.pair_distance))
    return worst


def _max_ratio(sp: SetPair, mapping: dict[int, int]):
    """Max of d(S(x1), S(x2)) / d(x1, x2) over distinct keys of ``mapping``.

    Returns (alpha_hat, witness, pair_count).  The scan is exhaustive; ties
    pick the first pair in lexicographic key order.
    """
    keys = sorted(mapping)
    n = len(keys)
    if n < 2:
        return 0.0, None, 0
    src = [sp.a[i] for i in keys]
    dst = [sp.a[mapping[i]] for i in keys]
    den = pairwise_distances(sp.metric, src, src)
    num = pairwise_distances(sp.metric, dst, dst)
    iu = np.triu_indices(n, k=1)
    ratios = num[iu] / den[iu]
    best = int(np.argmax(ratios))
    witness = (keys[int(iu[0][best])], keys[int(iu[1][best])])
    return float(ratios[best]), witness, len(ratios)


def certify_contraction(induced: InducedMap, *, wide: bool = False) -> ContractionCertificate:
    """Exhaustively measure the contraction constant of the induced map.

    The default scope is A0, which is what the fixed-point argument needs.
    ``wide=True`` additionally ranges over all of A, taking every proximal
    partner combination of the two images; an image with several partners then
    yields an infinite ratio (the partners disagree at zero cost), matching
    the fact that ambiguity already falsifies the contraction property.
    """
    geom = induced.geometry
    sp = geom.pair
    if not wide:
        alpha, witness, pairs = _max_ratio(sp, induced.table)
        verdict = CONTRACTION if alpha < 1.0 else NOT_CONTRACTION
        return ContractionCertificate(alpha, witness, pairs, verdict, scope="a0")

    partnered = {
        i: geom.partners_in_a(induced.t_map.image[i])
        for i in range(len(sp.a))
        if geom.partners_in_a(induced.t_map.image[i])
    }
    alpha, witness, pairs = 0.0, None, 0
    idxs = sorted(partnered)
    for pos, i in enumerate(idxs):
        if len(partnered[i]) > 1:
            return ContractionCertificate(
                math.inf, (i, i), pairs, NOT_CONTRACTION, scope="full"
            )
        for j in idxs[pos + 1 :]:
            den = distance(sp.metric, sp.a[i], sp.a[j])
            for u in partnered[i]:
                for v in partnered[j]:
                    ratio = distance(sp.metric, sp.a[u], sp.a[v]) / den
                    pairs += 1
                    if ratio > alpha:
                        alpha, witness = ratio, (i, j)
    verdict = CONTRACTION if alpha < 1.0 else NOT_CONTRACTION
    return ContractionCertificate(alpha, witness, pairs, verdict, scope="full")


def _resolve_start(geom: PairGeometry, x0) -> int:
    """Accept an A-position or (for coordinate spaces) a literal point."""
    sp = geom.pair
    if isinstance(x0, int) and not isinstance(x0, bool):
        if not 0 <= x0 < len(sp.a):
            raise ValueError(f"start index {x0} outside A (size {len(sp.a)})")
        idx = x0
    else:
        probe = tuple(float(c) for c in x0)
        try:
            idx = sp.a.index(probe)
        except ValueError:
            raise ValueError(f"start point {probe!r} is not a point of A") from None
    if idx not in set(geom.a0):
        raise StartNotInA0(sp.a[idx])
    return idx


def _partner_scan_alpha(geom: PairGeometry, t_map: ProximityMap):
    """Contraction constant over the single-partner part of A0 (non-raising).

    Where every image has exactly one partner this equals the certificate of
    the induced map, which keeps the two iteration schemes stopping at the
    same step; ill-defined points are simply left out and will raise when an
    iteration actually reaches them.
    """
    single = {}
    for i in geom.a0:
        partners = geom.partners_in_a(t_map.image[i])
        if len(partners) == 1:
            single[i] = partners[0]
    alpha, witness, _ = _max_ratio(geom.pair, single)
    return alpha, witness


def _iterate(geom, t_map, step, start_idx, alpha_hat, tol, max_iter):
    if tol <= 0:
        raise ValueError("tol must be > 0")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    sp = geom.pair
    indices = [start_idx]
    gaps: list[float] = []
    visited = {start_idx}
    cur = start_idx
    reason = None
    threshold = None
    if alpha_hat < 1.0:
        threshold = tol * (1.0 - alpha_hat) / max(alpha_hat, tol)
    for _ in range(max_iter):
        try:
            nxt = step(cur)
        except (HypothesisViolation, NonUniquePartner) as err:
            err.partial_indices = tuple(indices)
            raise
        indices.append(nxt)
        gaps.append(distance(sp.metric, sp.a[cur], sp.a[nxt]))
        if nxt == cur:
            reason = CONVERGED
            break
        if threshold is not None and gaps[-1] <= threshold:
            reason = CONVERGED
            break
        if nxt in visited:
            reason = CYCLE_DETECTED
            break
        visited.add(nxt)
        cur = nxt
    if reason is None:
        reason = MAX_ITERATIONS
    trace = _build_trace(geom, t_map, indices, gaps, alpha_hat, reason)
    if reason == MAX_ITERATIONS:
        raise MaxIterationsExceeded(trace)
    last = indices[-1]
    return BestProximityResult(
        index=last,
        point=sp.a[last],
        residual=trace.residuals[-1],
        iterations=len(indices) - 1,
        trace=trace,
        guaranteed=(alpha_hat < 1.0 and reason == CONVERGED),
    )


def _build_trace(geom, t_map, indices, gaps, alpha_hat, reason) -> IterationTrace:
    sp = geom.pair
    residuals = tuple(
        abs(distance(sp.metric, sp.a[i], sp.b[t_map.image[i]]) - geom.pair_distance)
        for i in indices
    )
    bounds: tuple[float, ...] = ()
    if alpha_hat < 1.0 and gaps:
        scale = gaps[0] / (1.0 - alpha_hat)
        bounds = tuple(scale * alpha_hat**k for k in range(len(indices)))
    return IterationTrace(
        indices=tuple(indices),
        points=tuple(sp.a[i] for i in indices),
        step_gaps=tuple(gaps),
        residuals=residuals,
        a_priori_bounds=bounds,
        alpha_hat=alpha_hat,
        stop_reason=reason,
    )


def banach_iterate(
    induced: InducedMap,
    x0,
    *,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    certificate: ContractionCertificate | None = None,
) -> BestProximityResult:
    """Picard iteration x_{k+1} = S(x_k) on the prebuilt induced map.

    Stops at an exact fixed point (finite spaces reach one), or when the step
    gap guarantees d(x_k, z) <= tol under the certified constant, or when a
    revisited point reveals a cycle (possible only without a contraction
    certificate; the result is then stamped unguaranteed).  Exhausting the
    budget raises :class:`MaxIterationsExceeded` with the full trace.
    """
    geom = induced.geometry
    start = _resolve_start(geom, x0)
    cert = certificate if certificate is not None else certify_contraction(induced)
    return _iterate(
        geom, induced.t_map, lambda i: induced.table[i], start, cert.alpha_hat, tol, max_iter
    )


def direct_iterate(
    geom: PairGeometry,
    t_map: ProximityMap,
    x0,
    *,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> BestProximityResult:
    """Iterate by solving d(x_{k+1}, T(x_k)) = d(A,B) afresh at every step.

    No induced-map table is built: each successor is found by scanning A for
    the proximal partner of the current image, raising at the offending step
    (with the iterate prefix attached) if the partner is missing or ambiguous.
    On instances where the induced map exists this produces the exact same
    index sequence as :func:`banach_iterate`.
    """
    t_map.validate(geom.pair)
    start = _resolve_start(geom, x0)
    alpha_hat, _ = _partner_scan_alpha(geom, t_map)

    def step(i: int) -> int:
        img = t_map.image[i]
        partners = geom.partners_in_a(img)
        if not partners:
            raise HypothesisViolation(i, img)
        if len(partners) > 1:
            raise NonUniquePartner(i, img, partners)
        return partners[0]

    return _iterate(geom, t_map, step, start, alpha_hat, tol, max_iter)


@dataclass(frozen=True)
class ResultCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[ResultCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def verify_result(
    result: BestProximityResult,
    geom: PairGeometry,
    t_map: ProximityMap,
    *,
    tol: float = DEFAULT_TOL,
    induced: InducedMap | None = None,
) -> VerificationReport:
    """Audit a solve independently of how it was produced.

    Checks the residual against ``tol`` (boundary inclusive), the exact lower
    bound d(z, T(z)) >= d(A,B), and -- when an induced map is supplied -- that
    z is literally a fixed point of its table.
    """
    sp = geom.pair
    z = result.index
    d_img = distance(sp.metric, sp.a[z], sp.b[t_map.image[z]])
    residual = abs(d_img - geom.pair_distance)
    checks = [
        ResultCheck(
            "residual-within-tol",
            residual <= tol,
            f"|d(z,T(z)) - d(A,B)| = {residual} (tol {tol})",
        ),
        ResultCheck(
            "lower-bound",
            d_img >= geom.pair_distance,
            f"d(z,T(z)) = {d_img} >= d(A,B) = {geom.pair_distance}",
        ),
    ]
    if induced is not None:
        fixed = induced.table.get(z) == z
        checks.append(ResultCheck("fixed-point", fixed, f"S(z) = A[{induced.table.get(z)}]"))
    return VerificationReport(tuple(checks))
