"""Cone-valued metrics and the scalar metric they induce.

A :class:`ConeMetricSpace` wraps a user distance ``d_a(x, y)`` with values in
a cone-ordered R^n. Points are opaque: the library only calls ``dist`` and
compares points for equality. Composing with a :class:`Scalarizer` gives the
real-valued metric ``d_e = xi_e o d_a`` (:class:`InducedMetric`).

The ``check_*`` functions verify the axioms and the ball identity
``{d_e(x, .) < r} = {d_a(x, .) << r e}`` on finite samples. They never raise
on a failed clause; failures land in the returned :class:`CheckReport`.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Sequence

import numpy as np

from .cones import TAU_MEM, Cone, archimedean_witness, as_vector
from .report import CheckReport, Counterexample
from .scalarization import Scalarizer

__all__ = [
    "DELTA",
    "DELTA_BAND",
    "TRIPLE_CAP",
    "ConeMetricSpace",
    "InducedMetric",
    "SequenceDiagnostics",
    "check_ball_equality",
    "check_ball_nesting",
    "check_ball_refinement",
    "check_cone_metric_axioms",
    "check_metric_axioms",
    "check_separation",
    "points_equal",
    "sequence_diagnostics",
]

DELTA = 1e-9
DELTA_BAND = 1e-9
TRIPLE_CAP = 10**5


def points_equal(a: Any, b: Any) -> bool:
    """Equality for opaque points that also copes with numpy arrays."""
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return bool(np.array_equal(np.asarray(a), np.asarray(b)))
    return bool(a == b)


@dataclass(frozen=True)
class ConeMetricSpace:
    """A point set with a cone-valued distance.

    ``thread_safe`` declares that ``dist`` may be called concurrently; only
    then are pairwise distance tables filled from a thread pool.
    """

    cone: Cone
    dist: Callable[[Any, Any], Any]
    thread_safe: bool = False
    max_workers: int | None = None

    def d(self, x: Any, y: Any) -> np.ndarray:
        return as_vector(self.dist(x, y), self.cone.dim)

    def table(self, points: Sequence[Any]) -> np.ndarray:
        """All ordered pairwise distances, shape ``(N, N, dim)``."""
        pairs = list(itertools.product(points, repeat=2))
        if self.thread_safe:
            with ThreadPoolExecutor(self.max_workers) as pool:
                vecs = list(pool.map(lambda p: self.d(*p), pairs))
        else:
            vecs = [self.d(x, y) for x, y in pairs]
        n = len(points)
        return np.asarray(vecs).reshape(n, n, self.cone.dim)


@dataclass(frozen=True)
class InducedMetric:
    """The scalar metric ``xi_e(d_a(x, y))``."""

    space: ConeMetricSpace
    scal: Scalarizer

    def __post_init__(self):
        if self.scal.cone != self.space.cone:
            raise ValueError("scalarizer and metric space must share the same cone")

    @property
    def cone(self) -> Cone:
        return self.space.cone

    def distance(self, x: Any, y: Any) -> float:
        return self.scal.xi(self.space.d(x, y))

    __call__ = distance

    def table(self, points: Sequence[Any]) -> np.ndarray:
        T = self.space.table(points)
        n = len(points)
        return self.scal.xi_many(T.reshape(n * n, -1)).reshape(n, n)

    def in_cone_ball(self, center: Any, c: Any, y: Any) -> bool:
        """``d_a(center, y) << c``; ``c`` must be interior."""
        c = as_vector(c, self.cone.dim)
        if not self.cone.contains_interior(c):
            raise ValueError("cone ball radius c must be an algebraic interior point")
        return self.cone.lt_strict(self.space.d(center, y), c)

    def in_metric_ball(self, center: Any, r: float, y: Any) -> bool:
        if r <= 0:
            raise ValueError("radius must be positive")
        return self.distance(center, y) < r


# -- axiom checks -------------------------------------------------------------


def _triples(n: int, rng_seed: int | None, cap: int = TRIPLE_CAP) -> np.ndarray:
    if n**3 <= cap:
        return np.array(list(itertools.product(range(n), repeat=3)), dtype=int).reshape(-1, 3)
    rng = np.random.default_rng(rng_seed)
    return rng.integers(0, n, size=(cap, 3))


def _equal_matrix(sample: Sequence[Any]) -> np.ndarray:
    n = len(sample)
    E = np.eye(n, dtype=bool)
    for i, j in itertools.combinations(range(n), 2):
        E[i, j] = E[j, i] = points_equal(sample[i], sample[j])
    return E


def check_metric_axioms(m: InducedMetric, sample: Sequence[Any], rng_seed: int | None = 0,
                        delta: float = DELTA) -> CheckReport:
    """Metric axioms of ``d_e`` on ``sample``.

    Nonnegativity, identity of indiscernibles and symmetry over all ordered
    pairs; the triangle inequality over all ordered triples, or over
    ``TRIPLE_CAP`` seeded random triples for larger samples.
    """
    n = len(sample)
    if n < 3:
        raise ValueError("need at least 3 sample points")
    D = m.table(sample)
    same = _equal_matrix(sample)
    rep = CheckReport()
    for i, j in itertools.product(range(n), repeat=2):
        d = D[i, j]
        rep.record(d >= -delta, "nonnegativity", (i, j), (d,))
        if same[i, j]:
            rep.record(abs(d) <= delta, "identity: equal points at distance 0", (i, j), (d,))
        else:
            rep.record(d > 0, "identity: distinct points at positive distance", (i, j), (d,))
        if i < j:
            rep.record(abs(d - D[j, i]) <= delta, "symmetry", (i, j), (d, D[j, i]))
    T = _triples(n, rng_seed)
    i, j, k = T.T
    lhs, rhs = D[i, j], D[i, k] + D[k, j]
    ok = lhs <= rhs + delta
    rep.checked += len(T)
    rep.passed += int(ok.sum())
    for t in np.flatnonzero(~ok)[:100]:
        rep.counterexamples.append(Counterexample(tuple(T[t]), (lhs[t], rhs[t]), "triangle"))
    return rep


def check_cone_metric_axioms(space: ConeMetricSpace, sample: Sequence[Any], rng_seed: int | None = 0) -> CheckReport:
    """The vector axioms of ``d_a`` itself, in the cone order.

    Positivity (distinct points at a strictly interior distance, equal
    points at the zero vector), symmetry, and the vector triangle inequality
    ``d(x, y) <= d(x, z) + d(z, y)``.
    """
    n = len(sample)
    if n < 3:
        raise ValueError("need at least 3 sample points")
    cone = space.cone
    V = space.table(sample)
    same = _equal_matrix(sample)
    rep = CheckReport()
    for i, j in itertools.product(range(n), repeat=2):
        v = V[i, j]
        if same[i, j]:
            rep.record(np.max(np.abs(v)) <= TAU_MEM, "ACM1: d(x, x) = 0", (i, j), (v,))
        else:
            rep.record(cone.contains_interior(v), "ACM1: 0 << d(x, y)", (i, j), (v,))
        if i < j:
            w = V[j, i]
            sym = np.max(np.abs(v - w)) <= TAU_MEM * (1 + np.max(np.abs(v)))
            rep.record(bool(sym), "ACM2: symmetry", (i, j), (v, w))
    T = _triples(n, rng_seed)
    i, j, k = T.T
    ok = cone.contains_many(V[i, k] + V[k, j] - V[i, j])
    rep.checked += len(T)
    rep.passed += int(ok.sum())
    for t in np.flatnonzero(~ok)[:100]:
        a, b, c = T[t]
        rep.counterexamples.append(Counterexample((a, b, c), (V[a, b], V[a, c] + V[c, b]), "ACM3: triangle"))
    return rep


# -- balls ---------------------------------------------------------------------


def check_ball_equality(m: InducedMetric, center: Any, r: float, sample: Sequence[Any],
                        c: Any = None, band: float = DELTA_BAND) -> CheckReport:
    """``d_e(center, y) < r`` agrees with ``d_a(center, y) << r e`` off the band.

    Points with ``|d_e(center, y) - r| <= band`` are counted in ``excluded``
    and not compared. Passing ``c`` other than ``r e`` yields a report that
    flags the violated precondition instead of checking anything.
    """
    if r <= 0:
        raise ValueError("radius must be positive")
    e = m.scal.direction
    rep = CheckReport()
    if c is not None:
        c = as_vector(c, m.cone.dim)
        if not np.allclose(c, r * e, rtol=1e-12, atol=1e-12):
            rep.record(False, "precondition: cone radius must equal r*e", (c,), (r * e,))
            return rep
    re = r * e
    for idx, y in enumerate(sample):
        v = m.space.d(center, y)
        de = m.scal.xi(v)
        if abs(de - r) <= band:
            rep.excluded += 1
            continue
        in_metric = de < r
        in_cone = m.cone.lt_strict(v, re)
        rep.record(in_metric == in_cone, "ball equality", (idx,), (de, in_metric, in_cone))
    return rep


def check_ball_refinement(m: InducedMetric, center: Any, r: float, sample: Sequence[Any]) -> CheckReport:
    """Every point of the metric ball lies in the cone ball with radius ``r e``. No exclusions."""
    rep = CheckReport()
    re = r * m.scal.direction
    for idx, y in enumerate(sample):
        v = m.space.d(center, y)
        de = m.scal.xi(v)
        if de < r:
            rep.record(m.cone.lt_strict(v, re), "metric ball inside cone ball", (idx,), (de,))
    return rep


def check_ball_nesting(space: ConeMetricSpace, e1: Any, e2: Any, center: Any, r: float,
                       sample: Sequence[Any], n_max: int = 10**6,
                       band: float = DELTA_BAND) -> tuple[CheckReport, int]:
    """Balls for two interior directions nest after radius rescaling.

    With ``n`` the minimal natural number such that ``e1 <= n e2``, checks
    that the ``e1`` ball of radius ``r / n`` sits inside the ``e2`` ball of
    radius ``r``. Returns the report and ``n``.
    """
    s1, s2 = Scalarizer(space.cone, e1), Scalarizer(space.cone, e2)
    n = archimedean_witness(space.cone, s1.direction, s2.direction, n_max)
    if n is None:
        raise ValueError("no Archimedean witness within n_max")
    rep = CheckReport()
    for idx, y in enumerate(sample):
        v = space.d(center, y)
        d1, d2 = s1.xi(v), s2.xi(v)
        if abs(d1 - r / n) <= band:
            rep.excluded += 1
            continue
        if d1 < r / n:
            rep.record(d2 < r, "nesting", (idx,), (d1, d2))
    return rep, n


def check_separation(space: ConeMetricSpace, x: Any, y: Any, sample: Sequence[Any]) -> CheckReport:
    """No sampled point lies in both ``B_a(x, c/3)`` and ``B_a(y, c/3)``, ``c = d_a(x, y)``."""
    cone = space.cone
    c3 = space.d(x, y) / 3.0
    if not cone.contains_interior(c3):
        raise ValueError("x and y must be distinct points at an interior distance")
    rep = CheckReport()
    for idx, z in enumerate(sample):
        both = cone.lt_strict(space.d(x, z), c3) and cone.lt_strict(space.d(y, z), c3)
        rep.record(not both, "separation", (idx,), ())
    return rep


# -- sequences -----------------------------------------------------------------


@dataclass(frozen=True)
class SequenceDiagnostics:
    cauchy_upto_tol: bool
    converges_upto_tol: bool | None
    cauchy_from: int | None
    converges_from: int | None


def _settled_from(over: np.ndarray) -> int | None:
    """First index of the final run where ``over`` is False, if that run has >= 2 terms."""
    n = len(over)
    bad = np.flatnonzero(over)
    start = int(bad[-1]) + 1 if bad.size else 0
    return start if n - start >= min(2, n) else None


def sequence_diagnostics(m: InducedMetric, seq: Sequence[Any], limit: Any = None,
                         tol: float = 1e-6) -> SequenceDiagnostics:
    """Finite-prefix proxies for the Cauchy and convergence properties.

    The sequence is Cauchy up to ``tol`` when some tail of at least two
    terms (or the whole of a one-term sequence) has induced diameter
    ``<= tol``. It converges up to ``tol`` to ``limit`` when some such tail
    stays within ``tol`` of it.
    """
    if not len(seq):
        raise ValueError("sequence must be non-empty")
    if tol <= 0:
        raise ValueError("tol must be positive")
    D = m.table(list(seq))
    n = len(seq)
    diam = np.empty(n)
    running = 0.0
    for k in range(n - 1, -1, -1):
        running = max(running, float(D[k, k:].max()), float(D[k:, k].max()))
        diam[k] = running
    cauchy_from = _settled_from(diam > tol)
    conv_from = None
    converges = None
    if limit is not None:
        to_limit = np.array([m.distance(x, limit) for x in seq])
        conv_from = _settled_from(to_limit > tol)
        converges = conv_from is not None
    return SequenceDiagnostics(cauchy_from is not None, converges, cauchy_from, conv_from)
