"""Cone-valued norms on R^k (or C^k) and the scalar norm they induce."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Callable, Sequence

import numpy as np

from .cone_metric import DELTA, DELTA_BAND, ConeMetricSpace
from .cones import TAU_MEM, Cone, as_vector
from .report import CheckReport
from .scalarization import Scalarizer

__all__ = [
    "ConeNormedSpace",
    "check_cone_norm_axioms",
    "check_norm_axioms",
    "induced_norm",
    "random_sample",
]

PAIR_CAP = 10**4


@dataclass(frozen=True)
class ConeNormedSpace:
    """``X = R^k`` (``C^k`` when ``complex_field``) with a norm valued in a cone-ordered R^n."""

    cone: Cone
    vnorm: Callable[[np.ndarray], Any]
    dim: int
    complex_field: bool = False

    def vec(self, x: Any) -> np.ndarray:
        v = np.asarray(x, dtype=complex if self.complex_field else float)
        if v.shape != (self.dim,):
            raise ValueError(f"expected a vector of length {self.dim}, got shape {v.shape}")
        return v

    def norm_vector(self, x: Any) -> np.ndarray:
        return as_vector(self.vnorm(self.vec(x)), self.cone.dim)

    def as_cone_metric(self) -> ConeMetricSpace:
        """The translation-invariant cone metric ``d_a(x, y) = vnorm(x - y)``."""
        return ConeMetricSpace(self.cone, lambda x, y: self.vnorm(self.vec(x) - self.vec(y)))


def _check_cones(ns: ConeNormedSpace, scal: Scalarizer):
    if scal.cone != ns.cone:
        raise ValueError("scalarizer and normed space must share the same cone")


def induced_norm(ns: ConeNormedSpace, scal: Scalarizer, x: Any) -> float:
    """``xi_e(vnorm(x))``."""
    _check_cones(ns, scal)
    return scal.xi(ns.norm_vector(x))


def random_sample(ns: ConeNormedSpace, rng: np.random.Generator, count: int,
                  scale: float = 3.0) -> tuple[list[np.ndarray], list[complex | float]]:
    """Seeded vectors and scalars; complex ones only for a complex space."""
    X = scale * rng.standard_normal((count, ns.dim))
    a = scale * rng.standard_normal(count)
    if ns.complex_field:
        X = X + 1j * scale * rng.standard_normal((count, ns.dim))
        a = a + 1j * scale * rng.standard_normal(count)
    return list(X), list(a)


def _pairs(n: int, rng_seed: int | None) -> list[tuple[int, int]]:
    if n * n <= PAIR_CAP:
        return list(itertools.product(range(n), repeat=2))
    rng = np.random.default_rng(rng_seed)
    return [tuple(p) for p in rng.integers(0, n, size=(PAIR_CAP, 2))]


def check_cone_norm_axioms(ns: ConeNormedSpace, sample: Sequence[Any], scalars: Sequence[Any],
                           rng_seed: int | None = 0) -> CheckReport:
    """Vector axioms of ``vnorm``: interior positivity, absolute homogeneity, subadditivity."""
    cone = ns.cone
    X = [ns.vec(x) for x in sample]
    V = [ns.norm_vector(x) for x in X]
    rep = CheckReport()
    for i, (x, v) in enumerate(zip(X, V)):
        if not np.any(x):
            rep.record(np.max(np.abs(v)) <= TAU_MEM, "ACN1: norm of zero is zero", (i,), (v,))
        else:
            rep.record(cone.contains_interior(v), "ACN1: 0 << norm", (i,), (v,))
    if scalars:
        for i, x in enumerate(X):
            a = scalars[i % len(scalars)]
            lhs = ns.norm_vector(a * x)
            rhs = abs(a) * V[i]
            ok = np.max(np.abs(lhs - rhs)) <= DELTA * (1 + np.max(np.abs(rhs)))
            rep.record(bool(ok), "ACN2: homogeneity", (i, a), (lhs, rhs))
    for i, j in _pairs(len(X), rng_seed):
        s = ns.norm_vector(X[i] + X[j])
        rep.record(cone.leq(s, V[i] + V[j]), "ACN3: triangle", (i, j), (s, V[i] + V[j]))
    return rep


def check_norm_axioms(ns: ConeNormedSpace, scal: Scalarizer, sample: Sequence[Any],
                      scalars: Sequence[Any], r: float = 1.0, rng_seed: int | None = 0,
                      delta: float = DELTA, band: float = DELTA_BAND) -> CheckReport:
    """Norm axioms of ``xi_e o vnorm`` plus the ball identity on difference vectors.

    Homogeneity pairs ``sample[i]`` with ``scalars[i % len(scalars)]``.
    Subadditivity and the ball identity run over all ordered pairs of the
    sample, or ``PAIR_CAP`` seeded random pairs when the sample is large.
    """
    _check_cones(ns, scal)
    if not len(sample):
        raise ValueError("sample must be non-empty")
    cone = ns.cone
    X = [ns.vec(x) for x in sample]
    N = np.array([induced_norm(ns, scal, x) for x in X])
    rep = CheckReport()
    for i, x in enumerate(X):
        if np.any(x):
            rep.record(N[i] > 0, "positivity", (i,), (N[i],))
        else:
            rep.record(N[i] == 0, "norm of zero", (i,), (N[i],))
    if scalars:
        for i, x in enumerate(X):
            a = scalars[i % len(scalars)]
            lhs = induced_norm(ns, scal, a * x)
            rhs = abs(a) * N[i]
            rep.record(abs(lhs - rhs) <= delta * (1 + abs(rhs)), "homogeneity", (i, a), (lhs, rhs))
    re = r * scal.direction
    for i, j in _pairs(len(X), rng_seed):
        s = induced_norm(ns, scal, X[i] + X[j])
        rep.record(s <= N[i] + N[j] + delta, "triangle", (i, j), (s, N[i] + N[j]))
        v = ns.norm_vector(X[i] - X[j])
        d = scal.xi(v)
        if abs(d - r) <= band:
            rep.excluded += 1
            continue
        same = (d < r) == cone.lt_strict(v, re)
        rep.record(same, "norm ball equality", (i, j), (d,))
    return rep
