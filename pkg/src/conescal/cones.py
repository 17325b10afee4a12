"""Pointed convex cones in R^n and the partial orders they induce.

Four concrete representations are provided: the nonnegative orthant, a
polyhedral cone ``{x : A x >= 0}``, the second-order (Lorentz) cone, and
block products of any of these. Every cone is described by a vector of
*slacks* ``g(x)``; ``x`` is a member when every slack is nonnegative and an
algebraic interior point when every slack is strictly positive.

Floating point needs a declared boundary band. A slack value ``g`` is
accepted as nonnegative iff ``g >= -TAU_MEM * (1 + ||x||_inf)`` and as strictly
positive iff ``g > TAU_MEM * (1 + ||x||_inf)``. The same band is used by every
downstream module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

TAU_MEM = 1e-12
TAU_RANK = 1e-10

__all__ = [
    "TAU_MEM",
    "TAU_RANK",
    "Cone",
    "ConeValidationReport",
    "DimensionError",
    "Halfspace",
    "Orthant",
    "Product",
    "SecondOrder",
    "archimedean_witness",
    "as_vector",
    "cone_from_spec",
    "random_interior",
    "validate",
]


class DimensionError(ValueError):
    """Raised when a vector does not match the dimension of its space."""


def as_vector(x: Any, dim: int | None = None) -> np.ndarray:
    """Coerce ``x`` to a finite 1-d float array, optionally of length ``dim``."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise DimensionError(f"expected a non-empty 1-d vector, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise DimensionError(f"expected dimension {dim}, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"vector has non-finite coordinates: {v}")
    return v


def as_batch(X: Any, dim: int) -> np.ndarray:
    A = np.asarray(X, dtype=float)
    if A.ndim == 1:
        A = A[None, :]
    if A.ndim != 2 or A.shape[1] != dim:
        raise DimensionError(f"expected an (m, {dim}) array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("batch has non-finite entries")
    return A


def _band(X: np.ndarray) -> np.ndarray:
    return TAU_MEM * (1.0 + np.max(np.abs(X), axis=-1))


class Cone:
    """Base class: subclasses define ``dim`` and ``slack``."""

    dim: int

    def slack(self, X: np.ndarray) -> np.ndarray:
        """Defining inequality values for a batch ``X`` of shape (m, dim).

        Returns an (m, k) array; row ``i`` is nonnegative iff ``X[i]`` is a
        member of the cone.
        """
        raise NotImplementedError

    def witness(self) -> np.ndarray | None:
        """A canonical algebraic interior point, or ``None`` if unknown."""
        raise NotImplementedError

    def to_spec(self) -> dict:
        raise NotImplementedError

    # -- membership ---------------------------------------------------------

    def contains(self, x: Any) -> bool:
        v = as_vector(x, self.dim)
        return bool(self.contains_many(v)[0])

    def contains_interior(self, x: Any) -> bool:
        v = as_vector(x, self.dim)
        return bool(self.contains_interior_many(v)[0])

    def contains_many(self, X: Any) -> np.ndarray:
        X = as_batch(X, self.dim)
        return np.all(self.slack(X) >= -_band(X)[:, None], axis=1)

    def contains_interior_many(self, X: Any) -> np.ndarray:
        X = as_batch(X, self.dim)
        return np.all(self.slack(X) > _band(X)[:, None], axis=1)

    def classify(self, x: Any) -> str:
        """One of ``"interior"``, ``"boundary"`` or ``"exterior"``.

        ``"boundary"`` covers every point that is a member within the band
        but not strictly interior.
        """
        if self.contains_interior(x):
            return "interior"
        if self.contains(x):
            return "boundary"
        return "exterior"

    # -- order --------------------------------------------------------------

    def leq(self, x: Any, y: Any) -> bool:
        """``x <= y`` in the cone order, i.e. ``y - x`` lies in the cone."""
        return self.contains(as_vector(y, self.dim) - as_vector(x, self.dim))

    def lt_strict(self, x: Any, y: Any) -> bool:
        """``x << y``: ``y - x`` lies in the algebraic interior."""
        return self.contains_interior(as_vector(y, self.dim) - as_vector(x, self.dim))

    # -- sampling -----------------------------------------------------------

    def sample_members(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Random cone members: Gaussian draws pushed along the witness.

        Each draw ``z`` is replaced by ``z + k w`` for the smallest ``k`` in
        ``0, 1/2, 1, 2, 4, ...`` that lands in the cone. Members are left
        unscaled, so roughly a standard-normal spread.
        """
        w = self.witness()
        if w is None:
            raise ValueError("cone has no interior witness to sample around")
        Z = rng.standard_normal((count, self.dim))
        out = np.empty_like(Z)
        for i, z in enumerate(Z):
            k = 0.0
            while not self.contains(z + k * w):
                k = 0.5 if k == 0.0 else 2.0 * k
            out[i] = z + k * w
        return out


@dataclass(frozen=True)
class Orthant(Cone):
    """The nonnegative orthant ``{x : x_i >= 0}``."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("orthant dimension must be >= 1")

    @property
    def dim(self) -> int:
        return self.n

    def slack(self, X):
        return X

    def witness(self):
        return np.ones(self.n)

    def to_spec(self):
        return {"kind": "orthant", "n": self.n}


@dataclass(frozen=True)
class Halfspace(Cone):
    """Polyhedral cone ``{x : <a_i, x> >= 0 for every row a_i}``.

    Pointed iff the rows span R^n. Non-pointed instances can be constructed
    so that :func:`validate` can report on them.
    """

    rows: tuple[tuple[float, ...], ...]
    _A: np.ndarray = field(init=False, repr=False, compare=False)

    def __init__(self, rows: Sequence[Sequence[float]]):
        A = np.asarray(rows, dtype=float)
        if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
            raise ValueError(f"halfspace rows must form a non-empty matrix, got shape {A.shape}")
        if not np.all(np.isfinite(A)):
            raise ValueError("halfspace rows must be finite")
        object.__setattr__(self, "rows", tuple(tuple(float(a) for a in r) for r in A))
        object.__setattr__(self, "_A", A)

    @property
    def dim(self) -> int:
        return self._A.shape[1]

    @property
    def matrix(self) -> np.ndarray:
        return self._A.copy()

    def inner(self, X: np.ndarray) -> np.ndarray:
        # Elementwise product + sum so that batch size never changes rounding.
        return (X[:, None, :] * self._A[None, :, :]).sum(axis=-1)

    def slack(self, X):
        return self.inner(X)

    def rank(self) -> int:
        s = np.linalg.svd(self._A, compute_uv=False)
        return int(np.sum(s > TAU_RANK * s[0])) if s[0] > 0 else 0

    def witness(self, probe_count: int = 2000, rng_seed: int = 0):
        """Best of ``probe_count`` random unit directions for ``min_i <a_i, x>``.

        Returns ``None`` when no probed direction is strictly interior.
        """
        rng = np.random.default_rng(rng_seed)
        D = rng.standard_normal((probe_count, self.dim))
        D /= np.linalg.norm(D, axis=1, keepdims=True)
        # Row-normalised A makes the score comparable across constraints.
        An = self._A / np.linalg.norm(self._A, axis=1, keepdims=True).clip(min=1e-300)
        score = (D[:, None, :] * An[None, :, :]).sum(-1).min(axis=1)
        best = int(np.argmax(score))
        x = D[best]
        return x if self.contains_interior(x) else None

    def to_spec(self):
        return {"kind": "halfspace", "rows": [list(r) for r in self.rows]}


@dataclass(frozen=True)
class SecondOrder(Cone):
    """Lorentz cone ``{x : ||(x_1, ..., x_{n-1})||_2 <= x_n}``."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("second-order cone dimension must be >= 1")

    @property
    def dim(self) -> int:
        return self.n

    def slack(self, X):
        return (X[:, -1] - np.linalg.norm(X[:, :-1], axis=1))[:, None]

    def witness(self):
        w = np.zeros(self.n)
        w[-1] = 1.0
        return w

    def to_spec(self):
        return {"kind": "soc", "n": self.n}


@dataclass(frozen=True)
class Product(Cone):
    """Block product ``C_1 x C_2 x ...``; coordinates are concatenated."""

    factors: tuple[Cone, ...]

    def __init__(self, *factors: Cone):
        if len(factors) == 1 and isinstance(factors[0], (list, tuple)):
            factors = tuple(factors[0])
        if len(factors) < 2:
            raise ValueError("a product cone needs at least two factors")
        object.__setattr__(self, "factors", tuple(factors))

    @property
    def dim(self) -> int:
        return sum(f.dim for f in self.factors)

    def blocks(self, X: np.ndarray) -> list[np.ndarray]:
        """Split the last axis of ``X`` into per-factor blocks."""
        edges = np.cumsum([f.dim for f in self.factors])[:-1]
        return np.split(X, edges, axis=-1)

    def slack(self, X):
        return np.concatenate([f.slack(B) for f, B in zip(self.factors, self.blocks(X))], axis=1)

    def witness(self):
        parts = [f.witness() for f in self.factors]
        if any(p is None for p in parts):
            return None
        return np.concatenate(parts)

    def to_spec(self):
        return {"kind": "product", "factors": [f.to_spec() for f in self.factors]}


def cone_from_spec(spec: dict) -> Cone:
    """Build a cone from its tagged-record form, e.g. ``{"kind": "soc", "n": 3}``."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError("cone spec must be an object with a 'kind' field")
    kind = spec["kind"]
    if kind == "orthant":
        return Orthant(int(spec["n"]))
    if kind == "soc":
        return SecondOrder(int(spec["n"]))
    if kind == "halfspace":
        return Halfspace(spec["rows"])
    if kind == "product":
        return Product(*(cone_from_spec(f) for f in spec["factors"]))
    raise ValueError(f"unknown cone kind {kind!r}")


# -- validation ---------------------------------------------------------------


@dataclass
class ConeValidationReport:
    pointed: bool
    interior_witness: np.ndarray | None
    failures: list[tuple[str, tuple]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.pointed and self.interior_witness is not None and not self.failures


def _pointedness(cone: Cone) -> tuple[bool, tuple | None]:
    if isinstance(cone, Halfspace):
        if cone.rank() == cone.dim:
            return True, None
        # Any null vector v of A gives v and -v both in the cone.
        v = np.linalg.svd(cone.matrix)[2][-1]
        return False, (v, -v)
    if isinstance(cone, Product):
        for f in cone.factors:
            ok, cex = _pointedness(f)
            if not ok:
                return False, cex
        return True, None
    return True, None


def validate(cone: Cone, probe_count: int = 1000, rng_seed: int = 0) -> ConeValidationReport:
    """Check pointedness, closure under ``+`` and scaling, and find an interior point.

    Pointedness is decided analytically (rank test for polyhedral cones).
    Closure is probed on ``probe_count`` random member pairs. Failures are
    reported, never raised.
    """
    if probe_count < 1:
        raise ValueError("probe_count must be >= 1")
    pointed, cex = _pointedness(cone)
    failures: list[tuple[str, tuple]] = []
    if not pointed:
        failures.append(("pointedness", cex))

    if isinstance(cone, Halfspace):
        w = cone.witness(probe_count=probe_count, rng_seed=rng_seed)
    elif isinstance(cone, Product):
        parts = [
            f.witness(probe_count=probe_count, rng_seed=rng_seed) if isinstance(f, Halfspace) else f.witness()
            for f in cone.factors
        ]
        w = None if any(p is None for p in parts) else np.concatenate(parts)
    else:
        w = cone.witness()
    if w is None:
        failures.append(("interior", ()))
        return ConeValidationReport(pointed, None, failures)

    rng = np.random.default_rng(rng_seed)
    X = cone.sample_members(rng, probe_count)
    Y = cone.sample_members(rng, probe_count)
    lam = rng.exponential(2.0, probe_count)
    sums = cone.contains_many(X + Y)
    scaled = cone.contains_many(lam[:, None] * X)
    for i in np.flatnonzero(~sums)[:10]:
        failures.append(("closure_add", (X[i], Y[i])))
    for i in np.flatnonzero(~scaled)[:10]:
        failures.append(("closure_scale", (X[i], lam[i])))
    return ConeValidationReport(pointed, w, failures)


def random_interior(cone: Cone, rng: np.random.Generator, margin: float = 0.25) -> np.ndarray:
    """A random interior direction that keeps a fraction of the witness's depth.

    Depth is ``min slack / ||x||_inf``; the draw is rejected until its depth is
    at least ``margin`` times the canonical witness's. Keeps property checks
    away from nearly-degenerate ``e``.
    """
    w = cone.witness()
    if w is None:
        raise ValueError("cone has no interior witness")

    def depth(x):
        return float(cone.slack(x[None, :]).min() / np.max(np.abs(x)))

    target = margin * depth(w)
    w = w / np.max(np.abs(w))
    for _ in range(10_000):
        x = w + 0.5 * rng.standard_normal(cone.dim) / np.sqrt(cone.dim)
        if depth(x) >= target:
            return x * rng.uniform(0.5, 2.0)
    return w


# -- Archimedean witnesses ----------------------------------------------------


def archimedean_witness(cone: Cone, x: Any, y: Any, n_max: int = 10**6) -> int | None:
    """Smallest natural ``n <= n_max`` with ``x <= n y``, or ``None``.

    Doubling over ``1, 2, 4, ...`` (capped at ``n_max``) finds a feasible
    power, then integer bisection narrows to the minimum. Feasibility is
    upward closed in ``n`` because ``y`` is a cone member.
    """
    x = as_vector(x, cone.dim)
    y = as_vector(y, cone.dim)
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if not np.any(y):
        raise ValueError("y must be a non-zero cone element")
    if not cone.contains(y):
        raise ValueError("y must lie in the cone")

    def ok(n: int) -> bool:
        return cone.contains(n * y - x)

    lo, hi = 0, 1  # lo is always infeasible (0 stands in for "none checked")
    while not ok(hi):
        if hi >= n_max:
            return None
        lo, hi = hi, min(2 * hi, n_max)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi
