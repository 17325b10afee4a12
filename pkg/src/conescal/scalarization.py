"""Nonlinear (Gerstewitz) scalarization along an interior direction.

For a cone ``P`` and ``e`` in its algebraic interior,

    xi_e(y) = inf { r : y <= r e }   (order induced by P)

Two independent evaluation routes are provided. :meth:`Scalarizer.xi` uses a
closed form per cone family. :meth:`Scalarizer.xi_oracle` bisects the
monotone membership predicate ``r -> y <= r e`` between brackets found by
doubling, and is the correctness witness for the closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .cones import Cone, Halfspace, Orthant, Product, SecondOrder, as_batch, as_vector

__all__ = ["BracketError", "NotInteriorError", "Scalarizer", "DEFAULT_TOL"]

DEFAULT_TOL = 1e-9
SOC_DISC_TOL = 1e-12
_MAX_DOUBLINGS = 1020  # 2**1020 is still finite


class NotInteriorError(ValueError):
    """The scalarization direction is not an algebraic interior point."""


class BracketError(RuntimeError):
    """Bracket search exhausted its doubling budget (malformed cone or e)."""


def _closed_form(cone: Cone, Y: np.ndarray, e: np.ndarray) -> np.ndarray:
    if isinstance(cone, Orthant):
        return (Y / e).max(axis=1)
    if isinstance(cone, Halfspace):
        return (cone.inner(Y) / cone.inner(e[None, :])).max(axis=1)
    if isinstance(cone, SecondOrder):
        return _soc_root(Y, e)
    if isinstance(cone, Product):
        parts = [_closed_form(f, B, b) for f, B, b in zip(cone.factors, cone.blocks(Y), cone.blocks(e))]
        return np.max(np.stack(parts, axis=1), axis=1)
    raise TypeError(f"no closed form for cone type {type(cone).__name__}")


def _soc_root(Y: np.ndarray, e: np.ndarray) -> np.ndarray:
    """Smallest feasible ``r`` for the Lorentz cone, batched.

    Feasibility of ``r e - y`` reads ``||r ebar - ybar||^2 <= (r e_n - y_n)^2``
    with ``r e_n >= y_n``. The quadratic
    ``a r^2 - 2 b r + c`` has ``a > 0`` for interior ``e`` and the answer is
    its larger root.
    """
    ebar, en = e[:-1], e[-1]
    Ybar, yn = Y[:, :-1], Y[:, -1]
    a = en * en - (ebar * ebar).sum()
    b = en * yn - (Ybar * ebar).sum(axis=1)
    c = yn * yn - (Ybar * Ybar).sum(axis=1)
    disc = b * b - a * c
    neg = disc < 0
    if np.any(neg):
        scale = b * b + np.abs(a * c)
        if np.any(disc[neg] < -SOC_DISC_TOL * np.maximum(scale[neg], 1.0)):
            raise ArithmeticError("negative discriminant: direction is not interior to the Lorentz cone")
        disc = np.where(neg, 0.0, disc)
    s = np.sqrt(disc)
    out = np.empty_like(b)
    pos = b > 0
    out[pos] = (b[pos] + s[pos]) / a
    # Conjugate form avoids cancellation when b <= 0.
    den = b[~pos] - s[~pos]
    with np.errstate(divide="ignore", invalid="ignore"):
        out[~pos] = np.where(den == 0.0, 0.0, c[~pos] / den)
    return out


@dataclass(frozen=True)
class Scalarizer:
    """A cone paired with an interior direction ``e``."""

    cone: Cone
    e: tuple[float, ...]
    _e: np.ndarray = field(init=False, repr=False, compare=False)

    def __init__(self, cone: Cone, e: Any):
        v = as_vector(e, cone.dim)
        if not cone.contains_interior(v):
            raise NotInteriorError(f"e = {v.tolist()} is not an algebraic interior point of {cone}")
        object.__setattr__(self, "cone", cone)
        object.__setattr__(self, "e", tuple(float(t) for t in v))
        object.__setattr__(self, "_e", v)

    @property
    def direction(self) -> np.ndarray:
        return self._e.copy()

    # -- closed form --------------------------------------------------------

    def xi(self, y: Any) -> float:
        y = as_vector(y, self.cone.dim)
        return float(_closed_form(self.cone, y[None, :], self._e)[0])

    def xi_many(self, Y: Any) -> np.ndarray:
        return _closed_form(self.cone, as_batch(Y, self.cone.dim), self._e)

    __call__ = xi

    # -- bisection oracle ---------------------------------------------------

    def feasible(self, y: Any, r: float) -> bool:
        """Membership of ``r`` in ``{r : y <= r e}``."""
        return self.cone.contains(r * self._e - as_vector(y, self.cone.dim))

    def upper_bound(self, y: Any) -> float:
        """A feasible ``lam`` from ``1, 2, 4, ...``."""
        y = as_vector(y, self.cone.dim)
        lam = 1.0
        for _ in range(_MAX_DOUBLINGS):
            if self.feasible(y, lam):
                return lam
            lam *= 2.0
        raise BracketError("no feasible upper bound found; is e interior to the cone?")

    def lower_bound(self, y: Any) -> float:
        """An infeasible ``alpha`` from ``0, -1, -2, -4, ...``."""
        y = as_vector(y, self.cone.dim)
        alpha = 0.0
        for _ in range(_MAX_DOUBLINGS):
            if not self.feasible(y, alpha):
                return alpha
            alpha = -1.0 if alpha == 0.0 else 2.0 * alpha
        raise BracketError("feasible set is not bounded below; the cone is not pointed")

    def xi_oracle(self, y: Any, tol: float = DEFAULT_TOL) -> float:
        """Bisect the feasibility predicate until the bracket is ``<= tol`` wide."""
        if tol <= 0:
            raise ValueError("tol must be positive")
        y = as_vector(y, self.cone.dim)
        lo, hi = self.lower_bound(y), self.upper_bound(y)
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if self.feasible(y, mid):
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    def xi_oracle_many(self, Y: Any, tol: float = DEFAULT_TOL) -> np.ndarray:
        """Row-wise :meth:`xi_oracle`; every row follows the scalar iteration exactly."""
        if tol <= 0:
            raise ValueError("tol must be positive")
        Y = as_batch(Y, self.cone.dim)
        e = self._e

        def feas(r, rows):
            return self.cone.contains_many(r[:, None] * e - Y[rows])

        m = Y.shape[0]
        hi = np.ones(m)
        todo = np.arange(m)
        for _ in range(_MAX_DOUBLINGS):
            ok = feas(hi[todo], todo)
            todo = todo[~ok]
            if todo.size == 0:
                break
            hi[todo] *= 2.0
        else:
            raise BracketError("no feasible upper bound found; is e interior to the cone?")

        lo = np.zeros(m)
        todo = np.arange(m)
        for _ in range(_MAX_DOUBLINGS):
            ok = feas(lo[todo], todo)
            todo = todo[ok]
            if todo.size == 0:
                break
            lo[todo] = np.where(lo[todo] == 0.0, -1.0, 2.0 * lo[todo])
        else:
            raise BracketError("feasible set is not bounded below; the cone is not pointed")

        active = np.flatnonzero(hi - lo > tol)
        while active.size:
            mid = 0.5 * (lo[active] + hi[active])
            ok = feas(mid, active)
            hi[active[ok]] = mid[ok]
            lo[active[~ok]] = mid[~ok]
            active = active[hi[active] - lo[active] > tol]
        return 0.5 * (lo + hi)
