"""Picard iteration for maps contractive in a cone metric.

If ``d_a(Tx, Ty) <= lam d_a(x, y)`` in the cone order with ``0 < lam < 1``,
monotonicity and positive homogeneity of ``xi_e`` give
``d_e(Tx, Ty) <= lam d_e(x, y)``, so the usual Banach error bounds apply in
the induced metric. The factor ``lam`` is the caller's claim;
:func:`estimate_contraction_factor` can refute it but never certify it.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

from .cone_metric import InducedMetric

__all__ = ["ConvergenceError", "FixedPointResult", "estimate_contraction_factor", "solve_contraction"]

log = logging.getLogger(__name__)


class ConvergenceError(RuntimeError):
    """Iteration budget exhausted. ``best`` holds the last iterate."""

    def __init__(self, msg: str, best: Any, iterations: int):
        super().__init__(msg)
        self.best = best
        self.iterations = iterations


@dataclass
class FixedPointResult:
    point: Any
    iterations: int
    residual: float
    apriori_bound: float
    aposteriori_bound: float
    converged: bool = True
    trace: list[float] = field(default_factory=list)


def solve_contraction(m: InducedMetric, T: Callable[[Any], Any], x0: Any, lam: float,
                      tol: float = 1e-8, max_iter: int = 10_000,
                      record_trace: bool = True) -> FixedPointResult:
    """Iterate ``x_{k+1} = T(x_k)`` until the returned iterate is within ``tol`` of the fixed point.

    The stopping rule is the a-posteriori bound
    ``d_e(x_{k+1}, x*) <= lam / (1 - lam) * d_e(x_k, x_{k+1})``, so iteration
    stops once the step size drops to ``tol * (1 - lam) / lam``.

    Parameters
    ----------
    m : InducedMetric
        Scalar metric used for step sizes and bounds.
    T : callable
        The self-map.
    x0 : point
        Starting point.
    lam : float
        Claimed contraction factor in (0, 1).
    tol : float
        Target distance to the fixed point.
    max_iter : int
        Maximum number of applications of ``T``.

    Returns
    -------
    FixedPointResult
        ``iterations`` counts applications of ``T``; ``residual`` is
        ``d_e(x, T x)`` at the returned point; ``apriori_bound`` is
        ``lam**iterations / (1 - lam) * d_e(x0, x1)``.

    Raises
    ------
    ValueError
        If ``lam`` is outside (0, 1) or ``tol``/``max_iter`` are not positive.
    ConvergenceError
        If the stopping rule is not met within ``max_iter`` steps.
    """
    if not 0 < lam < 1:
        raise ValueError(f"contraction factor must lie in (0, 1), got {lam}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")

    threshold = tol * (1 - lam) / lam
    trace: list[float] = []
    x = x0
    first_step = None
    for k in range(1, max_iter + 1):
        x_next = T(x)
        step = m.distance(x, x_next)
        if first_step is None:
            first_step = step
        if record_trace:
            trace.append(step)
        x = x_next
        if step <= threshold:
            residual = m.distance(x, T(x))
            return FixedPointResult(
                point=x,
                iterations=k,
                residual=residual,
                apriori_bound=lam**k / (1 - lam) * first_step,
                aposteriori_bound=lam / (1 - lam) * step,
                trace=trace,
            )
    raise ConvergenceError(f"no convergence within {max_iter} iterations", x, max_iter)


def estimate_contraction_factor(m: InducedMetric, T: Callable[[Any], Any],
                                sample_pairs: Iterable[tuple[Any, Any]]) -> float:
    """Largest observed ratio ``d_e(Tx, Ty) / d_e(x, y)`` over ``sample_pairs``.

    An empirical lower bound on the Lipschitz constant in the induced metric.
    A value above 1 is logged as a warning.
    """
    best = 0.0
    seen = False
    for x, y in sample_pairs:
        d = m.distance(x, y)
        if d == 0:
            raise ValueError(f"sample pair at zero induced distance: {x!r}, {y!r}")
        best = max(best, m.distance(T(x), T(y)) / d)
        seen = True
    if not seen:
        raise ValueError("no sample pairs given")
    if best > 1:
        log.warning("estimated contraction factor %.6g exceeds 1: map is not a contraction", best)
    return best
