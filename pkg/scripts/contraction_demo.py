"""Solve an affine contraction in a cone metric and print the error bounds.

T(x) = M x + b on R^2 with d_a(x, y) = |x - y| (componentwise) in the
orthant. The contraction factor in the induced metric is the max-row-sum
norm of M weighted by e.
"""

import argparse

import numpy as np

from conescal import (
    ConeMetricSpace,
    InducedMetric,
    Orthant,
    Scalarizer,
    estimate_contraction_factor,
    solve_contraction,
)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--tol", type=float, default=1e-8)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    M = np.array([[0.5, 0.0], [0.0, 0.5]])
    b = np.array([1.0, 0.0])
    lam = 0.5

    def T(x):
        return M @ x + b

    space = ConeMetricSpace(Orthant(2), lambda x, y: np.abs(x - y))
    m = InducedMetric(space, Scalarizer(Orthant(2), (1.0, 1.0)))
    rng = np.random.default_rng(args.seed)
    pairs = list(zip(rng.normal(size=(200, 2)), rng.normal(size=(200, 2))))
    print(f"estimated factor on 200 random pairs: {estimate_contraction_factor(m, T, pairs):.6f}")

    x_star = np.linalg.solve(np.eye(2) - M, b)
    for x0 in (np.zeros(2), np.array([-40.0, 13.0])):
        res = solve_contraction(m, T, x0, lam, tol=args.tol)
        err = m.distance(res.point, x_star)
        print(f"x0={x0}: {res.iterations} steps, point={res.point}, true error={err:.3e}, "
              f"a-priori={res.apriori_bound:.3e}, a-posteriori={res.aposteriori_bound:.3e}")


if __name__ == "__main__":
    main()
