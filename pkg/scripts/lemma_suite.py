"""Check the order/sublinearity properties of xi_e over several cone families.

    python scripts/lemma_suite.py --samples 2000 --seed 0
"""

import argparse
import time

import numpy as np

from conescal import Halfspace, Orthant, Product, Scalarizer, SecondOrder, random_interior

FAMILIES = {
    "orthant(3)": Orthant(3),
    "halfspace(R^2)": Halfspace([[2.0, 1.0], [-1.0, 3.0]]),
    "soc(4)": SecondOrder(4),
    "orthant(2) x soc(3)": Product(Orthant(2), SecondOrder(3)),
}


def run_family(cone, rng, count, slack=1e-9):
    s = Scalarizer(cone, random_interior(cone, rng))
    Y = 3.0 * rng.standard_normal((count, cone.dim))
    P = cone.sample_members(rng, count)
    xi = s.xi_many(Y)
    lam = 10 ** rng.uniform(-2, 2, count)
    res = {
        "monotone": np.all(xi <= s.xi_many(Y + P) + slack),
        "subadditive": np.all(s.xi_many(Y + Y[::-1]) <= xi + xi[::-1] + slack),
        "homogeneous": np.all(np.abs(s.xi_many(lam[:, None] * Y) - lam * xi) <= slack * (1 + lam)),
        "members >= 0": np.all(s.xi_many(P) >= -slack),
    }
    t0 = time.perf_counter()
    oracle = s.xi_oracle_many(Y)
    res["oracle gap"] = float(np.max(np.abs(oracle - xi)))
    res["oracle ms"] = 1e3 * (time.perf_counter() - t0)
    return res


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    for name, cone in FAMILIES.items():
        res = run_family(cone, rng, args.samples)
        flags = " ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in res.items() if isinstance(v, (bool, np.bool_)))
        print(f"{name:22s} {flags}  oracle gap={res['oracle gap']:.2e} ({res['oracle ms']:.0f} ms)")


if __name__ == "__main__":
    main()
