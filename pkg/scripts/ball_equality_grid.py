"""Compare induced-metric balls with cone balls on a square grid.

Prints, per radius, how many grid points were compared, how many fell in
the boundary band, and how many disagreed.

    python scripts/ball_equality_grid.py --num 21 --radii 0.5 1 1.7
"""

import argparse

import numpy as np

from conescal import ConeMetricSpace, InducedMetric, Orthant, Scalarizer, check_ball_equality


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--num", type=int, default=21)
    ap.add_argument("--half-width", type=float, default=2.0)
    ap.add_argument("--radii", type=float, nargs="+", default=[0.5, 1.0, 1.7])
    ap.add_argument("--e", type=float, nargs=2, default=[1.0, 1.0])
    args = ap.parse_args()

    g = np.linspace(-args.half_width, args.half_width, args.num)
    grid = [(a, b) for a in g for b in g]
    space = ConeMetricSpace(Orthant(2), lambda x, y: np.abs(np.subtract(x, y)))
    m = InducedMetric(space, Scalarizer(Orthant(2), args.e))
    print(f"grid {args.num}x{args.num} on [-{args.half_width}, {args.half_width}]^2, e = {tuple(args.e)}")
    for r in args.radii:
        rep = check_ball_equality(m, (0.0, 0.0), r, grid)
        frac = 100 * rep.excluded / len(grid)
        print(f"r = {r:<6g} compared {rep.checked:4d}  band {rep.excluded:3d} ({frac:5.2f}%)  mismatches {rep.failed}")


if __name__ == "__main__":
    main()
