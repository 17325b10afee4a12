"""Exit criteria. Each test tags itself; the terminal summary prints one line per criterion."""

import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from conescal import (
    ConeMetricSpace,
    ConeNormedSpace,
    InducedMetric,
    Orthant,
    Scalarizer,
    archimedean_witness,
    check_ball_equality,
    check_metric_axioms,
    check_norm_axioms,
    induced_norm,
    solve_contraction,
)
from conescal.cone_norm import random_sample
from _families import FAMILIES, interior_directions, sample_ys

SLACK = 1e-9
SPECS = Path(__file__).resolve().parent.parent / "specs"


def lemma_suite():
    """Per (family, e): samples plus every violated property name."""
    out = []
    for name, cone in FAMILIES.items():
        for k, e in enumerate(interior_directions(cone)):
            rng = np.random.default_rng(1000 + 10 * list(FAMILIES).index(name) + k)
            s = Scalarizer(cone, e)
            Y = sample_ys(cone, rng, 1000)
            xi = s.xi_many(Y)
            bad = []
            if s.xi(np.zeros(cone.dim)) != 0.0:
                bad.append("P1")
            if s.xi(s.direction) != 1.0:
                bad.append("P2")
            if np.any(xi[cone.contains_many(Y)] < -SLACK):
                bad.append("P3")
            offsets = rng.choice([1e-8, 1e-6, 1e-3, 0.1, 1.0, 5.0], size=1000) * rng.choice([-1, 1], size=1000)
            r = xi + offsets
            Z = r[:, None] * s.direction - Y
            inside = cone.contains_interior_many(Z)
            if np.any(~inside[xi < r - SLACK]) or np.any(xi[inside] >= r[inside] + SLACK):
                bad.append("P4")
            Y2 = Y + cone.sample_members(rng, 1000)
            ordered = cone.contains_many(Y2 - Y)
            assert ordered.all()
            if np.any(xi[ordered] > s.xi_many(Y2)[ordered] + SLACK):
                bad.append("P5")
            Yp = Y[rng.permutation(1000)]
            if np.any(s.xi_many(Y + Yp) > xi + s.xi_many(Yp) + SLACK):
                bad.append("P6")
            lam = 10 ** rng.uniform(-2, 2, 1000)
            if np.any(np.abs(s.xi_many(lam[:, None] * Y) - lam * xi) > SLACK * (1 + lam)):
                bad.append("P7")
            if np.any(xi[cone.contains_interior_many(Y)] <= 0):
                bad.append("P8")
            out.append((name, k, s, Y, xi, bad))
    return out


@pytest.fixture(scope="module")
def suite():
    t0 = time.perf_counter()
    res = lemma_suite()
    return res, time.perf_counter() - t0


def test_c1_lemma_properties(suite, criterion):
    criterion("1  scalarization properties P1-P8, 9 families x 3 e x 1000 y, slack 1e-9")
    res, _ = suite
    failures = [(name, k, bad) for name, k, _, _, _, bad in res if bad]
    print(f"[c1] {len(res)} configurations, failures: {failures}")
    assert failures == []


def test_c1_runtime(suite, criterion):
    criterion("1  scalarization property suite runtime < 5 s")
    _, elapsed = suite
    print(f"[c1] suite runtime {elapsed:.2f} s")
    assert elapsed < 5.0


def test_c2_oracle_equivalence(suite, criterion):
    criterion("2  closed form vs bisection oracle (tol 1e-9) within 1e-7 (1 + |xi|)")
    res, _ = suite
    worst = 0.0
    for _, _, s, Y, xi, _ in res:
        oracle = s.xi_oracle_many(Y, 1e-9)
        worst = max(worst, float(np.max(np.abs(xi - oracle) / (1 + np.abs(xi)))))
    print(f"[c2] worst relative gap {worst:.3e}")
    assert worst <= 1e-7


def chebyshev():
    space = ConeMetricSpace(Orthant(2), lambda x, y: np.abs(np.asarray(x) - np.asarray(y)))
    return InducedMetric(space, Scalarizer(Orthant(2), (1, 1)))


def test_c3_chebyshev_metric(criterion):
    criterion("3  induced Chebyshev metric: axioms on 200 points, analytic agreement 1e-12 on 1000 pairs")
    m = chebyshev()
    rng = np.random.default_rng(3)
    pts = [tuple(p) for p in rng.uniform(-10, 10, (200, 2))]
    rep = check_metric_axioms(m, pts, rng_seed=3)
    assert rep.ok and not rep.counterexamples
    X, Y = rng.uniform(-10, 10, (1000, 2)), rng.uniform(-10, 10, (1000, 2))
    gaps = [abs(m.distance(x, y) - np.max(np.abs(x - y))) for x, y in zip(X, Y)]
    assert max(gaps) <= 1e-12


GRID = [(float(a), float(b)) for a in np.linspace(-2, 2, 21) for b in np.linspace(-2, 2, 21)]


@pytest.mark.parametrize("r", [0.5, 1.0, 1.7])
def test_c4_ball_equality_mismatches(r, criterion):
    criterion(f"4  ball equality on 21x21 grid, r = {r}: zero off-band mismatches")
    rep = check_ball_equality(chebyshev(), (0.0, 0.0), r, GRID)
    assert rep.checked + rep.excluded == 441
    assert rep.failed == 0


@pytest.mark.parametrize("r", [0.5, 1.0, 1.7])
def test_c4_ball_equality_band(r, criterion):
    criterion(f"4  ball equality on 21x21 grid, r = {r}: band exclusions <= 2% of grid")
    rep = check_ball_equality(chebyshev(), (0.0, 0.0), r, GRID)
    frac = rep.excluded / len(GRID)
    print(f"[c4] r={r}: {rep.excluded} band points ({100 * frac:.2f}%)")
    assert frac <= 0.02


def test_c5_contraction(criterion):
    criterion("5  affine contraction: within 1e-8 of (2, 0) in <= 35 steps, ratios <= 0.5, starts agree 2e-8")
    m = chebyshev()

    def T(x):
        return np.array([x[0] / 2 + 1, x[1] / 2])

    a = solve_contraction(m, T, np.zeros(2), 0.5, tol=1e-8)
    b = solve_contraction(m, T, np.array([-40.0, 13.0]), 0.5, tol=1e-8)
    assert np.max(np.abs(a.point - [2.0, 0.0])) <= 1e-8
    assert a.iterations <= 35
    for tr in (a.trace, b.trace):
        assert all(s1 <= 0.5 * s0 * (1 + 1e-9) for s0, s1 in zip(tr, tr[1:]))
    assert m.distance(a.point, b.point) <= 2e-8


def test_c6_norm(criterion):
    criterion("6  sup-norm construction: norm axioms on 500 samples, induced norm == induced distance bitwise")
    ns = ConeNormedSpace(Orthant(2), np.abs, 2)
    scal = Scalarizer(Orthant(2), (1, 1))
    rng = np.random.default_rng(6)
    sample, scalars = random_sample(ns, rng, 500)
    rep = check_norm_axioms(ns, scal, sample, scalars, delta=SLACK)
    assert rep.ok
    m = InducedMetric(ns.as_cone_metric(), scal)
    X, Y = rng.normal(size=(500, 2)), rng.normal(size=(500, 2))
    assert all(induced_norm(ns, scal, x - y) == m.distance(x, y) for x, y in zip(X, Y))


def test_c7_archimedean(criterion):
    criterion("7  Archimedean witness: boundary y absent; minimal witness on 100 integer x")
    O = Orthant(2)
    assert archimedean_witness(O, (0, 1), (1, 0), n_max=10**6) is None
    rng = np.random.default_rng(7)
    for x in rng.integers(-100, 1000, (100, 2)):
        scan = next(n for n in range(1, 2000) if O.contains(n * np.ones(2) - x))
        assert archimedean_witness(O, x, (1, 1), n_max=10**6) == scan


@pytest.mark.parametrize("name, code", [("scalarize.json", 0), ("ball_check.json", 0), ("validate_halfspace.json", 1)])
def test_c8_cli_determinism(tmp_path, name, code, criterion):
    criterion(f"8  CLI {name}: byte-identical reruns with fixed seed, exit code {code}")
    outs = []
    for i in range(2):
        out = tmp_path / f"run{i}.json"
        proc = subprocess.run(
            [sys.executable, "-m", "conescal", "run", str(SPECS / name), "--out", str(out), "--seed", "12345"],
            capture_output=True,
        )
        assert proc.returncode == code, proc.stderr
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
