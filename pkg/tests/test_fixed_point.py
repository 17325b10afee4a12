import logging

import numpy as np
import pytest

from conescal import (
    ConeMetricSpace,
    ConvergenceError,
    InducedMetric,
    Orthant,
    Scalarizer,
    estimate_contraction_factor,
    solve_contraction,
)


def chebyshev():
    space = ConeMetricSpace(Orthant(2), lambda x, y: np.abs(np.asarray(x) - np.asarray(y)))
    return InducedMetric(space, Scalarizer(Orthant(2), (1, 1)))


def scalar_line():
    space = ConeMetricSpace(Orthant(2), lambda x, y: abs(x - y) * np.ones(2))
    return InducedMetric(space, Scalarizer(Orthant(2), (1, 1)))


def affine(x):
    return np.array([x[0] / 2 + 1, x[1] / 2])


def test_affine_contraction():
    res = solve_contraction(chebyshev(), affine, np.zeros(2), 0.5, tol=1e-8)
    assert np.max(np.abs(res.point - [2, 0])) <= 1e-8
    # steps are exactly 2**-k; the first one <= 1e-8 is 2**-27, taken by the 28th application
    assert res.iterations == 28
    assert res.trace == [2.0**-k for k in range(28)]
    assert res.residual == pytest.approx(2.0**-28)
    assert res.apriori_bound == pytest.approx(0.5**28 / 0.5 * 1.0)
    assert res.aposteriori_bound <= 1e-8


def test_one_point_space():
    space = ConeMetricSpace(Orthant(1), lambda x, y: np.zeros(1) if x == y else np.ones(1))
    m = InducedMetric(space, Scalarizer(Orthant(1), (1,)))
    res = solve_contraction(m, lambda x: x, "p", 0.5)
    assert res.point == "p" and res.iterations == 1 and res.residual == 0


def test_halving_on_the_line():
    res = solve_contraction(scalar_line(), lambda x: x / 2, 1.0, 0.5, tol=1e-10)
    assert abs(res.point) <= 1e-10


def test_geometric_decay_and_uniqueness():
    m = chebyshev()
    a = solve_contraction(m, affine, np.array([0.0, 0.0]), 0.5, tol=1e-8)
    b = solve_contraction(m, affine, np.array([-7.0, 4.0]), 0.5, tol=1e-8)
    for s0, s1 in zip(a.trace, a.trace[1:]):
        assert s1 <= 0.5 * s0 * (1 + 1e-9)
    assert m.distance(a.point, b.point) <= 2e-8


def test_vector_condition_implies_scalar_condition():
    m = chebyshev()
    M = np.array([[0.3, 0.1], [-0.2, 0.25]])
    T = lambda x: M @ x + np.array([1.0, -1.0])  # noqa: E731
    lam = 0.5
    rng = np.random.default_rng(0)
    for x, y in zip(rng.normal(size=(300, 2)), rng.normal(size=(300, 2))):
        if m.cone.leq(m.space.d(T(x), T(y)), lam * m.space.d(x, y)):
            assert m.distance(T(x), T(y)) <= lam * m.distance(x, y) + 1e-9


def test_bad_lambda():
    for lam in (0.0, 1.0, 1.5, -0.1):
        with pytest.raises(ValueError):
            solve_contraction(chebyshev(), affine, np.zeros(2), lam)


def test_max_iter_exceeded():
    with pytest.raises(ConvergenceError) as info:
        solve_contraction(chebyshev(), affine, np.zeros(2), 0.5, tol=1e-12, max_iter=5)
    assert info.value.iterations == 5
    np.testing.assert_allclose(info.value.best, [2 - 2**-4, 0])


def test_estimate_factor_affine_line():
    pairs = [(0.0, 1.0), (-3.0, 5.0), (2.0, 2.5)]
    assert estimate_contraction_factor(scalar_line(), lambda x: 0.3 * x + 7, pairs) == pytest.approx(0.3)


def test_estimate_factor_chebyshev():
    rng = np.random.default_rng(1)
    pairs = list(zip(rng.normal(size=(50, 2)), rng.normal(size=(50, 2))))
    assert estimate_contraction_factor(chebyshev(), affine, pairs) == pytest.approx(0.5)


def test_estimate_factor_expansion_warns(caplog):
    with caplog.at_level(logging.WARNING):
        f = estimate_contraction_factor(scalar_line(), lambda x: 2 * x, [(0.0, 1.0)])
    assert f == pytest.approx(2.0)
    assert "exceeds 1" in caplog.text


def test_estimate_factor_zero_pair():
    with pytest.raises(ValueError):
        estimate_contraction_factor(scalar_line(), lambda x: x, [(1.0, 1.0)])
