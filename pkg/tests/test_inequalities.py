"""Simplex, envelope, tail, corner and ball inequalities."""

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy import stats

from logconcave.catalog import CATALOG_NAMES, catalog, gaussian, laplace, uniform
from logconcave.errors import DimensionError, PreconditionError
from logconcave.inequalities import (
    H,
    BoundReport,
    ball_upper_bound,
    check_envelope,
    check_product_bound,
    check_ratio_bounds,
    check_sandwich,
    corner_log_bounds,
    delta_t,
    envelope,
    exp_tail_constants,
    run_lemma_suite,
    sup_over_ball,
)
from logconcave.simplex import Simplex

from strategies import loglinear_densities

STD2 = Simplex(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))


class TestReport:
    def test_margin_and_pass(self):
        r = BoundReport("x", 1.0, 2.0)
        assert r.margin == 1.0 and r.passed
        assert not BoundReport("x", 2.0, 1.0).passed

    def test_error_bound_can_fail(self):
        assert not BoundReport("x", 1.0, 1.0 + 1e-3, error_bound=1e-2).passed

    def test_relative_tolerance(self):
        assert BoundReport("x", 1e6 * (1 + 1e-10), 1e6, tol=1e-9).passed

    def test_row_columns(self):
        assert list(BoundReport("x", 0.0, 1.0, seed=3).as_row()) == ["name", "lhs", "rhs", "margin", "pass", "error_bound", "seed"]


class TestProductAndRatio:
    def test_laplace_interval_oracle(self):
        f = laplace()
        s = Simplex(np.array([[-0.5], [1.5]]))
        P = stats.laplace.cdf(1.5) - stats.laplace.cdf(-0.5)
        r = check_product_bound(f, s)
        assert r.lhs == pytest.approx(stats.laplace.pdf(-0.5) * stats.laplace.pdf(1.5), rel=1e-12)
        assert r.rhs == pytest.approx((P / 2.0) ** 2, rel=1e-12)
        assert r.passed

    def test_uniform_equality(self):
        r = check_product_bound(uniform(), Simplex(np.array([[0.2], [0.7]])))
        assert abs(r.margin) <= 1e-9 and r.passed
        r2 = check_product_bound(catalog("uniform", dim=2), Simplex(np.array([[0.1, 0.1], [0.9, 0.1], [0.1, 0.9]])))
        assert abs(r2.margin) <= 1e-9 and r2.passed

    @given(loglinear_densities(), st.floats(0.01, 0.99), st.floats(0.01, 0.99))
    def test_product_random_densities(self, f, u, v):
        a, b = sorted(f.ppf(np.array([u, v])))
        assume(b - a > 1e-6)
        assert check_product_bound(f, Simplex(np.array([[a], [b]]))).passed

    @given(loglinear_densities(), st.floats(0.02, 0.98), st.floats(0.02, 0.98))
    def test_ratio_random_densities(self, f, u, v):
        a, b = f.ppf(np.array([u, v]))
        assume(abs(b - a) > 1e-6)
        first, second = check_ratio_bounds(f, Simplex(np.array([[a], [b]])))
        assert first.passed
        if first.rhs <= 1.0:
            assert second is not None and second.passed
        elif first.rhs > 1.0 + first.tol:
            assert second is None

    def test_second_ratio_bound_relation(self):
        # with q = P/(ftilde |s|) the two right-hand sides are q^(d+1) and exp(d - d/q);
        # they touch at q = 1 and exp(d - d/q) is the smaller one for small q
        d = 2
        q = np.array([0.05, 0.2, 0.4])
        assert np.all(np.exp(d - d / q) < q ** (d + 1))
        # slopes d < d + 1 at q = 1, so just below 1 the exponential bound is the weaker one
        q = np.array([0.5, 0.8, 0.99])
        assert np.all(np.exp(d - d / q) > q ** (d + 1))

    def test_vertex_outside_support(self):
        with pytest.raises(PreconditionError):
            check_ratio_bounds(uniform(), Simplex(np.array([[0.5], [2.0]])))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            check_product_bound(laplace(), STD2)


class TestSandwich:
    @given(st.floats(0, 1))
    def test_gaussian_d1(self, w):
        s = Simplex(np.array([[-1.0], [0.7]]))
        lo, hi = check_sandwich(gaussian(), s, [-1.0 + 1.7 * w])
        assert lo.passed and hi.passed

    def test_d2_centroid(self):
        f = catalog("gamma", dim=2)
        s = Simplex(np.array([[0.5, 0.5], [3.0, 1.0], [1.0, 2.5]]))
        lo, hi = check_sandwich(f, s, s.centroid)
        assert lo.passed and hi.passed

    def test_y_outside(self):
        with pytest.raises(PreconditionError):
            check_sandwich(gaussian(), Simplex(np.array([[0.0], [1.0]])), [2.0])


class TestEnvelope:
    def test_H_branches(self):
        assert H(0.5, 2) == pytest.approx(8.0)
        assert H(1.0, 2) == pytest.approx(1.0)
        assert H(2.0, 2) == pytest.approx(np.exp(-2.0))
        assert H(0.0, 1) == np.inf
        with pytest.raises(ValueError):
            H(-1.0, 1)

    def test_constant_standard_triangle(self):
        X = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 1.0, 1.0]])
        C = 0.5 / np.sqrt(3) / np.linalg.svd(X, compute_uv=False)[0]
        env = envelope(catalog("laplace", dim=2), STD2)
        assert env.C == pytest.approx(C, rel=1e-12)
        # X X^T has largest eigenvalue 2 + sqrt(3)
        assert STD2.sigma_max == pytest.approx(np.sqrt(2 + np.sqrt(3)), rel=1e-14)

    @pytest.mark.parametrize("name", CATALOG_NAMES)
    @pytest.mark.parametrize("d", [1, 2])
    def test_domination(self, name, d):
        f = catalog(name, dim=d)
        rng = np.random.default_rng(11)
        V = np.asarray(f.sample(d + 1, rng), dtype=float).reshape(d + 1, d)
        assert check_envelope(f, Simplex(V), n_points=500, seed=2).passed

    def test_vertex_outside_support(self):
        with pytest.raises(PreconditionError):
            envelope(uniform(), Simplex(np.array([[0.5], [3.0]])))


class TestTail:
    @pytest.mark.parametrize("name", CATALOG_NAMES)
    @pytest.mark.parametrize("d", [1, 2])
    def test_catalog(self, name, d):
        tc = exp_tail_constants(catalog(name, dim=d))
        assert tc.grid_max_ratio <= 1.0 and tc.C1 > 0 and tc.C2 > 0

    def test_rate_not_faster_than_truth(self):
        # Laplace decays like exp(-|x|); any valid bound must have C2 <= 1
        tc = exp_tail_constants(laplace())
        assert tc.C2 <= 1.0
        x = np.linspace(-40, 40, 2001)
        assert np.all(laplace().pdf(x) <= tc(x[:, None]) * (1 + 1e-12))


class TestCorner:
    @pytest.mark.parametrize("name", CATALOG_NAMES)
    def test_catalog_d1(self, name):
        f = catalog(name)
        rng = np.random.default_rng(5)
        s = Simplex(np.sort(f.sample(2, rng)).reshape(2, 1))
        assert all(r.passed for r in corner_log_bounds(f, s))

    def test_gaussian_d2(self):
        f = catalog("gaussian", dim=2)
        s = Simplex(np.array([[-0.5, -0.3], [0.6, -0.2], [0.1, 0.7]]))
        assert all(r.passed for r in corner_log_bounds(f, s))

    def test_uniform_margins_zero(self):
        # corner simplices of [0.4, 0.6] stay inside [0, 1], so every quantity is log 1 = 0
        reps = corner_log_bounds(uniform(), Simplex(np.array([[0.4], [0.6]])))
        assert all(r.passed and abs(r.margin) <= 1e-9 for r in reps)


class TestBall:
    def test_delta_t(self):
        assert delta_t(1.0, 0.5) == pytest.approx(1 / 3)

    def test_sup_over_ball_gaussian(self):
        # sup of the standard 2-D Gaussian over B((2, 0), 0.5) is attained at (1.5, 0)
        f = catalog("gaussian", dim=2)
        val, _ = sup_over_ball(f, [2.0, 0.0], 0.5)
        exact = float(f.pdf(np.array([[1.5, 0.0]]))[0])
        assert exact <= val * (1 + 1e-9)
        assert val <= exact * (1 + 1e-3)

    @pytest.mark.parametrize("name", CATALOG_NAMES)
    @pytest.mark.parametrize("d", [1, 2])
    def test_catalog(self, name, d):
        f = catalog(name, dim=d)
        origin = np.asarray(f.mode(), dtype=float).reshape(d) if name not in ("uniform", "beta", "gamma", "exponential") else None
        if origin is None:
            lo, hi = (np.array(b, dtype=float).reshape(d) for b in f.support_box())
            hi = np.where(np.isfinite(hi), hi, lo + 4.0)
            origin = 0.5 * (lo + hi)
        r = ball_upper_bound(f, 0.1, np.full(d, 0.3), 0.5, origin=origin)
        assert r.passed

    def test_arguments(self):
        with pytest.raises(ValueError):
            ball_upper_bound(gaussian(), 0.1, [1.0], 1.0)
        with pytest.raises(PreconditionError):
            ball_upper_bound(uniform(), 0.6, [0.1], 0.5, origin=[0.5])


@settings(max_examples=5)
@given(st.integers(0, 1000))
def test_suite_small(seed):
    reps = run_lemma_suite(catalog("laplace", dim=2), 2, seed=seed, n_envelope_points=200)
    assert reps and all(r.passed for r in reps)
