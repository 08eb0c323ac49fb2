"""KS balls, Massart radii and moment confidence intervals."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from logconcave.catalog import gaussian, laplace
from logconcave.confidence import (
    EmpiricalSample,
    SearchConfig,
    coverage_simulation,
    ks_distance,
    massart_constant,
    moment_confidence_interval,
)
from logconcave.density import verify_concavity
from logconcave.errors import InfeasibleError, PreconditionError
from logconcave.polynomial import Polynomial

X = Polynomial.parse("x")


@pytest.fixture(scope="module")
def laplace_result():
    x = laplace().sample(100, np.random.default_rng(21))
    return EmpiricalSample(x), moment_confidence_interval(EmpiricalSample(x), X, 0.05)


class TestMassart:
    @pytest.mark.parametrize("alpha, value", [(0.05, 1.3581015157406195), (0.01, 1.6276236307187293), (2.0, 0.0)])
    def test_values(self, alpha, value):
        assert massart_constant(alpha) == pytest.approx(value, abs=1e-12)

    @pytest.mark.parametrize("alpha", [0.0, -0.1, 2.5])
    def test_domain(self, alpha):
        with pytest.raises(ValueError):
            massart_constant(alpha)

    @given(st.floats(1e-6, 1.0), st.floats(1e-6, 1.0))
    def test_monotone(self, a, b):
        if a < b:
            assert massart_constant(a) >= massart_constant(b)


class TestKS:
    def test_single_point(self):
        assert ks_distance(EmpiricalSample([0.0]), laplace()) == pytest.approx(0.5, abs=1e-15)

    def test_interleaving(self):
        n = 40
        f = gaussian()
        x = f.ppf((np.arange(1, n + 1) - 0.5) / n)
        assert ks_distance(EmpiricalSample(x), f) == pytest.approx(1 / (2 * n), abs=1e-12)

    @given(st.integers(0, 10_000), st.integers(1, 300))
    def test_against_scipy(self, seed, n):
        x = np.random.default_rng(seed).laplace(size=n)
        ref = stats.kstest(x, laplace().cdf).statistic
        assert ks_distance(EmpiricalSample(x), laplace()) == pytest.approx(ref, abs=1e-13)

    def test_calibration_matches_exact_law(self):
        # miss rate of the Massart ball at n=100 against the exact Kolmogorov law, 3.5 binomial sd
        f, n, m = laplace(), 100, 3000
        r = massart_constant(0.05) / np.sqrt(n)
        misses = np.mean([ks_distance(EmpiricalSample(f.sample(n, np.random.default_rng(s))), f) > r for s in range(m)])
        p = stats.kstwo.sf(r, n)
        assert abs(misses - p) <= 3.5 * np.sqrt(p * (1 - p) / m)
        assert p <= 0.05

    def test_sample_validation(self):
        with pytest.raises(PreconditionError):
            EmpiricalSample([])
        with pytest.raises(PreconditionError):
            EmpiricalSample([0.0, np.nan])

    def test_sorted_copy(self):
        e = EmpiricalSample([3.0, 1.0, 2.0])
        assert list(e.values) == [1.0, 2.0, 3.0] and e.n == 3


class TestInterval:
    def test_witnesses_feasible(self, laplace_result):
        e, res = laplace_result
        assert res.radius == pytest.approx(massart_constant(0.05) / 10)
        for w, gap, end in zip((res.lo_witness, res.hi_witness), res.feasibility_gaps, res.interval):
            verify_concavity(w)
            assert w.piece_probabilities().sum() == pytest.approx(1.0, abs=1e-8)
            assert ks_distance(e, w) == pytest.approx(gap, abs=1e-15)
            assert gap <= res.radius + 1e-9
            assert w.mean() == pytest.approx(end, rel=1e-9, abs=1e-12)

    def test_fit_inside(self, laplace_result):
        _, res = laplace_result
        lo, hi = res.interval
        assert lo <= res.fit_moment <= hi
        assert hi - lo > 0
        assert res.fit_gap <= res.radius
        assert res.kind == "inner approximation"

    def test_to_dict(self, laplace_result):
        d = laplace_result[1].to_dict()
        assert d["kind"] == "inner approximation" and len(d["interval"]) == 2

    def test_nested_levels(self, laplace_result):
        e, wide = laplace_result
        narrow = moment_confidence_interval(e, X, 0.5)
        assert wide.interval[0] <= narrow.interval[0] and narrow.interval[1] <= wide.interval[1]

    def test_constant_polynomial(self, laplace_result):
        e, _ = laplace_result
        res = moment_confidence_interval(e, Polynomial.parse("1"), 0.05)
        assert res.interval[0] == pytest.approx(1.0, abs=1e-12) and res.interval[1] == pytest.approx(1.0, abs=1e-12)

    def test_deterministic(self):
        x = gaussian().sample(60, np.random.default_rng(2))
        a = moment_confidence_interval(EmpiricalSample(x), X, 0.05)
        b = moment_confidence_interval(EmpiricalSample(x), X, 0.05)
        assert a.interval == b.interval

    def test_second_moment(self):
        x = gaussian().sample(150, np.random.default_rng(8))
        res = moment_confidence_interval(EmpiricalSample(x), Polynomial.parse("x^2"), 0.05)
        assert 0 < res.interval[0] <= res.fit_moment <= res.interval[1]
        assert res.hi_witness.power_moments(2)[2] == pytest.approx(res.interval[1], rel=1e-9)

    def test_small_search_config(self):
        x = laplace().sample(80, np.random.default_rng(5))
        res = moment_confidence_interval(EmpiricalSample(x), X, 0.05, SearchConfig(max_knots=10, max_bursts=2))
        assert res.interval[0] <= res.fit_moment <= res.interval[1]

    def test_preconditions(self):
        with pytest.raises(PreconditionError):
            moment_confidence_interval(EmpiricalSample(np.arange(5.0)), X)
        with pytest.raises(PreconditionError):
            moment_confidence_interval(EmpiricalSample(np.arange(20.0)), Polynomial.parse("x1*x2", dim=2))
        with pytest.raises(PreconditionError):
            moment_confidence_interval(EmpiricalSample(np.arange(20.0)), Polynomial.parse("x^7"))

    def test_infeasible_bimodal(self):
        # two far-apart clusters cannot sit in a tight KS ball around any log-concave law
        u = (np.arange(2000) + 0.5) / 2000
        x = np.where(u < 0.5, stats.norm.ppf(2 * u) - 6, stats.norm.ppf(2 * u - 1) + 6)
        with pytest.raises(InfeasibleError):
            moment_confidence_interval(EmpiricalSample(x), X, 0.5)


class TestCoverage:
    def test_reps_floor(self):
        with pytest.raises(PreconditionError):
            coverage_simulation(laplace(), X, reps=10)

    def test_small_run(self):
        cfg = SearchConfig(max_knots=12, max_bursts=2)
        res = coverage_simulation(laplace(), X, 0.05, n=40, reps=50, seed=3, cfg=cfg)
        assert res.intervals.shape == (50, 2)
        assert res.truth_value == 0.0
        assert res.coverage >= 0.8
        again = coverage_simulation(laplace(), X, 0.05, n=40, reps=50, seed=3, cfg=cfg)
        assert np.array_equal(res.intervals, again.intervals, equal_nan=True)
