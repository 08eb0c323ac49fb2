import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from logconcave.catalog import CATALOG_NAMES, catalog, exponential, gamma, gaussian, laplace, uniform
from logconcave.density import (
    PiecewiseLogLinearDensity,
    cdf,
    eval_logdensity,
    exp_poly_integrals,
    moment,
    normalize,
    sample,
    verify_concavity,
)
from logconcave.errors import DivergenceError, NonIntegrableError, NotLogConcaveError
from logconcave.polynomial import Polynomial

from strategies import loglinear_densities


def _quad(fn, d, upper=None):
    """Independent adaptive quadrature of ``fn`` over the support, piece by piece."""
    lo, hi = d.support
    hi = hi if upper is None else min(hi, upper)
    edges = [lo] + [k for k in d.knots if lo < k < hi] + [hi]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        if b > a:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", integrate.IntegrationWarning)
                total += integrate.quad(fn, a, b, limit=400, epsabs=1e-14, epsrel=1e-12)[0]
    return total


class TestEvaluation:
    def test_uniform_values(self):
        u = uniform()
        assert eval_logdensity(u, 0.5) == 0.0
        assert eval_logdensity(u, 2.0) == -np.inf

    def test_gaussian_at_zero(self):
        g = gaussian()
        # chords of -z^2/2 at spacing h sit at most h^2/8 below the curve
        h = g.knots[1] - g.knots[0]
        assert eval_logdensity(g, 0.0) == pytest.approx(-0.5 * np.log(2 * np.pi), abs=h**2 / 8)

    def test_log_norm_of_laplace_kernel(self):
        d = PiecewiseLogLinearDensity([0.0], [0.0], 1.0, -1.0)
        assert d.log_norm == pytest.approx(np.log(2.0), abs=1e-15)

    def test_log_norm_gaussian_kernel(self):
        z = np.linspace(-10, 10, 4001)
        d = PiecewiseLogLinearDensity(z, -0.5 * z**2, 10.0, -10.0)
        assert d.log_norm == pytest.approx(0.5 * np.log(2 * np.pi), abs=1e-5)

    def test_normalize_idempotent(self):
        lap = laplace()
        out, err = normalize(lap)
        assert abs(out.log_norm) <= 1e-12
        assert err < 1e-12
        assert np.allclose(out.logvals, lap.logvals - lap.log_norm)

    def test_cdf_examples(self):
        assert cdf(laplace(), 0.0) == pytest.approx(0.5, abs=1e-15)
        assert cdf(exponential(), 1.0) == pytest.approx(1 - np.exp(-1), abs=1e-15)
        assert cdf(laplace(), -np.inf) == 0.0

    def test_validation(self):
        with pytest.raises(NotLogConcaveError):
            PiecewiseLogLinearDensity([0, 1, 2], [0, 0, 1], 1, -1)
        with pytest.raises(NonIntegrableError):
            PiecewiseLogLinearDensity([0], [0], 0.0, -1)
        with pytest.raises(ValueError):
            PiecewiseLogLinearDensity([1, 0], [0, 0], np.inf, -np.inf)


class TestAgainstQuadrature:
    @given(loglinear_densities())
    def test_mass_one(self, d):
        assert _quad(lambda x: float(d.pdf(np.array([x]))[0]), d) == pytest.approx(1.0, abs=1e-8)

    @given(loglinear_densities(), st.floats(-4, 8))
    def test_cdf_matches_integral(self, d, x):
        ref = _quad(lambda u: float(d.pdf(np.array([u]))[0]), d, upper=x) if x > d.support[0] else 0.0
        assert float(d.cdf(np.array([x]))[0]) == pytest.approx(ref, abs=1e-8)

    @given(loglinear_densities(), st.integers(0, 4))
    def test_power_moments(self, d, k):
        ref = _quad(lambda x: x**k * float(d.pdf(np.array([x]))[0]), d)
        assert d.power_moments(k)[k] == pytest.approx(ref, rel=1e-7, abs=1e-9)

    @given(loglinear_densities(bounded=False), st.floats(-0.15, 0.15))
    def test_log_mgf(self, d, theta):
        ref = _quad(lambda x: float(np.exp(theta * x + d.logpdf(np.array([x]))[0])), d)
        assert np.exp(d.log_mgf(theta)) == pytest.approx(ref, rel=1e-8)

    def test_cdf_derivative_is_density(self):
        for name in ("laplace", "gaussian", "gamma", "beta"):
            d = catalog(name)
            step = max(1, d.knots.size // 50)
            mids = 0.5 * (d.knots[:-1] + d.knots[1:])[::step]
            h = 1e-3 * np.diff(d.knots)[::step]
            num = (d.cdf(mids + h) - d.cdf(mids - h)) / (2 * h)
            assert np.allclose(num, np.exp(eval_logdensity(d, mids)), atol=1e-6, rtol=1e-6)


class TestQuantilesAndSampling:
    @given(loglinear_densities(), st.floats(1e-9, 1 - 1e-9))
    def test_ppf_inverts_cdf(self, d, u):
        x = d.ppf(u)
        assert float(d.cdf(np.array([x]))[0]) == pytest.approx(u, abs=1e-9)

    def test_exponential_sample_mean(self):
        x = sample(exponential(), 7, 100_000)
        assert abs(x.mean() - 1.0) <= 3 / np.sqrt(x.size)

    def test_deterministic(self):
        d = gamma()
        assert np.array_equal(sample(d, 3, 50), sample(d, 3, 50))

    def test_uniform_support(self):
        x = sample(uniform(), 1, 10_000)
        assert x.min() >= 0 and x.max() <= 1

    def test_ks_of_samples(self):
        n = 10_000
        fails = 0
        for seed in range(100):
            x = np.sort(sample(laplace(), seed, n))
            F = laplace().cdf(x)
            i = np.arange(1, n + 1)
            D = max(np.max(i / n - F), np.max(F - (i - 1) / n))
            fails += D > 1.63 / np.sqrt(n)
        assert fails <= 1


class TestMoments:
    def test_gaussian_second_moment(self):
        assert moment(gaussian(), Polynomial.parse("x^2")) == pytest.approx(1.0, abs=1e-3)

    @pytest.mark.parametrize("name", CATALOG_NAMES)
    def test_total_mass(self, name):
        assert moment(catalog(name), Polynomial.constant(1.0)) == pytest.approx(1.0, abs=1e-10)

    def test_laplace_mgf(self):
        assert moment(laplace(), Polynomial.constant(1.0), theta=0.5) == pytest.approx(4 / 3, rel=1e-13)

    def test_outside_domain(self):
        with pytest.raises(DivergenceError):
            moment(laplace(), Polynomial.constant(1.0), theta=1.0)

    @given(st.floats(0, 60), st.integers(0, 6))
    def test_exp_poly_integrals(self, c, j):
        ref = integrate.quad(lambda s: s**j * np.exp(-c * s), 0, 1, epsabs=1e-15, epsrel=1e-13)[0]
        assert exp_poly_integrals([c], 6)[0, j] == pytest.approx(ref, rel=1e-11, abs=1e-15)


class TestConcavity:
    @pytest.mark.parametrize("name", CATALOG_NAMES)
    def test_catalog(self, name):
        assert verify_concavity(catalog(name), n_triples=1000)

    @settings(max_examples=25)
    @given(loglinear_densities())
    def test_random(self, d):
        assert verify_concavity(d, n_triples=200)


def test_gamma_mean_matches_scipy():
    assert gamma(3.0, 2.0).mean() == pytest.approx(stats.gamma(3.0, scale=0.5).mean(), rel=1e-3)
