"""Hazard monotonicity and the moment inequality."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from logconcave.catalog import CATALOG_NAMES, BimodalMixture, catalog, exponential, gaussian, laplace, uniform
from logconcave.errors import PreconditionError
from logconcave.univariate import (
    check_hazard_monotone,
    equality_search,
    hazard_boundary_profile,
    hazard_grid,
    hazard_left,
    hazard_right,
    loglinear_equality_witness,
    moment_bound,
    summarize,
)
from strategies import loglinear_densities


class TestHazards:
    def test_exponential_closed_form(self):
        x = np.array([0.1, 1.0, 5.0])
        assert np.allclose(hazard_right(exponential(), x), 1.0, rtol=1e-12)
        assert np.allclose(hazard_left(exponential(), x), np.exp(-x) / (1 - np.exp(-x)), rtol=1e-12)

    def test_gaussian_against_scipy(self):
        x = np.linspace(-3, 3, 13)
        ref = stats.norm.pdf(x) / stats.norm.sf(x)
        assert np.allclose(hazard_right(gaussian(), x), ref, rtol=5e-3)

    def test_far_tail_finite(self):
        # log-space evaluation keeps the Laplace right hazard at 1 deep in the tail
        assert hazard_right(laplace(), 600.0) == pytest.approx(1.0, rel=1e-9)

    def test_undefined(self):
        with pytest.raises(PreconditionError):
            hazard_left(uniform(), -1.0)
        with pytest.raises(PreconditionError):
            hazard_right(uniform(), 2.0)

    @pytest.mark.parametrize("name", CATALOG_NAMES)
    def test_catalog_monotone(self, name):
        assert check_hazard_monotone(catalog(name)) == []

    @given(loglinear_densities())
    def test_random_monotone(self, f):
        assert check_hazard_monotone(f, hazard_grid(f, n=200)) == []

    def test_bimodal_control(self):
        v = check_hazard_monotone(BimodalMixture())
        assert len(v) >= 1

    def test_unsorted_grid(self):
        with pytest.raises(ValueError):
            check_hazard_monotone(laplace(), [1.0, 0.0])

    def test_boundary_blowup(self):
        # the uniform left hazard is 1/h at distance h from 0
        h, vals = hazard_boundary_profile(uniform(), "left", 10)
        assert np.allclose(h * vals, 1.0, rtol=1e-9)
        with pytest.raises(PreconditionError):
            hazard_boundary_profile(gaussian(), "right")


class TestMomentBound:
    def test_laplace_equality(self):
        rep, equal = moment_bound(laplace(), 0.0)
        assert abs(rep.lhs - 0.25) <= 1e-9 and abs(rep.rhs - 0.25) <= 1e-9
        assert equal and rep.passed

    def test_exponential_equality(self):
        rep, equal = moment_bound(exponential(), 0.0)
        assert abs(rep.lhs - 1.0) <= 1e-9 and abs(rep.rhs - 1.0) <= 1e-9
        assert equal

    def test_gaussian_strict(self):
        rep, equal = moment_bound(gaussian(), 0.0)
        assert rep.passed and not equal
        assert rep.lhs == pytest.approx(1 / (2 * np.pi), rel=1e-3)
        assert rep.rhs == pytest.approx(0.5, rel=1e-3)

    @given(loglinear_densities(), st.floats(0.01, 0.99))
    def test_random(self, f, u):
        rep, _ = moment_bound(f, float(f.ppf(u)))
        assert rep.passed

    def test_witness(self):
        w = loglinear_equality_witness(0.0, 0.25, 0.25)
        assert w.a == pytest.approx(1.0) and w.b == pytest.approx(1 / 3)
        assert w.g.cdf(np.array([0.0]))[0] == pytest.approx(0.25, rel=1e-12)
        assert w.g.pdf(np.array([0.0]))[0] == pytest.approx(0.25, rel=1e-12)
        _, equal = moment_bound(w.g, 0.0)
        assert equal

    @given(st.floats(-5, 5), st.floats(0.05, 0.95), st.floats(0.05, 5))
    def test_witness_equality_everywhere(self, x_o, F_o, f_o):
        _, equal = moment_bound(loglinear_equality_witness(x_o, F_o, f_o).g, x_o)
        assert equal

    def test_witness_arguments(self):
        with pytest.raises(ValueError):
            loglinear_equality_witness(0.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            loglinear_equality_witness(0.0, 0.5, 0.0)

    def test_kinked_densities_strict(self):
        ratio, _ = equality_search(100, seed=4)
        assert ratio < 1.0

    def test_summary(self):
        s = summarize(exponential())
        assert s.mu == pytest.approx(1.0) and s.sigma == pytest.approx(1.0)
        assert s.t_l == 0.0 and s.t_u == np.inf
