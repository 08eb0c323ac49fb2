"""Distances, MGF domains and convergence reports for univariate sequences."""

import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, stats

from logconcave.catalog import exponential, gaussian, laplace, uniform
from logconcave.convergence import (
    SEQUENCES,
    CompactSet,
    SublinearFn,
    check_sublinear,
    convergence_report,
    decay_certificate,
    divergence_witness,
    l1_distance,
    make_sequence,
    mgf_domain,
    shift,
    sup_distance,
    truncated_mgf,
    weighted_l1,
)
from logconcave.errors import PreconditionError
from logconcave.polynomial import Polynomial
from strategies import loglinear_densities


def _quad_abs(f, g, logweight=lambda x: 0.0):
    knots = np.concatenate([[-np.inf], np.unique(np.concatenate([f.knots, g.knots, [0.0]])), [np.inf]])
    total = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for a, b in zip(knots[:-1], knots[1:]):
            total += integrate.quad(lambda x: _weighted_gap(f, g, logweight, x), a, b, limit=200)[0]
    return total


def _weighted_gap(f, g, logweight, x):
    w = logweight(x)
    return abs(np.exp(w + f.logpdf(np.array([x]))[0]) - np.exp(w + g.logpdf(np.array([x]))[0]))


class TestL1:
    def test_gaussian_shift(self):
        # ||N(0,1) - N(1,1)||_1 = 2 (2 Phi(1/2) - 1)
        d = l1_distance(gaussian(), gaussian(1.0, 1.0))
        assert d == pytest.approx(2 * (2 * stats.norm.cdf(0.5) - 1), abs=2e-3)

    def test_disjoint(self):
        assert l1_distance(uniform(0, 1), uniform(2, 3)) == pytest.approx(2.0, abs=1e-14)

    def test_nested_uniform(self):
        assert l1_distance(uniform(0, 1), uniform(0, 2)) == pytest.approx(1.0, abs=1e-14)

    def test_self_zero(self):
        assert l1_distance(laplace(), laplace()) == 0.0

    @given(loglinear_densities(max_knots=4, bounded=False), st.floats(-1, 1))
    def test_against_quadrature(self, f, c):
        g = shift(f, c)
        assert l1_distance(f, g) == pytest.approx(_quad_abs(f, g), abs=1e-6)

    @given(loglinear_densities(max_knots=4), loglinear_densities(max_knots=4))
    def test_metric_bounds(self, f, g):
        d = l1_distance(f, g)
        assert 0.0 <= d <= 2.0 + 1e-12
        assert d == pytest.approx(l1_distance(g, f), abs=1e-12)


class TestWeighted:
    def test_zero_weight_is_l1(self):
        f, g = laplace(), shift(laplace(), 0.3)
        assert weighted_l1(f, g, SublinearFn(0.0, 0.0)) == pytest.approx(l1_distance(f, g), rel=1e-12)

    def test_against_quadrature(self):
        f, g = laplace(), shift(laplace(), 0.3)
        A = SublinearFn(0.2, 0.1)
        ref = _quad_abs(f, g, lambda x: 0.2 * x + 0.1 * abs(x))
        assert weighted_l1(f, g, A) == pytest.approx(ref, rel=1e-7)

    def test_outside_domain_rejected(self):
        with pytest.raises(PreconditionError):
            weighted_l1(laplace(), laplace(), SublinearFn(0.0, 1.5))

    def test_negative_eps(self):
        with pytest.raises(ValueError):
            SublinearFn(0.0, -0.1)

    @given(st.floats(-3, 3), st.floats(0, 3))
    def test_sublinear(self, theta, eps):
        sub, hom, ok = check_sublinear(SublinearFn(theta, eps), n=500)
        assert ok


class TestSup:
    def test_against_dense_grid(self):
        f, g = gaussian(), gaussian(0.3, 1.2)
        got = sup_distance(g, f, CompactSet(((-2.0, 2.0),)))
        x = np.linspace(-2, 2, 200_001)
        ref = np.max(np.abs(g.pdf(x) - f.pdf(x)))
        assert ref <= got + 1e-12
        assert got == pytest.approx(ref, abs=1e-9)

    def test_boundary_margin(self):
        with pytest.raises(PreconditionError):
            sup_distance(uniform(0, 1.1), uniform(), CompactSet(((0.0, 0.5),)))

    def test_bad_interval(self):
        with pytest.raises(ValueError):
            sup_distance(laplace(), laplace(), CompactSet(((1.0, 0.0),)))


class TestMGF:
    def test_domains(self):
        d = mgf_domain(laplace())
        assert (d.lower, d.upper) == (-1.0, 1.0)
        e = mgf_domain(exponential())
        assert e.lower == -np.inf and e.upper == 1.0
        assert mgf_domain(uniform()).lower == -np.inf and mgf_domain(uniform()).upper == np.inf

    def test_endpoints_excluded(self):
        d = mgf_domain(laplace())
        assert not d.contains(1.0) and not d.contains(-1.0) and d.contains(1 - 1e-6)

    @pytest.mark.parametrize("theta", [1 + 1e-6, -1 - 1e-6, 1.5])
    def test_divergence_flag_outside(self, theta):
        assert divergence_witness(laplace(), theta).diverged

    @pytest.mark.parametrize("theta", [1 - 1e-6, -1 + 1e-6, 0.5])
    def test_no_flag_inside(self, theta):
        # sup of the truncated MGF is 1/(1 - theta^2) < 1e6 here
        w = divergence_witness(laplace(), theta)
        assert not w.diverged
        assert w.values[-1] == pytest.approx(1 / (1 - theta**2), rel=1e-6)

    def test_truncated_mgf(self):
        # int_{-1}^{1} e^{x/2} e^{-|x|}/2 dx
        ref = 0.5 * ((1 - np.exp(-1.5)) / 1.5 + (1 - np.exp(-0.5)) / 0.5)
        assert truncated_mgf(laplace(), 0.5, 1.0) == pytest.approx(ref, rel=1e-13)

    def test_decay_certificate(self):
        assert decay_certificate(laplace(), 0.2, 0.1)
        assert not decay_certificate(laplace(), 0.0, 1.0)


class TestSequences:
    @pytest.mark.parametrize("kind", SEQUENCES)
    def test_l1_goes_to_zero(self, kind):
        seq, limit = make_sequence(kind, [10, 100, 1000])
        d = [l1_distance(f, limit) for f in seq]
        assert d[0] > d[1] > d[2] and d[2] < 0.01

    def test_unknown(self):
        with pytest.raises(ValueError):
            make_sequence("cauchy", [1])

    def test_report(self):
        ns = [25, 50, 100, 200]
        seq, limit = make_sequence("location", ns)
        p = Polynomial.parse("x")
        rep = convergence_report(
            seq, limit, polys=[p], theta_grid=[0.5, 2.0], A=SublinearFn(0.2, 0.1), S=CompactSet(((-1.0, 1.0),)), n_values=ns
        )
        assert rep.columns == ["n", "l1", "weighted_l1", "sup", f"moment[{p}]", "laplace[0.5]"]
        assert np.allclose(rep.column(f"moment[{p}]"), 1.0 / np.array(ns), rtol=1e-9)
        assert rep.trend("l1", tail=4)["eventually_decreasing"]
        assert len(rep.divergence) == 1 and rep.divergence[0].diverged
        assert rep.limit_values["laplace[0.5]"] == pytest.approx(4 / 3, rel=1e-12)
