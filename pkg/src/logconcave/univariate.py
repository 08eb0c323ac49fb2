"""Hazard functions and the moment inequality for univariate log-concave densities."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES
from .density import PiecewiseLogLinearDensity
from .errors import PreconditionError
from .inequalities import BoundReport


@dataclass(frozen=True)
class UnivariateSummary:
    mu: float
    sigma: float
    t_l: float
    t_u: float


def summarize(f: PiecewiseLogLinearDensity) -> UnivariateSummary:
    lo, hi = f.support
    return UnivariateSummary(f.mean(), float(np.sqrt(f.variance())), lo, hi)


def _logs(f, x):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return f.logpdf(x), f.logcdf(x), f.logsf(x)


def hazard_left(f, x):
    """f(x) / F(x), computed in log space."""
    lp, lc, _ = _logs(f, x)
    if np.any(np.isneginf(lc)):
        raise PreconditionError("F(x) = 0: left hazard undefined")
    out = np.exp(lp - lc)
    return float(out) if np.ndim(out) == 0 else out


def hazard_right(f, x):
    """f(x) / (1 - F(x)), computed in log space."""
    lp, _, ls = _logs(f, x)
    if np.any(np.isneginf(ls)):
        raise PreconditionError("F(x) = 1: right hazard undefined")
    out = np.exp(lp - ls)
    return float(out) if np.ndim(out) == 0 else out


def hazard_grid(f, n: int = 1000, p_lo: float = 1e-6, p_hi: float = 1 - 1e-6) -> np.ndarray:
    """Sorted grid of ``n`` interior quantiles of ``f``."""
    p = np.linspace(p_lo, p_hi, n)
    if hasattr(f, "ppf"):
        grid = f.ppf(p)
    else:
        # vectorized bisection on the cdf
        lo, hi = np.full(n, -1e3), np.full(n, 1e3)
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            below = np.asarray(f.cdf(mid)) < p
            lo, hi = np.where(below, mid, lo), np.where(below, hi, mid)
        grid = 0.5 * (lo + hi)
    return np.unique(grid)


@dataclass(frozen=True)
class HazardViolation:
    kind: str  # "left" (f/F increased) or "right" (f/(1-F) decreased)
    x0: float
    x1: float
    change: float


def check_hazard_monotone(f, grid=None, slack: float | None = None) -> list[HazardViolation]:
    """Violations of f/F non-increasing and f/(1-F) non-decreasing along ``grid``.

    Points where a hazard is undefined (F = 0 or F = 1) are skipped.  Changes
    are compared on the log scale with a relative ``slack``.
    """
    slack = DEFAULT_TOLERANCES.hazard_slack if slack is None else slack
    grid = hazard_grid(f) if grid is None else np.asarray(grid, dtype=float)
    if np.any(np.diff(grid) < 0):
        raise ValueError("grid must be sorted")
    lp, lc, ls = _logs(f, grid)
    out = []
    for kind, logh, sign in (("left", lp - lc, 1.0), ("right", lp - ls, -1.0)):
        ok = np.isfinite(logh)
        xs, h = grid[ok], logh[ok]
        step = sign * np.diff(h)
        bad = np.nonzero(step > slack * np.maximum(1.0, np.abs(h[:-1])))[0]
        out.extend(HazardViolation(kind, float(xs[i]), float(xs[i + 1]), float(step[i])) for i in bad)
    return out


def hazard_boundary_profile(f, side: str = "left", n_levels: int = 20):
    """(h, hazard at distance h from a finite support endpoint) along h = 2^-k.

    The left hazard is used at the lower endpoint and the right hazard at the
    upper one; both diverge like a constant over h.
    """
    lo, hi = f.support
    end = lo if side == "left" else hi
    if not np.isfinite(end):
        raise PreconditionError(f"{side} end of the support is not finite")
    width = min(hi - lo, 1.0) if np.isfinite(hi - lo) else 1.0
    h = width * 2.0 ** -np.arange(1, n_levels + 1)
    x = end + h if side == "left" else end - h
    vals = hazard_left(f, x) if side == "left" else hazard_right(f, x)
    return h, np.asarray(vals)


# -- moment inequality -------------------------------------------------------------


def moment_bound(f: PiecewiseLogLinearDensity, x_o: float, tol: float | None = None) -> tuple[BoundReport, bool]:
    """f(x_o)^2 <= (2 F^3 + 2 (1 - F)^3) / ((x_o - mu)^2 + sigma^2).

    Returns the report and an equality flag (|margin| <= tol * rhs).
    """
    tol = DEFAULT_TOLERANCES.equality_rel if tol is None else tol
    x_o = float(x_o)
    mu = f.mean()
    var = f.variance()
    fo = float(f.pdf(np.array([x_o]))[0])
    F = float(f.cdf(np.array([x_o]))[0])
    S = float(f.sf(np.array([x_o]))[0])
    lhs = fo**2
    rhs = (2 * F**3 + 2 * S**3) / ((x_o - mu) ** 2 + var)
    # rounding in mu, var and F is relative machine precision times a modest factor
    err = 64 * np.finfo(float).eps * (f.knots.size + 2) * max(lhs, rhs)
    report = BoundReport("moment_bound", lhs, rhs, err, DEFAULT_TOLERANCES.check, None, {"x_o": x_o, "mu": mu, "var": var, "F": F})
    equal = abs(report.margin) <= tol * rhs
    return report, bool(equal)


@dataclass(frozen=True)
class LogLinearWitness:
    x_o: float
    a: float
    b: float
    g: PiecewiseLogLinearDensity


def loglinear_equality_witness(x_o: float, F_o: float, f_o: float) -> LogLinearWitness:
    """Two-sided exponential density with value ``f_o`` and left mass ``F_o`` at ``x_o``."""
    if not 0 < F_o < 1:
        raise ValueError("F_o must lie in (0, 1)")
    if not f_o > 0:
        raise ValueError("f_o must be positive")
    a = f_o / F_o
    b = f_o / (1 - F_o)
    g = PiecewiseLogLinearDensity([x_o], [np.log(f_o)], a, -b)
    return LogLinearWitness(float(x_o), float(a), float(b), g)


def random_loglinear_density(rng, n_knots: int = 6) -> PiecewiseLogLinearDensity:
    """Random piecewise log-linear density with strictly decreasing chord slopes."""
    t = np.sort(rng.normal(size=n_knots) * 2)
    slopes = np.sort(rng.normal(size=n_knots + 1) * 2)[::-1]
    slopes[0] = abs(slopes[0]) + 0.1
    slopes[-1] = -abs(slopes[-1]) - 0.1
    slopes = np.sort(slopes)[::-1]
    phi = np.concatenate([[0.0], np.cumsum(slopes[1:-1] * np.diff(t))])
    return PiecewiseLogLinearDensity(t, phi, slopes[0], slopes[-1])


def equality_search(n_trials: int = 200, seed: int = 0):
    """Largest lhs/rhs ratio of the moment inequality over random densities with kinks.

    Densities with at least one interior kink on each side of ``x_o`` are not
    log-linear on both half-lines, so a ratio reaching one would contradict
    the equality characterization.  Returns ``(max_ratio, worst_case)``.
    """
    rng = np.random.default_rng(seed)
    worst = (0.0, None)
    for _ in range(n_trials):
        f = random_loglinear_density(rng)
        t = f.knots
        x_o = float(rng.uniform(t[1], t[-2]))
        rep, _ = moment_bound(f, x_o)
        ratio = rep.lhs / rep.rhs
        if ratio > worst[0]:
            worst = (ratio, {"density": f.to_dict(), "x_o": x_o})
    return worst
