"""Distances between univariate log-concave densities, MGF domains and
convergence reports for sequences of densities.

All distances are exact up to rounding: between consecutive breakpoints of
the union knot grid both log-densities are affine, so ``f - g`` changes sign
at most once there and ``int |f - g|`` is a difference of exact masses.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .catalog import gaussian, laplace, uniform
from .density import PiecewiseLogLinearDensity
from .errors import DivergenceError, PreconditionError
from .polynomial import Polynomial


@dataclass(frozen=True)
class SublinearFn:
    """A(x) = theta . x + eps |x|."""

    theta: np.ndarray | float
    eps: float = 0.0

    def __post_init__(self):
        if self.eps < 0:
            raise ValueError("eps must be non-negative")
        object.__setattr__(self, "theta", np.atleast_1d(np.asarray(self.theta, dtype=float)))

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        x = x.reshape(-1, self.theta.size)
        return x @ self.theta + self.eps * np.linalg.norm(x, axis=1)


def check_sublinear(A: SublinearFn, n: int = 10_000, seed: int = 0, tol: float = 1e-12):
    """Largest subadditivity and homogeneity defects on random inputs."""
    rng = np.random.default_rng(seed)
    d = A.theta.size
    x = rng.normal(size=(n, d)) * rng.exponential(size=(n, 1)) * 10
    y = rng.normal(size=(n, d)) * rng.exponential(size=(n, 1)) * 10
    r = rng.exponential(size=n) * 5
    scale = 1.0 + np.abs(A(x)) + np.abs(A(y))
    sub = np.max((A(x + y) - A(x) - A(y)) / scale)
    hom = np.max(np.abs(A(r[:, None] * x) - r * A(x)) / (1.0 + np.abs(r * A(x))))
    return float(sub), float(hom), bool(sub <= tol and hom <= tol)


@dataclass(frozen=True)
class MGFDomain1D:
    """Open interval (lower, upper) of tilts with a finite moment generating function."""

    lower: float
    upper: float

    def contains(self, theta) -> bool:
        return bool(self.lower < theta < self.upper)


def mgf_domain(f: PiecewiseLogLinearDensity) -> MGFDomain1D:
    return MGFDomain1D(-f.left_slope, -f.right_slope)


def mgf_domain_contains(f: PiecewiseLogLinearDensity, theta: float) -> bool:
    return mgf_domain(f).contains(theta)


def decay_certificate(f: PiecewiseLogLinearDensity, theta: float, eps: float) -> bool:
    """True iff [theta - eps, theta + eps] lies inside the MGF domain."""
    dom = mgf_domain(f)
    return bool(dom.lower < theta - eps and theta + eps < dom.upper)


# -- exact distances -------------------------------------------------------------


def _breakpoints(f, g, extra=()):
    pts = [f.knots, g.knots, np.asarray(extra, dtype=float)]
    for d in (f, g):
        pts.append([x for x in d.support if np.isfinite(x)])
    return np.unique(np.concatenate([np.asarray(p, dtype=float).ravel() for p in pts]))


def _crossings(f, g, b):
    """Points where log f = log g inside the intervals defined by breakpoints ``b``."""
    out = []
    for lo, hi, probe_lo, probe_hi in (
        [(-np.inf, b[0], b[0] - 1.0, b[0])]
        + [(b[i], b[i + 1], b[i], b[i + 1]) for i in range(b.size - 1)]
        + [(b[-1], np.inf, b[-1], b[-1] + 1.0)]
    ):
        # evaluate strictly inside so one-sided limits at support ends do not leak in
        w = probe_hi - probe_lo
        p = np.array([probe_lo + 1e-9 * w, probe_hi - 1e-9 * w])
        with np.errstate(invalid="ignore"):
            u = f.logpdf(p) - g.logpdf(p)
        if not np.all(np.isfinite(u)) or u[0] == u[1]:
            continue
        root = p[0] - u[0] * (p[1] - p[0]) / (u[1] - u[0])
        if lo < root < hi:
            out.append(root)
    return np.array(out)


def _masses(d, pts):
    """Mass of ``d`` on consecutive intervals of ``[-inf] + pts + [inf]``."""
    lc = d.logcdf(pts)
    ls = d.logsf(pts)
    F = np.exp(lc)
    S = np.exp(ls)
    mid = np.empty(pts.size - 1)
    for i in range(pts.size - 1):
        # difference of whichever tail is smaller keeps precision in both tails
        if F[i + 1] <= 0.5:
            mid[i] = F[i + 1] - F[i]
        else:
            mid[i] = S[i] - S[i + 1]
    return np.concatenate([[F[0]], np.maximum(mid, 0.0), [S[-1]]])


def l1_distance(f: PiecewiseLogLinearDensity, g: PiecewiseLogLinearDensity, tol: float | None = None) -> float:
    """int |f - g| dx."""
    if f.dim != g.dim:
        raise ValueError("densities must have the same dimension")
    b = _breakpoints(f, g)
    pts = np.unique(np.concatenate([b, _crossings(f, g, b)]))
    return float(np.sum(np.abs(_masses(f, pts) - _masses(g, pts))))


def _tilted_masses(d, theta, pts):
    """int over consecutive intervals of exp(theta x) d(x) dx."""
    if theta == 0:
        return _masses(d, pts)
    t = d.tilted(theta)
    return np.exp(d.log_mgf(theta)) * _masses(t, pts)


def weighted_l1(f: PiecewiseLogLinearDensity, g: PiecewiseLogLinearDensity, A: SublinearFn, tol: float | None = None) -> float:
    """int exp(A(x)) |f(x) - g(x)| dx with ``f`` the limit density.

    Raises ``PreconditionError`` when exp(A) f does not vanish at infinity and
    ``DivergenceError`` when the integral is infinite for ``g``.
    """
    theta = float(A.theta[0])
    eps = float(A.eps)
    if not decay_certificate(f, theta, eps):
        raise PreconditionError(f"exp(A) f does not vanish at infinity for theta={theta}, eps={eps}")
    b = _breakpoints(f, g, extra=[0.0])
    pts = np.unique(np.concatenate([b, _crossings(f, g, b)]))
    # interval i is (pts[i-1], pts[i]); 0 is a breakpoint so each lies on one side
    neg = np.concatenate([pts <= 0.0, [False]])
    try:
        left = _tilted_masses(f, theta - eps, pts) - _tilted_masses(g, theta - eps, pts)
        right = _tilted_masses(f, theta + eps, pts) - _tilted_masses(g, theta + eps, pts)
    except DivergenceError as exc:
        raise DivergenceError("weighted L1 distance is infinite for the sequence member") from exc
    return float(np.sum(np.where(neg, np.abs(left), np.abs(right))))


@dataclass(frozen=True)
class CompactSet:
    """Finite union of closed intervals with a required distance to the support boundary."""

    intervals: tuple
    margin: float = 0.05


def sup_distance(fn: PiecewiseLogLinearDensity, f: PiecewiseLogLinearDensity, S: CompactSet) -> float:
    """sup over S of |fn - f|, from endpoints, knots and interior stationary points."""
    lo, hi = f.support
    best = 0.0
    for a, b in S.intervals:
        if a > b:
            raise ValueError("interval endpoints out of order")
        if a < lo + S.margin or b > hi - S.margin:
            raise PreconditionError(f"[{a}, {b}] is within {S.margin} of the support boundary")
        br = _breakpoints(fn, f)
        cand = [np.array([a, b]), br[(br > a) & (br < b)]]
        edges = np.concatenate([[a], br[(br > a) & (br < b)], [b]])
        for u, v in zip(edges[:-1], edges[1:]):
            if v - u <= 0:
                continue
            p = np.array([u + 0.25 * (v - u), u + 0.75 * (v - u)])
            l1, l2 = fn.logpdf(p), f.logpdf(p)
            if not (np.all(np.isfinite(l1)) and np.all(np.isfinite(l2))):
                continue
            s1 = (l1[1] - l1[0]) / (p[1] - p[0])
            s2 = (l2[1] - l2[0]) / (p[1] - p[0])
            # d/dx (e^{l1} - e^{l2}) = 0  <=>  l1 - l2 = log(s2 / s1)
            if s1 * s2 > 0 and s1 != s2:
                c = l1[0] - l2[0] - np.log(s2 / s1)
                x = p[0] - c / (s1 - s2)
                if u < x < v:
                    cand.append(np.array([x]))
        pts = np.concatenate(cand)
        best = max(best, float(np.max(np.abs(fn.pdf(pts) - f.pdf(pts)))))
    return best


# -- divergence outside the MGF domain ------------------------------------------


@dataclass(frozen=True)
class DivergenceWitness:
    theta: float
    radii: np.ndarray
    values: np.ndarray
    diverged: bool
    cap: float


def truncated_mgf(f: PiecewiseLogLinearDensity, theta: float, R: float) -> float:
    """int_{-R}^{R} exp(theta x) f(x) dx, exactly."""
    lo, hi = f.support
    a, b = max(-R, lo), min(R, hi)
    if b <= a:
        return 0.0
    inner = f.knots[(f.knots > a) & (f.knots < b)]
    t = np.concatenate([[a], inner, [b]])
    phi = f.logpdf(np.clip(t, lo, hi)) + theta * t
    trunc = PiecewiseLogLinearDensity(t, phi, np.inf, -np.inf)
    return float(np.exp(trunc.log_norm))


def divergence_witness(f: PiecewiseLogLinearDensity, theta: float, cap: float = 1e6, r_max: float = 1e12) -> DivergenceWitness:
    """Truncated MGF over growing windows; ``diverged`` once a value exceeds ``cap``."""
    radii, vals = [], []
    R = 1.0
    while R <= r_max:
        v = truncated_mgf(f, theta, R)
        radii.append(R)
        vals.append(v)
        if v > cap:
            return DivergenceWitness(theta, np.array(radii), np.array(vals), True, cap)
        R *= 2.0
    return DivergenceWitness(theta, np.array(radii), np.array(vals), False, cap)


# -- sequences -----------------------------------------------------------------------


def shift(f: PiecewiseLogLinearDensity, c: float) -> PiecewiseLogLinearDensity:
    return PiecewiseLogLinearDensity(f.knots + c, f.logvals, f.left_slope, f.right_slope)


def rescale(f: PiecewiseLogLinearDensity, s: float) -> PiecewiseLogLinearDensity:
    """Density of s X for X ~ f (s > 0)."""
    return PiecewiseLogLinearDensity(f.knots * s, f.logvals, f.left_slope / s, f.right_slope / s)


def tilt(f: PiecewiseLogLinearDensity, theta: float) -> PiecewiseLogLinearDensity:
    return f.tilted(theta)


def make_sequence(kind: str, n_values, base: PiecewiseLogLinearDensity | None = None, theta: float = 0.5):
    """``(densities, limit)`` for one of the shipped convergent families.

    ``gaussian``: N(1/n, 1 + 1/n) -> N(0, 1); ``location``, ``scale`` and
    ``tilt`` perturb ``base`` (default Laplace(0, 1)) by 1/n, 1 + 1/n and
    theta/n; ``uniform_growth``: U[0, 1 + 1/n] -> U[0, 1].
    """
    ns = [int(n) for n in n_values]
    base = laplace() if base is None else base
    if kind == "gaussian":
        return [gaussian(1.0 / n, 1.0 + 1.0 / n) for n in ns], gaussian()
    if kind == "location":
        return [shift(base, 1.0 / n) for n in ns], base
    if kind == "scale":
        return [rescale(base, 1.0 + 1.0 / n) for n in ns], base
    if kind == "tilt":
        return [tilt(base, theta / n) for n in ns], base
    if kind == "uniform_growth":
        return [uniform(0.0, 1.0 + 1.0 / n) for n in ns], uniform(0.0, 1.0)
    raise ValueError(f"unknown sequence {kind!r}")


SEQUENCES = ("gaussian", "location", "scale", "tilt", "uniform_growth")


@dataclass
class ConvergenceReport:
    """One row per sequence member plus the matching limit values."""

    columns: list
    rows: list = field(default_factory=list)
    limit_values: dict = field(default_factory=dict)
    divergence: list = field(default_factory=list)

    def column(self, name: str) -> np.ndarray:
        i = self.columns.index(name)
        return np.array([r[i] for r in self.rows], dtype=float)

    def trend(self, name: str, tail: int = 5) -> dict:
        """Final value, and whether the last ``tail`` steps are non-increasing."""
        v = self.column(name)
        last = v[-tail:]
        return {"final": float(v[-1]), "eventually_decreasing": bool(np.all(np.diff(last) <= 1e-15 * (1 + np.abs(last[:-1]))))}


def _moment(d: PiecewiseLogLinearDensity, poly: Polynomial, theta=0.0) -> float:
    c = poly.coefficients_1d()
    return float(np.dot(c, d.power_moments(c.size - 1, theta=theta)))


def convergence_report(
    seq,
    limit: PiecewiseLogLinearDensity,
    polys=(),
    theta_grid=(),
    A: SublinearFn | None = None,
    S: CompactSet | None = None,
    n_values=None,
    cap: float = 1e6,
) -> ConvergenceReport:
    """Tabulate distances, moments and Laplace transforms along a sequence.

    Moment columns hold ``moment_n - moment_limit``.  Tilts outside the limit's
    MGF domain get a divergence witness instead of a column.
    """
    n_values = list(range(1, len(seq) + 1)) if n_values is None else list(n_values)
    dom = mgf_domain(limit)
    inside = [th for th in theta_grid if dom.contains(th)]
    outside = [th for th in theta_grid if not dom.contains(th)]
    cols = ["n", "l1"]
    if A is not None:
        cols.append("weighted_l1")
    if S is not None:
        cols.append("sup")
    cols += [f"moment[{p}]" for p in polys]
    cols += [f"laplace[{th:g}]" for th in inside]
    rep = ConvergenceReport(cols)
    for p in polys:
        rep.limit_values[f"moment[{p}]"] = _moment(limit, p)
    for th in inside:
        rep.limit_values[f"laplace[{th:g}]"] = float(np.exp(limit.log_mgf(th)))
    for n, fn in zip(n_values, seq):
        row = [n, l1_distance(fn, limit)]
        if A is not None:
            row.append(weighted_l1(limit, fn, A))
        if S is not None:
            row.append(sup_distance(fn, limit, S))
        row += [_moment(fn, p) - rep.limit_values[f"moment[{p}]"] for p in polys]
        for th in inside:
            try:
                row.append(float(np.exp(fn.log_mgf(th))))
            except DivergenceError:
                row.append(np.inf)
        rep.rows.append(row)
    rep.divergence = [divergence_witness(limit, th, cap=cap) for th in outside]
    return rep
