"""Kolmogorov-Smirnov confidence sets for polynomial moments of a log-concave law on R.

The set of moments of log-concave laws inside the KS ball around the empirical
distribution is searched over piecewise log-linear densities on a fixed knot
grid.  Only densities that are checked to be feasible are reported, so the
returned interval is an inner approximation of the exact confidence set.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb, factorial

import numpy as np
from scipy.optimize import minimize
from scipy.special import logsumexp

from .density import PiecewiseLogLinearDensity, _log_mean_exp_segment, exp_poly_integrals
from .errors import InfeasibleError, LogConcaveError, PreconditionError
from .polynomial import Polynomial

# slack allowed between the exact KS distance of a witness and the radius
FEASIBILITY_SLACK = 1e-9


@dataclass(frozen=True)
class EmpiricalSample:
    values: np.ndarray
    n: int = field(init=False)

    def __post_init__(self):
        v = np.sort(np.asarray(self.values, dtype=float).reshape(-1))
        if v.size < 1:
            raise PreconditionError("an empirical sample needs at least one value")
        if not np.all(np.isfinite(v)):
            raise PreconditionError("sample values must be finite")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "n", int(v.size))


def massart_constant(alpha: float) -> float:
    if not 0 < alpha <= 2:
        raise ValueError(f"alpha must lie in (0, 2], got {alpha}")
    return float(np.sqrt(np.log(2.0 / alpha) / 2.0))


def ks_distance(e: EmpiricalSample, f) -> float:
    """sup_x |F_n(x) - F(x)| over both sides of every jump of F_n."""
    F = np.asarray(f.cdf(e.values), dtype=float)
    i = np.arange(1, e.n + 1)
    return float(max(np.max(np.abs(i / e.n - F)), np.max(np.abs((i - 1) / e.n - F))))


@dataclass(frozen=True)
class SearchConfig:
    """Knot grid and optimizer settings for the moment search.

    Slopes are in units of the robust scale of the sample.  ``ladder`` lists
    the levels visited, largest first, before the requested one; each search
    starts from the witnesses of the previous level.
    """

    max_knots: int = 30
    tail_knots: int = 5
    tail_reach: float = 16.0
    slope_floor: float = 1e-3
    slope_cap: float = 1e3
    max_degree: int = 6
    fit_iter: int = 600
    burst_iter: int = 40
    max_bursts: int = 6
    trust: float = 3.0
    fd_step: float = 1e-7
    ladder: tuple = (0.5, 0.05, 0.01)


DEFAULT_SEARCH = SearchConfig()


class _KnotModel:
    """Vectorized piecewise log-linear family on a standardized knot grid.

    Parameters are the log-values at every knot except the one closest to the
    sample median (held at 0), followed by the left and right tail slopes.
    """

    def __init__(self, e: EmpiricalSample, cfg: SearchConfig):
        x = e.values
        self.loc = float(np.median(x))
        q25, q75 = np.quantile(x, [0.25, 0.75])
        s = (q75 - q25) / 1.349
        if not s > 0:
            s = float(np.std(x))
        if not s > 0:
            raise PreconditionError("sample has no spread")
        self.scale = float(s)
        z = (x - self.loc) / self.scale
        core = np.unique(np.quantile(z, np.linspace(0.0, 1.0, min(cfg.max_knots, e.n))))
        ext = np.geomspace(0.25, cfg.tail_reach, cfg.tail_knots)
        self.t = np.concatenate([core[0] - ext[::-1], core, core[-1] + ext])
        self.h = np.diff(self.t)
        self.K = self.t.size
        self.z = z
        self.n = e.n
        self.seg = np.clip(np.searchsorted(self.t, z, side="right") - 1, 0, self.K - 2)
        self.w = z - self.t[self.seg]
        self.gauge = int(np.argmin(np.abs(self.t)))
        self.free = np.delete(np.arange(self.K), self.gauge)
        self.P = self.K + 1
        self.cfg = cfg

    # -- parameters -------------------------------------------------------

    def unpack(self, theta):
        theta = np.atleast_2d(theta)
        V = np.zeros((theta.shape[0], self.K))
        V[:, self.free] = theta[:, : self.K - 1]
        return V, theta[:, -2], theta[:, -1]

    def pack(self, V, L, R):
        V = np.asarray(V, dtype=float)
        V = V - V[self.gauge]
        return np.concatenate([V[self.free], [L, R]])

    def bounds(self):
        c = self.cfg
        return [(None, None)] * (self.K - 1) + [(c.slope_floor, c.slope_cap), (-c.slope_cap, -c.slope_floor)]

    def concavity_matrix(self) -> np.ndarray:
        """Rows ``a`` with ``a . theta >= 0`` exactly when the log-density is concave."""
        K = self.K
        S = np.zeros((K - 1, K + 2))  # chord slopes in terms of (V, L, R)
        idx = np.arange(K - 1)
        S[idx, idx] = -1.0 / self.h
        S[idx, idx + 1] = 1.0 / self.h
        rows = [S[:-1] - S[1:]]
        eL = np.zeros(K + 2)
        eL[K] = 1.0
        eR = np.zeros(K + 2)
        eR[K + 1] = 1.0
        rows.append((eL - S[0])[None, :])
        rows.append((S[-1] - eR)[None, :])
        full = np.vstack(rows)
        return np.hstack([full[:, self.free], full[:, K:]])

    # -- evaluation -------------------------------------------------------

    def _log_parts(self, V, L, R):
        left = V[:, 0] - np.log(L)
        right = V[:, -1] - np.log(-R)
        segs = np.log(self.h) + _log_mean_exp_segment(V[:, :-1], V[:, 1:])
        return left, segs, right

    def cdf(self, theta) -> np.ndarray:
        """Distribution function at the standardized sample, one row per parameter vector."""
        V, L, R = self.unpack(theta)
        left, segs, right = self._log_parts(V, L, R)
        logZ = logsumexp(np.column_stack([left, segs, right]), axis=1)
        before = np.logaddexp.accumulate(np.column_stack([left, segs]), axis=1)  # mass up to knot j
        j = self.seg
        vj, vk = V[:, j], V[:, j + 1]
        phi_x = vj + (vk - vj) * (self.w / self.h[j])
        with np.errstate(divide="ignore"):
            partial = np.log(self.w) + _log_mean_exp_segment(vj, phi_x)
        logF = np.logaddexp(before[:, j], partial) - logZ[:, None]
        return np.exp(np.minimum(logF, 0.0))

    def moments(self, theta, kmax: int) -> np.ndarray:
        """``M[b, k] = int z**k f_b(z) dz`` for k = 0..kmax."""
        V, L, R = self.unpack(theta)
        left, segs, right = self._log_parts(V, L, R)
        logZ = logsumexp(np.column_stack([left, segs, right]), axis=1)
        psi = V - logZ[:, None]
        B = psi.shape[0]
        t, h = self.t, self.h
        M = np.zeros((B, kmax + 1))
        binom = np.array([[comb(k, j) for j in range(kmax + 1)] for k in range(kmax + 1)], dtype=float)
        fact = np.array([float(factorial(j)) for j in range(kmax + 1)])
        anchor_left = psi[:, :-1] >= psi[:, 1:]
        anchor = np.where(anchor_left, t[:-1], t[1:])
        direction = np.where(anchor_left, h, -h)
        top = np.maximum(psi[:, :-1], psi[:, 1:])
        G = exp_poly_integrals(np.abs(psi[:, 1:] - psi[:, :-1]).reshape(-1), kmax).reshape(B, self.K - 1, kmax + 1)
        weight = np.exp(top) * h
        for k in range(kmax + 1):
            acc = np.zeros_like(weight)
            for j in range(k + 1):
                acc += binom[k, j] * anchor ** (k - j) * direction**j * G[:, :, j]
            M[:, k] += np.sum(weight * acc, axis=1)
            j = np.arange(k + 1)
            lt = np.sum(binom[k, j] * t[0] ** (k - j) * (-1.0) ** j * fact[j] / L[:, None] ** (j + 1), axis=1)
            rt = np.sum(binom[k, j] * t[-1] ** (k - j) * fact[j] / (-R[:, None]) ** (j + 1), axis=1)
            M[:, k] += np.exp(psi[:, 0]) * lt + np.exp(psi[:, -1]) * rt
        return M

    def repair(self, theta) -> np.ndarray:
        """Remove round-off violations of concavity left by the optimizer."""
        V, L, R = self.unpack(theta)
        s = np.minimum.accumulate(np.diff(V[0]) / self.h)
        V = np.concatenate([[0.0], np.cumsum(s * self.h)])
        return self.pack(V, max(L[0], s[0]), min(R[0], s[-1]))

    def density(self, theta) -> PiecewiseLogLinearDensity:
        V, L, R = self.unpack(theta)
        d = PiecewiseLogLinearDensity(self.loc + self.scale * self.t, V[0], L[0] / self.scale, R[0] / self.scale)
        return PiecewiseLogLinearDensity(d.knots, d.logvals - d.log_norm, d.left_slope, d.right_slope)

    def start(self) -> np.ndarray:
        """Gaussian-shaped starting point matched to the sample mean and spread."""
        m = float(np.mean(self.z))
        sd = max(float(np.std(self.z)), 1e-3)
        V = -0.5 * ((self.t - m) / sd) ** 2
        L = np.clip(-(self.t[0] - m) / sd**2, self.cfg.slope_floor, self.cfg.slope_cap)
        R = np.clip(-(self.t[-1] - m) / sd**2, -self.cfg.slope_cap, -self.cfg.slope_floor)
        return self.pack(V, L, R)


class _Cached:
    """Value and forward-difference Jacobian of a batched map, cached per point."""

    def __init__(self, fn, step):
        self.fn = fn
        self.step = step
        self._key = None

    def _eval(self, x):
        key = x.tobytes()
        if key != self._key:
            h = self.step * np.maximum(1.0, np.abs(x))
            X = np.vstack([x, x + np.diag(h)])
            Y = self.fn(X)
            self._val = Y[0]
            self._jac = ((Y[1:] - Y[0]) / h[:, None]).T
            self._key = key
        return self._val, self._jac

    def value(self, x):
        return self._eval(x)[0]

    def jac(self, x):
        return self._eval(x)[1]


def _ks_rows(model: _KnotModel, radius):
    """Constraint rows ``radius - (F_i - (i-1)/n)`` and ``radius - (i/n - F_i)``."""
    i = np.arange(1, model.n + 1)
    up, down = i / model.n, (i - 1) / model.n

    def rows(theta, r):
        F = model.cdf(theta)
        return np.hstack([r[:, None] - (F - down), r[:, None] - (up - F)])

    return rows


def _slsqp(fun, x0, **kw):
    # SLSQP clips trial points to the bounds and says so on every step
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", "Values in x were outside bounds", RuntimeWarning)
        return minimize(fun, x0, method="SLSQP", **kw)


def _fit(model: _KnotModel, cfg: SearchConfig) -> np.ndarray:
    """Parameters minimizing the KS distance to the sample (epigraph form)."""
    rows = _ks_rows(model, None)
    A = model.concavity_matrix()
    x0 = model.start()
    s0 = -float(np.min(rows(x0, np.zeros(1))))
    y0 = np.concatenate([x0, [s0]])
    ks = _Cached(lambda Y: rows(Y[:, :-1], Y[:, -1]), cfg.fd_step)
    cons = [
        {"type": "ineq", "fun": ks.value, "jac": ks.jac},
        {"type": "ineq", "fun": lambda y: A @ y[:-1], "jac": lambda y: np.hstack([A, np.zeros((A.shape[0], 1))])},
    ]
    grad = np.zeros(y0.size)
    grad[-1] = 1.0
    res = _slsqp(lambda y: y[-1], y0, jac=lambda y: grad, bounds=model.bounds() + [(0.0, 1.0)],
                   constraints=cons, options={"maxiter": cfg.fit_iter, "ftol": 1e-12})
    return res.x[:-1]


def _verify(model: _KnotModel, e: EmpiricalSample, theta, radius: float):
    """Witness density and its KS distance, or None when not feasible."""
    try:
        d = model.density(theta)
    except (LogConcaveError, ValueError, FloatingPointError):
        return None
    gap = ks_distance(e, d)
    if not gap <= radius + FEASIBILITY_SLACK:
        return None
    return d, gap


def _exact_moment(poly: Polynomial, d: PiecewiseLogLinearDensity) -> float:
    c = poly.coefficients_1d()
    return float(c @ d.power_moments(c.size - 1))


def _extremize(model, e, poly_z, coef_scale, radius, start, sign, cfg):
    """Feasible parameters found by pushing ``sign * moment`` up from ``start``.

    SLSQP runs in short bursts inside a box around the current point; a burst
    only counts if a point on the segment towards its result verifies.
    """
    c = poly_z.coefficients_1d()
    kmax = c.size - 1
    rows = _ks_rows(model, None)
    r_opt = radius * (1.0 - 1e-4)
    A = model.concavity_matrix()
    ks = _Cached(lambda X: rows(X, np.full(X.shape[0], r_opt)), cfg.fd_step)
    obj = _Cached(lambda X: (-sign * (model.moments(X, kmax) @ c) / coef_scale)[:, None], cfg.fd_step)
    cons = [
        {"type": "ineq", "fun": ks.value, "jac": ks.jac},
        {"type": "ineq", "fun": lambda x: A @ x, "jac": lambda x: A},
    ]
    outer = model.bounds()

    def score(theta):
        with np.errstate(over="ignore", invalid="ignore"):
            return float(sign * (model.moments(theta, kmax) @ c)[0])

    best, best_val = start, score(start)
    for _ in range(cfg.max_bursts):
        box = [
            (best[k] - cfg.trust if lo is None else max(lo, best[k] - cfg.trust),
             best[k] + cfg.trust if hi is None else min(hi, best[k] + cfg.trust))
            for k, (lo, hi) in enumerate(outer)
        ]
        with np.errstate(over="ignore", invalid="ignore"):
            res = _slsqp(lambda x: float(obj.value(x)[0]), best, jac=lambda x: obj.jac(x)[0],
                           bounds=box, constraints=cons, options={"maxiter": cfg.burst_iter, "ftol": 1e-10})
        step = None
        for lam in [0.5**k for k in range(8)]:
            cand = model.repair(best + lam * (res.x - best))
            if not np.all(np.isfinite(cand)):
                continue
            val = score(cand)
            if val > best_val and _verify(model, e, cand, radius) is not None:
                step = (cand, val)
                break
        if step is None:
            break
        gain = step[1] - best_val
        best, best_val = step
        if res.status == 0 or gain <= 1e-7 * max(1.0, abs(best_val)):
            break
    return best


@dataclass(frozen=True)
class ConfidenceResult:
    """Inner approximation of the KS confidence set for a moment."""

    alpha: float
    radius: float
    interval: tuple[float, float]
    lo_witness: PiecewiseLogLinearDensity
    hi_witness: PiecewiseLogLinearDensity
    feasibility_gaps: tuple[float, float]
    fit: PiecewiseLogLinearDensity
    fit_moment: float
    fit_gap: float
    n: int
    kind: str = "inner approximation"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "alpha": self.alpha,
            "radius": self.radius,
            "n": self.n,
            "interval": list(self.interval),
            "fit_moment": self.fit_moment,
            "feasibility_gaps": list(self.feasibility_gaps),
            "fit_gap": self.fit_gap,
            "lo_witness": self.lo_witness.to_dict(),
            "hi_witness": self.hi_witness.to_dict(),
            "fit": self.fit.to_dict(),
        }


def _levels(alpha: float, cfg: SearchConfig) -> list[float]:
    return sorted({a for a in cfg.ladder if a > alpha} | {alpha}, reverse=True)


def moment_confidence_interval(e, poly: Polynomial, alpha: float = 0.05, cfg: SearchConfig = DEFAULT_SEARCH) -> ConfidenceResult:
    """Range of ``int poly dQ`` over feasible log-concave ``Q`` in the KS ball of level ``alpha``.

    Raises InfeasibleError when even the best-fitting density on the knot grid
    lies outside the ball.
    """
    if not isinstance(e, EmpiricalSample):
        e = EmpiricalSample(e)
    if e.n < 10:
        raise PreconditionError(f"need at least 10 observations, got {e.n}")
    if poly.dim != 1:
        raise PreconditionError("confidence intervals are implemented for univariate polynomials only")
    if poly.degree > cfg.max_degree:
        raise PreconditionError(f"polynomial degree {poly.degree} exceeds the cap {cfg.max_degree}")
    radius = massart_constant(alpha) / np.sqrt(e.n)
    model = _KnotModel(e, cfg)
    fit_theta = model.repair(_fit(model, cfg))
    checked = _verify(model, e, fit_theta, radius)
    if checked is None:
        try:
            best = ks_distance(e, model.density(fit_theta))
        except (LogConcaveError, ValueError):
            best = float("nan")
        raise InfeasibleError(f"no log-concave fit within KS radius {radius:.6g} (best {best:.6g})")
    fit, fit_gap = checked
    fit_moment = _exact_moment(poly, fit)
    if poly.degree == 0:
        return ConfidenceResult(alpha, radius, (fit_moment, fit_moment), fit, fit, (fit_gap, fit_gap), fit, fit_moment, fit_gap, e.n)

    poly_z = poly.compose_affine_1d(model.loc, model.scale)
    coef_scale = max(1.0, float(np.max(np.abs(poly_z.coefficients_1d()))))
    best = {}
    for sign in (-1.0, 1.0):
        theta, value, witness, gap = fit_theta, fit_moment, fit, fit_gap
        for level in _levels(alpha, cfg):
            r = massart_constant(level) / np.sqrt(e.n)
            cand = _extremize(model, e, poly_z, coef_scale, r, theta, sign, cfg)
            checked = _verify(model, e, cand, r)
            if checked is None:
                continue
            m = _exact_moment(poly, checked[0])
            if sign * m > sign * value:
                theta, value, witness, gap = cand, m, checked[0], checked[1]
        best[sign] = (value, witness, gap)
    (lo, lo_w, lo_g), (hi, hi_w, hi_g) = best[-1.0], best[1.0]
    return ConfidenceResult(alpha, radius, (lo, hi), lo_w, hi_w, (lo_g, hi_g), fit, fit_moment, fit_gap, e.n)


# -- coverage ---------------------------------------------------------------


@dataclass(frozen=True)
class CoverageResult:
    coverage: float
    truth_value: float
    intervals: np.ndarray  # (reps, 2), nan rows where no feasible fit existed
    n_infeasible: int
    seed: int


def _one_rep(args):
    truth, poly, alpha, n, child, cfg = args
    x = truth.sample(n, np.random.default_rng(child))
    try:
        res = moment_confidence_interval(EmpiricalSample(x), poly, alpha, cfg)
    except InfeasibleError:
        return (np.nan, np.nan)
    return res.interval


def coverage_simulation(truth, poly: Polynomial, alpha: float = 0.05, n: int = 200, reps: int = 200, seed: int = 0,
                        cfg: SearchConfig = DEFAULT_SEARCH, workers: int | None = None) -> CoverageResult:
    """Fraction of replications whose interval contains ``int poly d(truth)``.

    Replication ``i`` draws from ``SeedSequence(seed).spawn(reps)[i]``, so the
    result does not depend on ``workers``.
    """
    if reps < 50:
        raise PreconditionError("coverage needs reps >= 50")
    c = poly.coefficients_1d()
    truth_value = float(c @ truth.power_moments(c.size - 1))
    tasks = [(truth, poly, alpha, n, child, cfg) for child in np.random.SeedSequence(seed).spawn(reps)]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            out = list(pool.map(_one_rep, tasks, chunksize=max(1, reps // (4 * workers))))
    else:
        out = [_one_rep(t) for t in tasks]
    iv = np.array(out, dtype=float)
    tol = 1e-12 * max(1.0, abs(truth_value))
    covered = (iv[:, 0] <= truth_value + tol) & (truth_value - tol <= iv[:, 1])
    return CoverageResult(float(np.mean(covered)), truth_value, iv, int(np.sum(np.isnan(iv[:, 0]))), seed)
