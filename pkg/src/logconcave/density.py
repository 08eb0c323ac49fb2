"""Exact one-dimensional log-concave densities with piecewise-linear log-density.

Every integral in this module is closed form: on each piece ``exp(phi)`` is
an exponential of an affine function, and all masses, distribution values and
polynomial moments are assembled in log-space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial

import numpy as np
from scipy.special import gammainc, logsumexp

from .config import DEFAULT_TOLERANCES
from .errors import DimensionError, DivergenceError, NonIntegrableError, NotLogConcaveError
from .polynomial import Polynomial

_EPS = np.finfo(float).eps


def _log_mean_exp_segment(u, v):
    """log of int_0^1 exp(u + (v - u) s) ds, stable for all u, v."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    top = np.maximum(u, v)
    delta = np.abs(u - v)
    with np.errstate(divide="ignore", invalid="ignore"):
        big = np.log(-np.expm1(-delta)) - np.log(delta)
    small = -0.5 * delta + delta**2 / 24.0
    return top + np.where(delta < 1e-6, small, big)


def exp_poly_integrals(c, kmax: int) -> np.ndarray:
    """G[:, j] = int_0^1 s**j exp(-c s) ds for c >= 0 and j = 0..kmax."""
    c = np.atleast_1d(np.asarray(c, dtype=float))
    out = np.empty((c.size, kmax + 1))
    small = c < 1.0
    if np.any(small):
        cs = c[small]
        terms = np.arange(25)
        # (-c)^n / n! by running products; 25 terms reach 1e-25 for c < 1
        steps = np.concatenate([np.ones((cs.size, 1)), -cs[:, None] / terms[None, 1:]], axis=1)
        powers = np.cumprod(steps, axis=1)
        for j in range(kmax + 1):
            out[small, j] = powers @ (1.0 / (terms + j + 1.0))
    if np.any(~small):
        cl = c[~small]
        for j in range(kmax + 1):
            out[~small, j] = factorial(j) * gammainc(j + 1, cl) / cl ** (j + 1)
    return out


def _readonly(a):
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class PiecewiseLogLinearDensity:
    """Log-concave density whose log is linear between knots.

    ``phi`` interpolates ``logvals`` linearly on ``[knots[0], knots[-1]]``,
    continues with slope ``left_slope`` to the left of the first knot and with
    ``right_slope`` to the right of the last one.  An infinite tail slope
    truncates the support at that knot; the density at a finite support
    endpoint is the one-sided limit, so level sets are closed.

    ``log_norm`` is ``log int exp(phi)``, so the density is
    ``exp(phi - log_norm)`` whatever the offset of ``logvals``.
    """

    knots: np.ndarray
    logvals: np.ndarray
    left_slope: float
    right_slope: float
    log_norm: float = field(init=False)

    dim = 1

    def __post_init__(self):
        t = _readonly(np.atleast_1d(self.knots))
        phi = _readonly(np.atleast_1d(self.logvals))
        object.__setattr__(self, "knots", t)
        object.__setattr__(self, "logvals", phi)
        object.__setattr__(self, "left_slope", float(self.left_slope))
        object.__setattr__(self, "right_slope", float(self.right_slope))
        self._validate()
        object.__setattr__(self, "log_norm", float(logsumexp(self._piece_logmass())))

    def _validate(self):
        t, phi = self.knots, self.logvals
        if t.ndim != 1 or t.size != phi.size or t.size == 0:
            raise ValueError("knots and logvals must be 1-D arrays of equal, positive length")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(phi))):
            raise ValueError("knots and logvals must be finite")
        if np.any(np.diff(t) <= 0):
            raise ValueError("knots must be strictly increasing")
        L, R = self.left_slope, self.right_slope
        if not L > 0:
            raise NonIntegrableError(f"left tail slope must be > 0 (got {L})")
        if not R < 0:
            raise NonIntegrableError(f"right tail slope must be < 0 (got {R})")
        if t.size == 1 and np.isinf(L) and np.isinf(R):
            raise NonIntegrableError("support reduced to a single point")
        tol = DEFAULT_TOLERANCES.concavity
        s = self.chord_slopes
        scale = 1.0 + np.abs(s)
        if s.size > 1 and np.any(np.diff(s) > tol * np.maximum(scale[:-1], scale[1:])):
            raise NotLogConcaveError("chord slopes must be non-increasing")
        if s.size:
            if L < s[0] - tol * scale[0]:
                raise NotLogConcaveError("left tail slope is smaller than the first chord slope")
            if s[-1] < R - tol * scale[-1]:
                raise NotLogConcaveError("right tail slope exceeds the last chord slope")

    # -- structure ---------------------------------------------------------

    @property
    def chord_slopes(self) -> np.ndarray:
        return np.diff(self.logvals) / np.diff(self.knots)

    @property
    def n_segments(self) -> int:
        return self.knots.size - 1

    @property
    def support(self) -> tuple[float, float]:
        lo = self.knots[0] if np.isinf(self.left_slope) else -np.inf
        hi = self.knots[-1] if np.isinf(self.right_slope) else np.inf
        return float(lo), float(hi)

    def support_box(self):
        lo, hi = self.support
        return np.array([lo]), np.array([hi])

    def _piece_logmass(self) -> np.ndarray:
        """Unnormalized log-mass of [left tail, segments..., right tail]."""
        t, phi = self.knots, self.logvals
        left = -np.inf if np.isinf(self.left_slope) else phi[0] - np.log(self.left_slope)
        right = -np.inf if np.isinf(self.right_slope) else phi[-1] - np.log(-self.right_slope)
        segs = np.log(np.diff(t)) + _log_mean_exp_segment(phi[:-1], phi[1:])
        return np.concatenate([[left], segs, [right]])

    def piece_probabilities(self) -> np.ndarray:
        return np.exp(self._piece_logmass() - self.log_norm)

    def _piece_index(self, x):
        # 0 = left tail, i + 1 = segment i, m + 1 = right tail (x >= last knot)
        return np.searchsorted(self.knots, x, side="right")

    # -- evaluation --------------------------------------------------------

    def phi(self, x) -> np.ndarray:
        """Unnormalized log-density (``-inf`` outside the support)."""
        x = np.asarray(x, dtype=float)
        t, v = self.knots, self.logvals
        m = t.size - 1
        out = np.empty(x.shape)
        p = self._piece_index(x)
        left = p == 0
        right = p == m + 1
        mid = ~(left | right)
        if np.isinf(self.left_slope):
            out[left] = -np.inf
        else:
            out[left] = v[0] + self.left_slope * (x[left] - t[0])
        if np.isinf(self.right_slope):
            out[right] = np.where(x[right] == t[-1], v[-1], -np.inf)
        else:
            out[right] = v[-1] + self.right_slope * (x[right] - t[-1])
        if np.any(mid):
            i = p[mid] - 1
            s = self.chord_slopes
            out[mid] = v[i] + s[i] * (x[mid] - t[i])
        return out

    def logpdf(self, x) -> np.ndarray:
        return self.phi(np.asarray(x, dtype=float)) - self.log_norm

    def pdf(self, x) -> np.ndarray:
        return np.exp(self.logpdf(x))

    def _cumulative(self):
        lm = self._piece_logmass()
        before = np.concatenate([[-np.inf], np.logaddexp.accumulate(lm)[:-1]])
        after = np.concatenate([np.logaddexp.accumulate(lm[::-1])[::-1][1:], [-np.inf]])
        return before, after

    def logcdf(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        t, m = self.knots, self.knots.size - 1
        before, _ = self._cumulative()
        p = self._piece_index(x)
        out = np.empty(x.shape)
        with np.errstate(divide="ignore", invalid="ignore"):
            left = p == 0
            out[left] = -np.inf if np.isinf(self.left_slope) else self.phi(x[left]) - np.log(self.left_slope)
            mid = (p > 0) & (p <= m)
            if np.any(mid):
                i = p[mid] - 1
                part = np.log(x[mid] - t[i]) + _log_mean_exp_segment(self.logvals[i], self.phi(x[mid]))
                out[mid] = np.logaddexp(before[p[mid]], part)
            right = p == m + 1
            if np.any(right):
                tail = self._logsf_unnorm_right(x[right]) - self.log_norm
                out[right] = self.log_norm + np.log1p(-np.exp(np.minimum(tail, 0.0)))
        return np.minimum(out - self.log_norm, 0.0)

    def _logsf_unnorm_right(self, x):
        if np.isinf(self.right_slope):
            return np.full(x.shape, -np.inf)
        return self.phi(x) - np.log(-self.right_slope)

    def logsf(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        t, m = self.knots, self.knots.size - 1
        _, after = self._cumulative()
        p = self._piece_index(x)
        out = np.empty(x.shape)
        with np.errstate(divide="ignore", invalid="ignore"):
            right = p == m + 1
            out[right] = self._logsf_unnorm_right(x[right])
            mid = (p > 0) & (p <= m)
            if np.any(mid):
                i = p[mid] - 1
                part = np.log(t[i + 1] - x[mid]) + _log_mean_exp_segment(self.phi(x[mid]), self.logvals[i + 1])
                out[mid] = np.logaddexp(after[p[mid]], part)
            left = p == 0
            if np.any(left):
                if np.isinf(self.left_slope):
                    out[left] = self.log_norm
                else:
                    head = self.phi(x[left]) - np.log(self.left_slope) - self.log_norm
                    out[left] = self.log_norm + np.log1p(-np.exp(np.minimum(head, 0.0)))
        return np.minimum(out - self.log_norm, 0.0)

    def cdf(self, x) -> np.ndarray:
        return np.exp(self.logcdf(x))

    def sf(self, x) -> np.ndarray:
        return np.exp(self.logsf(x))

    def interval_probability(self, a, b) -> float:
        """P([a, b]) computed from whichever tail is more accurate."""
        if b <= a:
            return 0.0
        med = self.ppf(0.5)
        if b <= med:
            return float(np.exp(self.logcdf(b)) - np.exp(self.logcdf(a)))
        if a >= med:
            return float(np.exp(self.logsf(a)) - np.exp(self.logsf(b)))
        return float(1.0 - np.exp(self.logcdf(a)) - np.exp(self.logsf(b)))

    # -- quantiles and sampling ---------------------------------------------

    def _inverse_in_piece(self, p, w):
        """Point splitting piece ``p`` so a fraction ``w`` of its mass lies to the left."""
        p = np.asarray(p)
        w = np.asarray(w, dtype=float)
        t, m = self.knots, self.knots.size - 1
        out = np.empty(w.shape)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            left = p == 0
            out[left] = t[0] + np.log(w[left]) / self.left_slope
            right = p == m + 1
            out[right] = t[-1] + np.log1p(-w[right]) / self.right_slope
            mid = ~(left | right)
            if np.any(mid):
                i = p[mid] - 1
                a, b = t[i], t[i + 1]
                h = b - a
                s = self.chord_slopes[i]
                ww = w[mid]
                sh = s * h
                up = b + np.log(ww + (1.0 - ww) * np.exp(-sh)) / s
                down = a + np.log1p(-ww * (-np.expm1(sh))) / s
                flat = a + ww * h
                res = np.where(sh > 0, up, down)
                out[mid] = np.where(np.abs(sh) < 1e-12, flat, np.clip(res, a, b))
        return out

    def ppf(self, u) -> np.ndarray | float:
        scalar = np.ndim(u) == 0
        u = np.atleast_1d(np.asarray(u, dtype=float))
        probs = self.piece_probabilities()
        cum = np.concatenate([[0.0], np.cumsum(probs)])
        cum /= cum[-1]
        p = np.clip(np.searchsorted(cum, u, side="right") - 1, 0, probs.size - 1)
        # skip empty pieces (truncated tails)
        while np.any(probs[p] == 0):
            bad = probs[p] == 0
            p[bad] = np.where(u[bad] <= cum[p[bad]], p[bad] - 1, p[bad] + 1)
            p = np.clip(p, 0, probs.size - 1)
        w = np.clip((u - cum[p]) / probs[p], 0.0, 1.0)
        out = self._inverse_in_piece(p, w)
        return float(out[0]) if scalar else out

    def sample(self, n: int, rng) -> np.ndarray:
        probs = self.piece_probabilities()
        p = rng.choice(probs.size, size=n, p=probs / probs.sum())
        w = rng.random(n)
        return self._inverse_in_piece(p, w)

    # -- moments --------------------------------------------------------------

    def tilted(self, theta: float) -> "PiecewiseLogLinearDensity":
        """Density proportional to ``exp(theta x) f(x)``."""
        L = self.left_slope + theta
        R = self.right_slope + theta
        if not (L > 0 and R < 0):
            raise DivergenceError(f"theta={theta} lies outside the MGF domain")
        return PiecewiseLogLinearDensity(self.knots, self.logvals + theta * self.knots, L, R)

    def log_mgf(self, theta: float) -> float:
        """log int exp(theta x) f(x) dx; raises DivergenceError outside the domain."""
        if theta == 0:
            return 0.0
        return self.tilted(theta).log_norm - self.log_norm

    def power_moments(self, kmax: int, center: float = 0.0, theta: float = 0.0) -> np.ndarray:
        """``M[k] = int (x - center)**k exp(theta x) f(x) dx`` for k = 0..kmax."""
        L = self.left_slope + theta
        R = self.right_slope + theta
        if not (L > 0 and R < 0):
            raise DivergenceError(f"theta={theta} lies outside the MGF domain")
        t = self.knots
        psi = self.logvals + theta * t - self.log_norm
        M = np.zeros(kmax + 1)
        binom = np.array([[comb(k, j) for j in range(kmax + 1)] for k in range(kmax + 1)], dtype=float)

        if t.size > 1:
            a, b = t[:-1], t[1:]
            h = b - a
            anchor_left = psi[:-1] >= psi[1:]
            anchor = np.where(anchor_left, a, b) - center
            direction = np.where(anchor_left, h, -h)
            top = np.maximum(psi[:-1], psi[1:])
            c = np.abs(psi[1:] - psi[:-1])
            G = exp_poly_integrals(c, kmax)
            weight = np.exp(top) * h
            for k in range(kmax + 1):
                j = np.arange(k + 1)
                coef = binom[k, : k + 1] * anchor[:, None] ** (k - j) * direction[:, None] ** j
                M[k] += np.sum(weight * np.sum(coef * G[:, : k + 1], axis=1))
        fact = np.array([float(factorial(j)) for j in range(kmax + 1)])
        if np.isfinite(L):
            base = t[0] - center
            for k in range(kmax + 1):
                j = np.arange(k + 1)
                M[k] += np.exp(psi[0]) * np.sum(binom[k, : k + 1] * base ** (k - j) * (-1.0) ** j * fact[j] / L ** (j + 1))
        if np.isfinite(R):
            base = t[-1] - center
            for k in range(kmax + 1):
                j = np.arange(k + 1)
                M[k] += np.exp(psi[-1]) * np.sum(binom[k, : k + 1] * base ** (k - j) * fact[j] / (-R) ** (j + 1))
        return M

    def mean(self) -> float:
        return float(self.power_moments(1)[1])

    def variance(self) -> float:
        return float(self.power_moments(2, center=self.mean())[2])

    def mode(self) -> np.ndarray:
        return np.array([self.knots[int(np.argmax(self.logvals))]])

    def scale(self) -> float:
        return float(np.sqrt(self.variance()))

    def max_logpdf(self) -> float:
        return float(np.max(self.logvals) - self.log_norm)

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "type": "piecewise_loglinear",
            "knots": self.knots.tolist(),
            "logvals": self.logvals.tolist(),
            "left_slope": _json_float(self.left_slope),
            "right_slope": _json_float(self.right_slope),
        }


def _json_float(x: float):
    if np.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(x)


def as_points(d, x) -> np.ndarray:
    """Coerce ``x`` to an ``(n, dim)`` array, checking the dimension."""
    x = np.asarray(x, dtype=float)
    if d.dim == 1 and x.ndim <= 1:
        return x.reshape(-1, 1)
    x = np.atleast_2d(x)
    if x.shape[-1] != d.dim:
        raise DimensionError(f"expected points of dimension {d.dim}, got shape {x.shape}")
    return x


def eval_logdensity(d, x):
    """Normalized log-density ``phi(x) - log_norm``; ``-inf`` outside the support.

    Scalars (1-D) and single points return a float, batches an array.
    """
    x_arr = np.asarray(x, dtype=float)
    if d.dim == 1:
        if x_arr.ndim > 1 and x_arr.shape[-1] != 1:
            raise DimensionError(f"expected 1-D points, got shape {x_arr.shape}")
        out = d.logpdf(x_arr.reshape(-1))
        return float(out[0]) if x_arr.ndim == 0 else out
    single = x_arr.ndim == 1
    if single and x_arr.size != d.dim or (not single and x_arr.shape[-1] != d.dim):
        raise DimensionError(f"expected points of dimension {d.dim}, got shape {x_arr.shape}")
    out = d.logpdf(np.atleast_2d(x_arr))
    return float(out[0]) if single else out


def normalize(d, tol: float | None = None):
    """Return ``(normalized density, error estimate)``.

    One-dimensional densities are normalized exactly (the error estimate is the
    accumulated rounding bound); multivariate densities defer to their own
    quadrature-based ``normalized`` method.
    """
    if isinstance(d, PiecewiseLogLinearDensity):
        tol = DEFAULT_TOLERANCES.normalization_1d if tol is None else tol
        out = PiecewiseLogLinearDensity(d.knots, d.logvals - d.log_norm, d.left_slope, d.right_slope)
        err = 8 * _EPS * (d.knots.size + 2) * (1.0 + abs(d.log_norm))
        if abs(out.log_norm) > tol:
            raise NonIntegrableError("normalization failed to reach tolerance")
        return out, err
    return d.normalized(tol)


def cdf(d: PiecewiseLogLinearDensity, x):
    out = d.cdf(np.asarray(x, dtype=float).reshape(-1))
    return float(out[0]) if np.ndim(x) == 0 else out


def sample(d, rng_seed: int, n: int) -> np.ndarray:
    """Draw ``n`` points, deterministic given ``rng_seed``.

    1-D densities use exact inverse-CDF sampling; product densities sample
    their factors; general polyhedral densities use rejection sampling under
    an exponential tail envelope.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(rng_seed)
    return d.sample(n, rng)


def moment(d, poly: Polynomial, theta=0.0, tol: float | None = None) -> float:
    """``int exp(theta . x) poly(x) f(x) dx``.

    Raises ``DivergenceError`` when theta lies outside the MGF domain.
    """
    if isinstance(d, PiecewiseLogLinearDensity):
        theta = float(np.atleast_1d(theta)[0])
        coefs = poly.coefficients_1d()
        M = d.power_moments(coefs.size - 1, theta=theta)
        return float(np.dot(coefs, M))
    return d.moment(poly, np.atleast_1d(np.asarray(theta, dtype=float)), tol=tol)


def verify_concavity(d, n_triples: int = 1000, seed: int = 0, tol: float = 1e-9) -> bool:
    """Check phi(y) >= lam phi(x) + (1 - lam) phi(z) on random triples in the support."""
    rng = np.random.default_rng(seed)
    pts = d.sample(3 * n_triples, rng)
    pts = as_points(d, pts).reshape(n_triples, 3, d.dim)
    lam = rng.random(n_triples)
    x, z = pts[:, 0], pts[:, 2]
    y = lam[:, None] * x + (1 - lam[:, None]) * z
    px = d.logpdf(x if d.dim > 1 else x[:, 0])
    pz = d.logpdf(z if d.dim > 1 else z[:, 0])
    py = d.logpdf(y if d.dim > 1 else y[:, 0])
    rhs = lam * px + (1 - lam) * pz
    return bool(np.all(py >= rhs - tol * (1.0 + np.abs(rhs))))
