"""Log-concave densities in dimensions two and three.

``PolyhedralLogDensity`` has ``phi(x) = min_k (a_k . x + b_k)`` on an
H-polytope domain and is normalized by adaptive cubature.  ``ProductDensity``
is a product of exact 1-D factors; its log-density is a sum of concave
piecewise-affine functions, so it is also polyhedral, but moments and
normalization stay exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gamma, lgamma, pi

import numpy as np

from .density import PiecewiseLogLinearDensity
from .errors import DimensionError, DivergenceError, NonIntegrableError, QuadratureError
from .polynomial import Polynomial
from .polytope import HPolytope, lp_max_concave, triangulate
from .quadrature import QuadResult, cubature, integrate_simplex

_CHUNK = 200_000


def factor_lines(f: PiecewiseLogLinearDensity):
    """(slopes, intercepts) with ``logpdf = min(slopes * x + intercepts)`` on the support."""
    t, v = f.knots, f.logvals - f.log_norm
    slopes, icpts = [], []
    s = f.chord_slopes
    for i in range(s.size):
        slopes.append(s[i])
        icpts.append(v[i] - s[i] * t[i])
    if np.isfinite(f.left_slope):
        slopes.append(f.left_slope)
        icpts.append(v[0] - f.left_slope * t[0])
    if np.isfinite(f.right_slope):
        slopes.append(f.right_slope)
        icpts.append(v[-1] - f.right_slope * t[-1])
    if not slopes:
        slopes, icpts = [0.0], [v[0]]
    return np.array(slopes), np.array(icpts)


def truncation_box(blocks, dim, domain, center, level, r0=1.0, r_max=1e7):
    """Box around ``center`` whose boundary (within ``domain``) lies below ``level``.

    The superlevel set ``{phi >= level}`` is convex and contains ``center``, so
    it is contained in the returned box.  Raises ``NonIntegrableError`` when
    no such box exists up to ``r_max``.
    """
    R = r0
    d = dim
    while R <= r_max:
        lo, hi = center - R, center + R
        ok = True
        for i in range(d):
            for side, sign in ((hi[i], 1.0), (lo[i], -1.0)):
                rows, offs = [], []
                for j in range(d):
                    e = np.zeros(d)
                    e[j] = 1.0
                    if j == i:
                        rows += [e, -e]
                        offs += [side, -side]
                    else:
                        rows += [e, -e]
                        offs += [hi[j], -lo[j]]
                face = HPolytope(np.array(rows), np.array(offs)).intersect(domain)
                val, _ = lp_max_concave(blocks, d, face)
                if val > level:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return lo, hi, R
        R *= 2.0
    raise NonIntegrableError("log-density does not decay in every direction")


def _tail_mass_bound(phimax, drop, R, d):
    # mass beyond the box: phi decays at least linearly past the level-set boundary
    s_b = R * np.sqrt(d)
    surface = 2 * pi ** (d / 2) / gamma(d / 2)
    tail = sum(np.exp(lgamma(d) - lgamma(d - k)) / drop ** (k + 1) for k in range(d))
    return float(np.exp(phimax - drop) * surface * s_b**d * tail)


def integrate_region(func, lo, hi, domain, rtol, atol, max_evals=4_000_000) -> QuadResult:
    """Integrate over the box [lo, hi] intersected with ``domain``."""
    if domain is None or domain.normals.shape[0] == 0:
        return cubature(func, lo, hi, rtol=rtol, atol=atol, max_evals=max_evals)
    region = HPolytope.box(lo, hi).intersect(domain)
    pieces = triangulate(region)
    total, err, n = 0.0, 0.0, 0
    for V in pieces:
        r = integrate_simplex(func, V, rtol=rtol, atol=atol / max(len(pieces), 1), max_evals=max_evals)
        total += r.value
        err += r.error
        n += r.n_evals
    return QuadResult(total, err, n)


class _MultivariateBase:
    dim: int

    def pdf(self, x) -> np.ndarray:
        return np.exp(self.logpdf(x))

    def _check(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if x.shape[1] != self.dim:
            raise DimensionError(f"expected points of dimension {self.dim}, got shape {x.shape}")
        return x

    def support_box(self):
        if self.domain is None:
            return np.full(self.dim, -np.inf), np.full(self.dim, np.inf)
        return self.domain.bounding_box()


@dataclass(frozen=True, eq=False)
class PolyhedralLogDensity(_MultivariateBase):
    """Density proportional to ``exp(min_k(a_k . x + b_k))`` on ``domain``."""

    slopes: np.ndarray
    intercepts: np.ndarray
    domain: HPolytope | None = None
    tol: float = 1e-6
    log_norm: float = field(init=False)
    norm_error: float = field(init=False)

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.slopes, dtype=float))
        b = np.atleast_1d(np.asarray(self.intercepts, dtype=float))
        if A.shape[0] != b.size:
            raise ValueError("one intercept per affine piece required")
        if A.shape[1] not in (1, 2, 3):
            raise DimensionError("polyhedral densities support dim in {1, 2, 3}")
        A.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "slopes", A)
        object.__setattr__(self, "intercepts", b)
        if self.domain is not None and self.domain.dim != A.shape[1]:
            raise DimensionError("domain dimension does not match the affine pieces")
        if self.domain is not None and not self.domain.has_interior():
            raise NonIntegrableError("domain has empty interior")
        log_norm, err = self._integrate_exp(A, b, self.tol)
        object.__setattr__(self, "log_norm", log_norm)
        object.__setattr__(self, "norm_error", err)

    @property
    def dim(self) -> int:
        return self.slopes.shape[1]

    @property
    def blocks(self):
        return [(list(range(self.dim)), self.slopes, self.intercepts - getattr(self, "log_norm", 0.0))]

    def _integrate_exp(self, A, b, tol, poly: Polynomial | None = None, drop=40.0):
        """log of int poly * exp(min(A x + b)) over the domain, plus relative error."""
        d = A.shape[1]
        blocks = [(list(range(d)), A, b)]
        phimax, xmax = lp_max_concave(blocks, d, self.domain)
        if not np.isfinite(phimax):
            raise NonIntegrableError("log-density is unbounded above")
        lo, hi, R = truncation_box(blocks, d, self.domain, xmax, phimax - drop)
        if self.domain is not None:
            dlo, dhi = self.domain.bounding_box()
            lo, hi = np.maximum(lo, dlo), np.minimum(hi, dhi)

        def integrand(x):
            return np.exp(self._min_affine(x, A, b) - phimax)

        if poly is None:
            res = integrate_region(integrand, lo, hi, self.domain, rtol=tol, atol=1e-300)
            trunc = _tail_mass_bound(0.0, drop, R, d)
            return phimax + np.log(res.value), (res.error + trunc) / res.value
        scale = integrate_region(lambda x: np.abs(poly(x)) * integrand(x), lo, hi, self.domain, rtol=1e-3, atol=1e-300)
        res = integrate_region(
            lambda x: poly(x) * integrand(x), lo, hi, self.domain, rtol=tol, atol=tol * scale.value
        )
        return phimax, res

    def _min_affine(self, x, A, b):
        out = np.empty(x.shape[0])
        for start in range(0, x.shape[0], _CHUNK):
            xs = x[start : start + _CHUNK]
            out[start : start + _CHUNK] = np.min(xs @ A.T + b, axis=1)
        if self.domain is not None and self.domain.normals.shape[0]:
            inside = self.domain.contains(x, tol=1e-12)
            out[~inside] = -np.inf
        return out

    def phi(self, x) -> np.ndarray:
        return self._min_affine(self._check(x), self.slopes, self.intercepts)

    def logpdf(self, x) -> np.ndarray:
        return self.phi(x) - self.log_norm

    def mode(self) -> np.ndarray:
        _, x = lp_max_concave(self.blocks, self.dim, self.domain)
        return x

    def max_logpdf(self) -> float:
        val, _ = lp_max_concave(self.blocks, self.dim, self.domain)
        return val

    def scale(self) -> float:
        # distance over which the log-density drops by one unit along the steepest piece
        norms = np.linalg.norm(self.slopes, axis=1)
        return float(1.0 / max(np.max(norms), 1e-12))

    def normalized(self, tol=None):
        return self, self.norm_error

    def moment(self, poly: Polynomial, theta, tol=None) -> float:
        tol = self.tol if tol is None else tol
        theta = np.asarray(theta, dtype=float).reshape(-1)
        if theta.size == 1 and self.dim > 1:
            theta = np.full(self.dim, theta[0])
        A = self.slopes + theta[None, :]
        try:
            phimax, res = self._integrate_exp(A, self.intercepts, tol, poly=poly, drop=45.0 + 3.0 * poly.degree)
        except NonIntegrableError as exc:
            raise DivergenceError(f"theta={theta.tolist()} lies outside the MGF domain") from exc
        return float(res.value * np.exp(phimax - self.log_norm))

    def sample(self, n: int, rng) -> np.ndarray:
        from .inequalities import exp_tail_constants

        center = self.mode()
        tc = exp_tail_constants(self, origin=center)
        d = self.dim
        out = []
        have = 0
        draws = 0
        batch = max(4 * n, 10_000)
        while have < n:
            if draws > 2_000_000_000:
                raise QuadratureError("rejection sampler acceptance rate too small")
            r = rng.gamma(d, 1.0 / tc.C2, size=batch)
            u = rng.standard_normal((batch, d))
            u /= np.linalg.norm(u, axis=1, keepdims=True)
            x = center + r[:, None] * u
            log_env = np.log(tc.C1) - tc.C2 * r
            keep = np.log(rng.random(batch)) <= self.logpdf(x) - log_env
            out.append(x[keep])
            have += int(keep.sum())
            draws += batch
        return np.concatenate(out)[:n]

    def to_dict(self) -> dict:
        out = {
            "type": "polyhedral",
            "dim": self.dim,
            "pieces": [{"a": a.tolist(), "b": float(b)} for a, b in zip(self.slopes, self.intercepts)],
        }
        if self.domain is not None:
            out["domain"] = self.domain.to_dict()
        return out


@dataclass(frozen=True, eq=False)
class ProductDensity(_MultivariateBase):
    """Product of independent 1-D piecewise log-linear factors."""

    factors: tuple

    def __post_init__(self):
        fs = tuple(self.factors)
        if not 1 <= len(fs) <= 3:
            raise DimensionError("product densities support dim in {1, 2, 3}")
        if not all(isinstance(f, PiecewiseLogLinearDensity) for f in fs):
            raise TypeError("factors must be PiecewiseLogLinearDensity instances")
        object.__setattr__(self, "factors", fs)

    log_norm = 0.0
    norm_error = 0.0

    @property
    def dim(self) -> int:
        return len(self.factors)

    @property
    def domain(self) -> HPolytope | None:
        lo = np.array([f.support[0] for f in self.factors])
        hi = np.array([f.support[1] for f in self.factors])
        if np.all(np.isinf(lo)) and np.all(np.isinf(hi)):
            return None
        return HPolytope.box(lo, hi)

    @property
    def blocks(self):
        return [([i], *(lambda s, c: (s[:, None], c))(*factor_lines(f))) for i, f in enumerate(self.factors)]

    def support_box(self):
        lo = np.array([f.support[0] for f in self.factors])
        hi = np.array([f.support[1] for f in self.factors])
        return lo, hi

    def logpdf(self, x) -> np.ndarray:
        x = self._check(x)
        out = np.zeros(x.shape[0])
        for i, f in enumerate(self.factors):
            out += f.logpdf(x[:, i])
        return out

    def mode(self) -> np.ndarray:
        return np.array([f.mode()[0] for f in self.factors])

    def max_logpdf(self) -> float:
        return float(sum(f.max_logpdf() for f in self.factors))

    def scale(self) -> float:
        return float(min(f.scale() for f in self.factors))

    def normalized(self, tol=None):
        return self, 0.0

    def box_probability(self, lo, hi) -> float:
        return float(np.prod([f.interval_probability(a, b) for f, a, b in zip(self.factors, lo, hi)]))

    def moment(self, poly: Polynomial, theta, tol=None) -> float:
        theta = np.asarray(theta, dtype=float).reshape(-1)
        if theta.size == 1 and self.dim > 1:
            theta = np.full(self.dim, theta[0])
        if poly.dim != self.dim:
            raise DimensionError("polynomial dimension does not match the density")
        kmax = max(max(e) for _, e in poly.terms)
        tables = [f.power_moments(kmax, theta=th) for f, th in zip(self.factors, theta)]
        total = 0.0
        for c, exps in poly.terms:
            total += c * np.prod([tables[i][e] for i, e in enumerate(exps)])
        return float(total)

    def sample(self, n: int, rng) -> np.ndarray:
        return np.stack([f.sample(n, rng) for f in self.factors], axis=1)

    def to_dict(self) -> dict:
        return {"type": "product", "factors": [f.to_dict() for f in self.factors]}
