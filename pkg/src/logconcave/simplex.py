"""Simplices, barycentric coordinates and probabilities of simplices."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

import numpy as np

from .density import PiecewiseLogLinearDensity
from .errors import DegenerateSimplexError, DimensionError, QuadratureError
from .multivariate import PolyhedralLogDensity, ProductDensity
from .polytope import HPolytope, simplex_halfspaces, triangulate
from .quadrature import integrate_simplex

# product factors with at most this many knots get their kinks cut out before integrating
_MAX_CUT_KNOTS = 12


@dataclass(frozen=True, eq=False)
class Simplex:
    """Convex hull of ``d + 1`` affinely independent points in ``R^d``."""

    vertices: np.ndarray
    volume: float = field(init=False)
    sigma_max: float = field(init=False)

    def __post_init__(self):
        V = np.atleast_2d(np.asarray(self.vertices, dtype=float))
        if V.ndim != 2 or V.shape[0] != V.shape[1] + 1:
            raise DimensionError(f"a simplex in R^d needs d + 1 vertices, got shape {V.shape}")
        V.flags.writeable = False
        object.__setattr__(self, "vertices", V)
        edges = V[1:] - V[0]
        det = float(np.linalg.det(edges))
        scale = float(np.prod(np.linalg.norm(edges, axis=1)))
        if scale == 0 or abs(det) <= 1e-12 * scale:
            raise DegenerateSimplexError("simplex vertices are affinely dependent")
        object.__setattr__(self, "volume", abs(det) / factorial(self.dim))
        object.__setattr__(self, "sigma_max", float(np.linalg.svd(self.X, compute_uv=False)[0]))

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def X(self) -> np.ndarray:
        """Augmented matrix with columns ``(x_i; 1)``."""
        return np.vstack([self.vertices.T, np.ones(self.dim + 1)])

    @property
    def centroid(self) -> np.ndarray:
        return self.vertices.mean(axis=0)

    @classmethod
    def from_dict(cls, data: dict) -> "Simplex":
        return cls(np.asarray(data["vertices"], dtype=float))

    def to_dict(self) -> dict:
        return {"vertices": self.vertices.tolist()}

    def barycentric(self, y) -> np.ndarray:
        """Solve ``X lam = (y; 1)``; accepts one point or an ``(n, d)`` batch."""
        y = np.asarray(y, dtype=float)
        single = y.ndim <= 1
        Y = y.reshape(-1, self.dim)
        rhs = np.vstack([Y.T, np.ones(Y.shape[0])])
        lam = np.linalg.solve(self.X, rhs).T
        return lam[0] if single else lam

    def contains(self, y, tol: float = 1e-12):
        lam = self.barycentric(y)
        return np.all(lam >= -tol, axis=-1)

    def corner(self, j: int) -> "Simplex":
        """Reflection of the simplex through vertex ``j``."""
        if not 0 <= j <= self.dim:
            raise IndexError(f"vertex index {j} out of range")
        return Simplex(2 * self.vertices[j] - self.vertices)

    def replaced_volume(self, j: int, y) -> float:
        """Volume of the simplex with vertex ``j`` replaced by ``y``."""
        return float(abs(self.barycentric(y)[j]) * self.volume)

    def halfspaces(self) -> HPolytope:
        return simplex_halfspaces(self.vertices)

    def sample(self, n: int, rng) -> np.ndarray:
        return self.sample_weights(n, rng) @ self.vertices

    def sample_weights(self, n: int, rng) -> np.ndarray:
        """Dirichlet(1, ..., 1) weights built from normalized exponentials."""
        E = rng.standard_exponential((n, self.dim + 1))
        return E / E.sum(axis=1, keepdims=True)


def volume(s: Simplex) -> float:
    return s.volume


def barycentric(s: Simplex, y) -> np.ndarray:
    return s.barycentric(y)


def corner_simplex(s: Simplex, j: int) -> Simplex:
    return s.corner(j)


def replaced_simplex_volume(s: Simplex, j: int, y) -> float:
    return s.replaced_volume(j, y)


def sample_simplex(s: Simplex, rng_seed: int, n: int) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be >= 1")
    return s.sample(n, np.random.default_rng(rng_seed))


def ball_in_polytope(c: HPolytope, center, radius: float, tol: float = 1e-12) -> bool:
    """True iff ``B(center, radius)`` lies inside every halfspace of ``c``."""
    if radius < 0:
        raise ValueError("radius must be non-negative")
    center = np.asarray(center, dtype=float).reshape(-1)
    lhs = c.normals @ center + radius * np.linalg.norm(c.normals, axis=1)
    return bool(np.all(lhs <= c.offsets + tol))


# -- probabilities -----------------------------------------------------------


def _cut_planes(f) -> list[tuple[np.ndarray, float]]:
    """Hyperplanes ``u . x = c`` across which ``f`` has a kink worth splitting on."""
    planes = []
    if isinstance(f, ProductDensity):
        for i, g in enumerate(f.factors):
            if g.knots.size <= _MAX_CUT_KNOTS:
                for t in g.knots:
                    u = np.zeros(f.dim)
                    u[i] = 1.0
                    planes.append((u, float(t)))
    return planes


def smooth_cells(f, region: HPolytope) -> list[np.ndarray]:
    """Triangulation of ``region`` on whose simplices ``log f`` is smooth or nearly so."""
    region = region.intersect(getattr(f, "domain", None))
    cells = [region]
    if isinstance(f, PolyhedralLogDensity) and f.slopes.shape[0] > 1:
        A, b = f.slopes, f.intercepts
        cells = []
        for k in range(A.shape[0]):
            # piece k is active where a_k x + b_k <= a_j x + b_j for all j
            others = np.delete(np.arange(A.shape[0]), k)
            U = A[k] - A[others]
            c = b[others] - b[k]
            cells.append(region.intersect(HPolytope(U, c)))
    for u, c in _cut_planes(f):
        split = []
        for cell in cells:
            split.append(cell.intersect(HPolytope(u[None, :], [c])))
            split.append(cell.intersect(HPolytope(-u[None, :], [-c])))
        cells = split
    out = []
    for cell in cells:
        if cell.has_interior():
            out.extend(triangulate(cell))
    return out


def _inside_pdf(f):
    """Density evaluator for points already known to lie in the (closed) support.

    Cubature nodes on a cell face can round to just outside the support, where
    the plain ``pdf`` would jump to zero.
    """
    if isinstance(f, PolyhedralLogDensity):
        return lambda x: np.exp(np.min(x @ f.slopes.T + f.intercepts, axis=1) - f.log_norm)
    if isinstance(f, ProductDensity):
        lo, hi = f.support_box()
        return lambda x: f.pdf(np.clip(x, lo, hi))
    return f.pdf


def _region_probability(f, region: HPolytope, rtol: float, max_evals: int, accept_rtol: float = 1e-4):
    """Cubature over smooth cells.

    Running out of budget is tolerated while the accumulated error estimate
    stays below ``accept_rtol`` relative; the estimate is returned either way
    so callers can widen their margins.
    """
    total, err = 0.0, 0.0
    pdf = _inside_pdf(f)
    for V in smooth_cells(f, region):
        r = integrate_simplex(pdf, V, rtol=rtol, atol=1e-300, max_evals=max_evals, raise_on_fail=False)
        total += r.value
        err += r.error
    if err > accept_rtol * abs(total) and err > 1e-12:
        raise QuadratureError(f"integration error {err:.3g} too large for value {total:.6g}")
    return total, err


def probability(f, s: Simplex, method: str = "quadrature", budget: int = 200_000, rng_seed: int = 0, rtol: float = 1e-9):
    """``(P(s), error bound)`` for the density ``f``.

    One-dimensional densities are integrated exactly.  ``quadrature`` splits
    the simplex into cells where the density is smooth and runs adaptive
    cubature with at most ``budget`` evaluations per cell; ``montecarlo`` uses
    ``budget`` uniform points and reports three standard errors.
    """
    if f.dim != s.dim:
        raise DimensionError("density and simplex dimensions differ")
    if method == "montecarlo":
        rng = np.random.default_rng(rng_seed)
        pts = s.sample(budget, rng)
        vals = f.pdf(pts[:, 0] if s.dim == 1 else pts)
        est = s.volume * float(np.mean(vals))
        err = 3.0 * s.volume * float(np.std(vals, ddof=1)) / np.sqrt(budget)
        return est, err
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    if isinstance(f, PiecewiseLogLinearDensity):
        a, b = float(s.vertices.min()), float(s.vertices.max())
        p = f.interval_probability(a, b)
        return p, 8 * np.finfo(float).eps * max(p, 1e-300) * (f.knots.size + 2)
    try:
        return _region_probability(f, s.halfspaces(), rtol, budget)
    except QuadratureError as exc:
        raise QuadratureError(f"simplex probability: {exc}") from exc


def region_probability(f, region: HPolytope, rtol: float = 1e-9, budget: int = 200_000):
    """``(P(region), error bound)`` for a bounded polytope ``region``."""
    if f.dim == 1 and isinstance(f, PiecewiseLogLinearDensity):
        lo, hi = region.bounding_box()
        p = f.interval_probability(lo[0], hi[0])
        return p, 8 * np.finfo(float).eps * max(p, 1e-300) * (f.knots.size + 2)
    return _region_probability(f, region, rtol, budget)
