"""H-polytopes, linear programs over concave piecewise-affine functions, and
clipped triangulations used to integrate over convex regions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import Delaunay, HalfspaceIntersection, QhullError

from .errors import DimensionError


@dataclass(frozen=True, eq=False)
class HPolytope:
    """Intersection of halfspaces ``normals[k] . x <= offsets[k]``."""

    normals: np.ndarray
    offsets: np.ndarray

    def __post_init__(self):
        U = np.atleast_2d(np.asarray(self.normals, dtype=float))
        c = np.atleast_1d(np.asarray(self.offsets, dtype=float))
        if U.shape[0] != c.size:
            raise ValueError("one offset per normal required")
        object.__setattr__(self, "normals", U)
        object.__setattr__(self, "offsets", c)

    @property
    def dim(self) -> int:
        return self.normals.shape[1]

    @classmethod
    def box(cls, lo, hi) -> "HPolytope":
        lo = np.atleast_1d(np.asarray(lo, dtype=float))
        hi = np.atleast_1d(np.asarray(hi, dtype=float))
        d = lo.size
        rows, offs = [], []
        for i in range(d):
            e = np.zeros(d)
            e[i] = 1.0
            if np.isfinite(hi[i]):
                rows.append(e)
                offs.append(hi[i])
            if np.isfinite(lo[i]):
                rows.append(-e)
                offs.append(-lo[i])
        if not rows:
            return cls(np.zeros((0, d)), np.zeros(0))
        return cls(np.array(rows), np.array(offs))

    @classmethod
    def from_dict(cls, data: dict) -> "HPolytope":
        hs = data["halfspaces"]
        return cls(np.array([h["u"] for h in hs], dtype=float), np.array([h["c"] for h in hs], dtype=float))

    def to_dict(self) -> dict:
        return {"halfspaces": [{"u": u.tolist(), "c": float(c)} for u, c in zip(self.normals, self.offsets)]}

    def intersect(self, other: "HPolytope | None") -> "HPolytope":
        if other is None:
            return self
        return HPolytope(np.vstack([self.normals, other.normals]), np.concatenate([self.offsets, other.offsets]))

    def contains(self, x, tol: float = 1e-12) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if x.shape[1] != self.dim:
            raise DimensionError("point dimension does not match polytope")
        if self.normals.shape[0] == 0:
            return np.ones(x.shape[0], dtype=bool)
        return np.all(x @ self.normals.T <= self.offsets + tol * (1.0 + np.abs(self.offsets)), axis=1)

    def chebyshev_center(self):
        """(center, radius) of the largest inscribed ball; radius <= 0 means empty interior."""
        U, c = self.normals, self.offsets
        d = self.dim
        norms = np.linalg.norm(U, axis=1)
        A_ub = np.hstack([U, norms[:, None]])
        res = linprog(
            np.r_[np.zeros(d), -1.0],
            A_ub=A_ub,
            b_ub=c,
            bounds=[(None, None)] * d + [(None, 1e6)],
            method="highs",
        )
        if res.status != 0:
            return None, 0.0
        return res.x[:d], float(res.x[d])

    def has_interior(self) -> bool:
        _, r = self.chebyshev_center()
        return r > 1e-12

    def bounding_box(self):
        """Axis-aligned bounds via 2d linear programs (infinite when unbounded)."""
        d = self.dim
        lo = np.full(d, -np.inf)
        hi = np.full(d, np.inf)
        for i in range(d):
            for sign in (1.0, -1.0):
                cvec = np.zeros(d)
                cvec[i] = -sign
                res = linprog(cvec, A_ub=self.normals, b_ub=self.offsets, bounds=[(None, None)] * d, method="highs")
                if res.status == 0:
                    if sign > 0:
                        hi[i] = res.x[i]
                    else:
                        lo[i] = res.x[i]
        return lo, hi

    def vertices(self) -> np.ndarray:
        center, r = self.chebyshev_center()
        if center is None or r <= 1e-13:
            return np.zeros((0, self.dim))
        hs = np.hstack([self.normals, -self.offsets[:, None]])
        if self.dim == 1:
            lo, hi = self.bounding_box()
            return np.array([[lo[0]], [hi[0]]])
        try:
            return HalfspaceIntersection(hs, center).intersections
        except QhullError:
            return np.zeros((0, self.dim))


def simplex_halfspaces(vertices) -> HPolytope:
    """H-representation of conv(vertices) for d + 1 affinely independent points."""
    V = np.asarray(vertices, dtype=float)
    d = V.shape[1]
    rows, offs = [], []
    centroid = V.mean(axis=0)
    for j in range(d + 1):
        face = np.delete(V, j, axis=0)
        if d == 1:
            n = np.array([1.0])
        else:
            edges = face[1:] - face[0]
            # normal = null vector of the face edges
            _, _, vt = np.linalg.svd(edges)
            n = vt[-1]
        off = n @ face[0]
        if n @ centroid > off:
            n, off = -n, -off
        rows.append(n)
        offs.append(off)
    return HPolytope(np.array(rows), np.array(offs))


def triangulate(poly: HPolytope) -> list[np.ndarray]:
    """Split a bounded polytope into simplices (list of (d+1, d) vertex arrays)."""
    verts = poly.vertices()
    d = poly.dim
    if verts.shape[0] < d + 1:
        return []
    if d == 1:
        return [np.array([[verts.min()], [verts.max()]])]
    try:
        tri = Delaunay(verts)
    except QhullError:
        return []
    out = []
    for simplex in tri.simplices:
        V = verts[simplex]
        if abs(np.linalg.det(V[1:] - V[0])) > 1e-14 * max(1.0, np.abs(V).max()) ** d:
            out.append(V)
    return out


def lp_max_concave(blocks, dim: int, region: HPolytope | None = None):
    """Maximize ``sum_b min_k (A_b x[idx_b] + c_b)`` over ``region``.

    ``blocks`` is a list of ``(idx, A, c)``.  Returns ``(value, argmax)``;
    ``value`` is ``+inf`` when unbounded and ``-inf`` when infeasible.
    """
    nb = len(blocks)
    nvar = dim + nb
    rows, rhs = [], []
    for b, (idx, A, c) in enumerate(blocks):
        A = np.atleast_2d(A)
        block = np.zeros((A.shape[0], nvar))
        block[:, np.asarray(idx)] = -A
        block[:, dim + b] = 1.0
        rows.append(block)
        rhs.append(np.asarray(c, dtype=float))
    if region is not None and region.normals.shape[0]:
        block = np.zeros((region.normals.shape[0], nvar))
        block[:, :dim] = region.normals
        rows.append(block)
        rhs.append(region.offsets)
    cost = np.r_[np.zeros(dim), -np.ones(nb)]
    res = linprog(
        cost,
        A_ub=np.vstack(rows),
        b_ub=np.concatenate(rhs),
        bounds=[(None, None)] * nvar,
        method="highs",
        options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10},
    )
    if res.status == 3:
        return np.inf, None
    if res.status == 2:
        return -np.inf, None
    if res.status != 0:
        raise RuntimeError(f"linear program failed: {res.message}")
    return float(-res.fun), res.x[:dim]
