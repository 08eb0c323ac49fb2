"""Adaptive tensor-Gauss cubature on boxes, simplices and balls (d <= 3).

Each box carries a 5-point tensor Gauss-Legendre estimate; its error estimate
is the larger deviation from a 3-point Gauss rule and from a 4-point Lobatto
rule (the Lobatto nodes sit on the box faces, which exposes kinks hiding
between the outermost Gauss node and the boundary).  Boxes holding the
largest share of the error are bisected along every axis until the summed
error meets the target.  Simplices are reached through the collapsed (Duffy) map of the unit
cube, balls through polar coordinates with radial limits clipped to a convex
domain so that the integrand is continuous inside the region.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import factorial, gamma, pi

import numpy as np

from .errors import QuadratureError


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    n_evals: int


_LOBATTO4 = (
    np.array([-1.0, -1.0 / np.sqrt(5.0), 1.0 / np.sqrt(5.0), 1.0]),
    np.array([1.0 / 6.0, 5.0 / 6.0, 5.0 / 6.0, 1.0 / 6.0]),
)


def _tensor_rule(order, d: int):
    x, w = _LOBATTO4 if order == "lobatto" else np.polynomial.legendre.leggauss(order)
    x = 0.5 * (x + 1.0)
    w = 0.5 * w
    pts = np.array(list(product(x, repeat=d)))
    wts = np.prod(np.array(list(product(w, repeat=d))), axis=1)
    return pts, wts


_RULES = {}


def _rules(d):
    if d not in _RULES:
        _RULES[d] = (_tensor_rule(5, d), _tensor_rule(3, d), _tensor_rule("lobatto", d))
    return _RULES[d]


def _estimate(func, lo, hi):
    """High/low order estimates for a batch of boxes; returns (value, error, n_evals)."""
    d = lo.shape[1]
    rules = _rules(d)
    width = hi - lo
    vol = np.prod(width, axis=1)
    nb = lo.shape[0]
    pts = np.concatenate([(lo[:, None, :] + width[:, None, :] * p[None, :, :]).reshape(-1, d) for p, _ in rules])
    vals = np.asarray(func(pts), dtype=float)
    vals = np.where(np.isfinite(vals), vals, 0.0)
    estimates = []
    start = 0
    for p, w in rules:
        stop = start + nb * p.shape[0]
        estimates.append(vals[start:stop].reshape(nb, -1) @ w * vol)
        start = stop
    v5, v3, vl = estimates
    return v5, np.maximum(np.abs(v5 - v3), np.abs(v5 - vl)), pts.shape[0]


def cubature(
    func, lo, hi, rtol=1e-6, atol=1e-14, max_evals=4_000_000, initial=2, raise_on_fail=True, breaks=None
) -> QuadResult:
    """Integrate a vectorized ``func((n, d) array) -> (n,)`` over the box [lo, hi].

    ``breaks`` optionally lists, per axis, interior points where the integrand
    is known to kink; the starting grid is refined there.
    """
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    d = lo.size
    if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
        raise ValueError("cubature needs a finite box")
    grid = [np.linspace(lo[i], hi[i], initial + 1) for i in range(d)]
    if breaks is not None:
        for i, b in enumerate(breaks):
            b = np.asarray(b, dtype=float)
            b = b[(b > lo[i]) & (b < hi[i])]
            grid[i] = np.unique(np.concatenate([grid[i], b]))
    cells = np.array(list(product(*[range(len(g) - 1) for g in grid])))
    blo = np.stack([grid[i][cells[:, i]] for i in range(d)], axis=1)
    bhi = np.stack([grid[i][cells[:, i] + 1] for i in range(d)], axis=1)
    val, err, n_evals = _estimate(func, blo, bhi)
    done_val = 0.0
    done_err = 0.0
    corners = np.array(list(product([0, 1], repeat=d)), dtype=float)
    while True:
        total = done_val + val.sum()
        total_err = done_err + err.sum()
        if total_err <= max(atol, rtol * abs(total)):
            return QuadResult(float(total), float(total_err), n_evals)
        if n_evals >= max_evals:
            if raise_on_fail:
                raise QuadratureError(
                    f"cubature stopped at {n_evals} evaluations with error {total_err:.3g} (value {total:.6g})"
                )
            return QuadResult(float(total), float(total_err), n_evals)
        # retire boxes whose error is negligible to keep the working set small
        negligible = err < 1e-3 * max(atol, rtol * abs(total)) / max(err.size, 1)
        if np.any(negligible):
            done_val += val[negligible].sum()
            done_err += err[negligible].sum()
            val, err, blo, bhi = val[~negligible], err[~negligible], blo[~negligible], bhi[~negligible]
        order = np.argsort(err)[::-1]
        cum = np.cumsum(err[order])
        k = int(np.searchsorted(cum, 0.5 * cum[-1])) + 1
        split = order[:k]
        keep = order[k:]
        half = 0.5 * (bhi[split] - blo[split])
        clo = (blo[split][:, None, :] + corners[None, :, :] * half[:, None, :]).reshape(-1, d)
        chi = clo + np.repeat(half, corners.shape[0], axis=0)
        cval, cerr, ne = _estimate(func, clo, chi)
        n_evals += ne
        val = np.concatenate([val[keep], cval])
        err = np.concatenate([err[keep], cerr])
        blo = np.concatenate([blo[keep], clo])
        bhi = np.concatenate([bhi[keep], chi])


def simplex_map(vertices):
    """Return ``g(u) -> (points, jacobian)`` mapping [0,1]^d onto the simplex."""
    V = np.asarray(vertices, dtype=float)
    d = V.shape[1]
    edges = np.diff(V, axis=0)
    det = abs(np.linalg.det(edges)) if d > 1 else abs(edges[0, 0])

    def g(u):
        x = np.repeat(V[:1], u.shape[0], axis=0)
        prod_u = np.ones(u.shape[0])
        jac = np.full(u.shape[0], det)
        for i in range(d):
            prod_u = prod_u * u[:, i]
            x = x + prod_u[:, None] * edges[i][None, :]
            jac = jac * u[:, i] ** (d - 1 - i)
        return x, jac

    return g


def integrate_simplex(f, vertices, rtol=1e-6, atol=1e-14, max_evals=4_000_000, raise_on_fail=True) -> QuadResult:
    V = np.asarray(vertices, dtype=float)
    d = V.shape[1]
    g = simplex_map(V)

    def pulled(u):
        x, jac = g(u)
        return f(x) * jac

    return cubature(pulled, np.zeros(d), np.ones(d), rtol=rtol, atol=atol, max_evals=max_evals, raise_on_fail=raise_on_fail)


def ball_volume(d: int, radius: float) -> float:
    return pi ** (d / 2) / gamma(d / 2 + 1) * radius**d


def _ray_interval(center, u, A, c, radius):
    """[r_in, r_out] of {r in [0, radius] : A (center + r u) <= c} per direction row of u."""
    r_in = np.zeros(u.shape[0])
    r_out = np.full(u.shape[0], float(radius))
    if A is None:
        return r_in, r_out
    slack = c - A @ center
    rate = u @ A.T
    with np.errstate(divide="ignore", invalid="ignore"):
        bound = slack[None, :] / rate
    for k in range(A.shape[0]):
        pos = rate[:, k] > 0
        neg = rate[:, k] < 0
        r_out[pos] = np.minimum(r_out[pos], bound[pos, k])
        r_in[neg] = np.maximum(r_in[neg], bound[neg, k])
        flat = rate[:, k] == 0
        if slack[k] < 0:
            r_out[flat] = -1.0
    return r_in, r_out


def integrate_ball(
    f, center, radius, domain=None, rtol=1e-6, atol=1e-14, max_evals=4_000_000, raise_on_fail=True
) -> QuadResult:
    """Integrate ``f`` over ``B(center, radius)`` intersected with ``domain``.

    ``domain`` is ``(A, c)`` meaning ``A x <= c`` or ``None``.
    """
    center = np.atleast_1d(np.asarray(center, dtype=float))
    d = center.size
    A, c = (None, None) if domain is None else (np.asarray(domain[0], float), np.asarray(domain[1], float))
    if d == 1:
        lo, hi = center[0] - radius, center[0] + radius
        if A is not None:
            for a, b in zip(A[:, 0], c):
                if a > 0:
                    hi = min(hi, b / a)
                elif a < 0:
                    lo = max(lo, b / a)
        if hi <= lo:
            return QuadResult(0.0, 0.0, 0)
        return cubature(f, [lo], [hi], rtol=rtol, atol=atol, max_evals=max_evals, raise_on_fail=raise_on_fail)

    def directions(ang):
        if d == 2:
            return np.stack([np.cos(ang[:, 0]), np.sin(ang[:, 0])], axis=1), np.ones(ang.shape[0])
        th, ph = ang[:, 0], ang[:, 1]
        sp = np.sin(ph)
        return np.stack([np.cos(th) * sp, np.sin(th) * sp, np.cos(ph)], axis=1), sp

    def pulled(v):
        u, ang_jac = directions(v[:, 1:])
        r_in, r_out = _ray_interval(center, u, A, c, radius)
        span = np.maximum(r_out - r_in, 0.0)
        r = r_in + v[:, 0] * span
        x = center[None, :] + r[:, None] * u
        vals = np.zeros(v.shape[0])
        ok = span > 0
        if np.any(ok):
            vals[ok] = f(x[ok]) * span[ok] * r[ok] ** (d - 1) * ang_jac[ok]
        return vals

    lo = np.zeros(d)
    hi = np.array([1.0, 2 * pi] + ([pi] if d == 3 else []))
    breaks = [[], _angle_breaks(center, A, c, radius)] if (d == 2 and A is not None) else None
    return cubature(pulled, lo, hi, rtol=rtol, atol=atol, max_evals=max_evals, raise_on_fail=raise_on_fail, breaks=breaks)


def _angle_breaks(center, A, c, radius):
    """Polar angles where the clipped ray length of a 2-D ball kinks."""
    out = []
    slack = c - A @ center
    for a, s in zip(A, slack):
        norm = np.hypot(*a)
        if norm == 0:
            continue
        psi = np.arctan2(a[1], a[0])
        out += [psi + pi / 2, psi - pi / 2]
        ratio = s / (radius * norm)
        if abs(ratio) <= 1:
            out += [psi + np.arccos(ratio), psi - np.arccos(ratio)]
    return np.mod(out, 2 * pi)


def simplex_volume_factor(d: int) -> float:
    return 1.0 / factorial(d)
