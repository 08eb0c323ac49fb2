"""Certified checks of the simplex and ball inequalities for log-concave densities.

Every check returns a ``BoundReport``.  Integration errors are pushed onto
the side that makes the inequality harder to satisfy, so a report passes only
when ``margin - error_bound >= -tol``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from math import factorial

import numpy as np

from .config import DEFAULT_TOLERANCES
from .density import PiecewiseLogLinearDensity
from .errors import DimensionError, PreconditionError, VerificationError
from .multivariate import ProductDensity, factor_lines
from .polytope import HPolytope, lp_max_concave
from .quadrature import ball_volume, integrate_ball
from .simplex import Simplex, _inside_pdf, ball_in_polytope, probability

# allowance for the LP solver's feasibility tolerance
_LP_SLACK = 1e-10


@dataclass(frozen=True)
class BoundReport:
    """Outcome of checking ``lhs <= rhs``."""

    name: str
    lhs: float
    rhs: float
    error_bound: float = 0.0
    tol: float = DEFAULT_TOLERANCES.check
    seed: int | None = None
    inputs: dict = field(default_factory=dict)
    margin: float = field(init=False)
    passed: bool = field(init=False)

    def __post_init__(self):
        margin = self.rhs - self.lhs
        if np.isnan(margin):
            margin = 0.0 if self.lhs == self.rhs else -np.inf
        object.__setattr__(self, "margin", float(margin))
        scale = max(1.0, abs(self.lhs) if np.isfinite(self.lhs) else 1.0, abs(self.rhs) if np.isfinite(self.rhs) else 1.0)
        object.__setattr__(self, "passed", bool(margin - self.error_bound >= -self.tol * scale))

    @property
    def adjusted_margin(self) -> float:
        return self.margin - self.error_bound

    @property
    def inputs_digest(self) -> str:
        blob = json.dumps(self.inputs, sort_keys=True, default=_jsonable).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def as_row(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "pass": self.passed,
            "error_bound": self.error_bound,
            "seed": self.seed,
        }

    def to_dict(self) -> dict:
        out = asdict(self)
        out["inputs_digest"] = self.inputs_digest
        return json.loads(json.dumps(out, default=_jsonable))


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    return str(x)


def _pdf(f, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if f.dim == 1:
        return f.pdf(x.reshape(-1))
    return f.pdf(x.reshape(-1, f.dim))


def _norm_relerr(f) -> float:
    return float(getattr(f, "norm_error", 0.0))


def _check_dims(f, s: Simplex):
    if f.dim != s.dim:
        raise DimensionError(f"density has dim {f.dim} but simplex has dim {s.dim}")


def _prob(f, s, prob, method, budget, seed):
    if prob is not None:
        return prob
    return probability(f, s, method=method, budget=budget, rng_seed=seed)


# -- general-dimension simplex inequalities ------------------------------------


def check_product_bound(f, s: Simplex, method="quadrature", budget=200_000, seed=0, prob=None, tol=None) -> BoundReport:
    """prod_j f(x_j) <= (P(s) / |s|)^(d+1)."""
    _check_dims(f, s)
    tol = DEFAULT_TOLERANCES.check if tol is None else tol
    d = s.dim
    P, e = _prob(f, s, prob, method, budget, seed)
    fv = _pdf(f, s.vertices)
    lhs = float(np.prod(fv))
    rhs = (P / s.volume) ** (d + 1)
    low = (max(P - e, 0.0) / s.volume) ** (d + 1)
    err = rhs - low + (2 * d + 2) * _norm_relerr(f) * max(lhs, rhs)
    return BoundReport("product_bound", lhs, rhs, err, tol, seed, {"vertices": s.vertices, "P": P, "P_err": e})


def check_ratio_bounds(f, s: Simplex, method="quadrature", budget=200_000, seed=0, prob=None, tol=None):
    """Ratio bound of ``f(x_0)`` against the geometric mean of the other vertices.

    Returns ``(first, second)``; ``second`` is ``None`` unless the first
    right-hand side is at most one.
    """
    _check_dims(f, s)
    tol = DEFAULT_TOLERANCES.check if tol is None else tol
    d = s.dim
    fv = _pdf(f, s.vertices)
    if np.any(fv[1:] <= 0):
        raise PreconditionError("vertices x_1..x_d must lie in the support")
    ftilde = float(np.exp(np.mean(np.log(fv[1:]))))
    P, e = _prob(f, s, prob, method, budget, seed)
    q = P / (ftilde * s.volume)
    q_low = max(P - e, 0.0) / (ftilde * s.volume)
    lhs = float(fv[0] / ftilde)
    inputs = {"vertices": s.vertices, "P": P, "P_err": e, "ftilde": ftilde, "q": q}
    rel = (2 * d + 2) * _norm_relerr(f)
    rhs1 = q ** (d + 1)
    first = BoundReport("ratio_bound", lhs, rhs1, rhs1 - q_low ** (d + 1) + rel * max(lhs, rhs1), tol, seed, inputs)
    if rhs1 > 1.0 + tol:
        return first, None
    rhs2 = float(np.exp(d - d / q))
    low2 = float(np.exp(d - d / q_low)) if q_low > 0 else 0.0
    second = BoundReport("ratio_exp_bound", lhs, rhs2, rhs2 - low2 + rel * max(lhs, rhs2), tol, seed, inputs)
    return first, second


def check_sandwich(f, s: Simplex, y, method="quadrature", budget=200_000, seed=0, prob=None, tol=None):
    """min_i f(x_i) <= f(y) <= (P(s)/|s|)^(d+1) (min_i f(x_i))^(-d) for y in s."""
    _check_dims(f, s)
    tol = DEFAULT_TOLERANCES.check if tol is None else tol
    y = np.asarray(y, dtype=float).reshape(-1)
    if not s.contains(y, tol=DEFAULT_TOLERANCES.barycentric):
        raise PreconditionError("y must lie in the simplex")
    d = s.dim
    fv = _pdf(f, s.vertices)
    fmin = float(fv.min())
    if fmin <= 0:
        raise PreconditionError("all vertices must lie in the support")
    fy = float(_pdf(f, y)[0])
    P, e = _prob(f, s, prob, method, budget, seed)
    rel = _norm_relerr(f)
    inputs = {"vertices": s.vertices, "y": y, "P": P, "P_err": e}
    lower = BoundReport("sandwich_lower", fmin, fy, 2 * rel * max(fmin, fy), tol, seed, inputs)
    rhs = (P / s.volume) ** (d + 1) * fmin ** (-d)
    low = (max(P - e, 0.0) / s.volume) ** (d + 1) * fmin ** (-d)
    upper = BoundReport("sandwich_upper", fy, rhs, rhs - low + (3 * d + 3) * rel * max(fy, rhs), tol, seed, inputs)
    return lower, upper


# -- envelopes -----------------------------------------------------------------


def H(t, d: int):
    """t^(-(d+1)) on [0, 1] and exp(d - d t) beyond."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("H is defined for t >= 0")
    with np.errstate(divide="ignore"):
        out = np.where(t <= 1.0, np.power(np.maximum(t, 0.0), -(d + 1.0)), np.exp(d - d * t))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class EnvelopeBound:
    """``y -> f_max H(C f_min sqrt(1 + |y|^2))`` built from a simplex."""

    f_max: float
    f_min: float
    C: float
    dim: int

    def argument(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float).reshape(-1, self.dim)
        return self.C * self.f_min * np.sqrt(1.0 + np.sum(y**2, axis=1))

    def __call__(self, y) -> np.ndarray:
        return self.f_max * H(self.argument(y), self.dim)

    def uses_polynomial_branch(self, y) -> np.ndarray:
        return self.argument(y) <= 1.0


def envelope(f, s: Simplex) -> EnvelopeBound:
    _check_dims(f, s)
    fv = _pdf(f, s.vertices)
    if np.any(fv <= 0):
        raise PreconditionError("all simplex vertices must lie in the support")
    d = s.dim
    C = s.volume / np.sqrt(d + 1) / s.sigma_max
    return EnvelopeBound(float(fv.max()), float(fv.min()), float(C), d)


def _random_points(f, n, rng, spread=None):
    """Probe points: half drawn from ``f``, half spread widely around its mode."""
    d = f.dim
    k = n // 2
    inside = np.asarray(f.sample(k, rng), dtype=float).reshape(k, d)
    spread = 10.0 * max(f.scale(), 1e-3) if spread is None else spread
    radii = spread * rng.random(n - k) ** 0.5 * 3
    u = rng.standard_normal((n - k, d))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    outside = np.asarray(f.mode(), dtype=float).reshape(1, d) + radii[:, None] * u
    return np.vstack([inside, outside])


def check_envelope(f, s: Simplex, n_points: int = 1000, seed: int = 0, tol=None) -> BoundReport:
    """Envelope domination at ``n_points`` random points; lhs is the worst ratio f/envelope."""
    tol = DEFAULT_TOLERANCES.check if tol is None else tol
    env = envelope(f, s)
    rng = np.random.default_rng(seed)
    y = np.vstack([_random_points(f, n_points, rng), s.vertices])
    fy = _pdf(f, y)
    ey = env(y)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(fy > 0, fy / ey, 0.0)
    worst = float(np.max(ratio))
    return BoundReport("envelope", worst, 1.0, _norm_relerr(f), tol, seed, {"vertices": s.vertices, "C": env.C, "n": n_points})


@dataclass(frozen=True)
class TailConstants:
    """``f(x) <= C1 exp(-C2 |x - origin|)``."""

    C1: float
    C2: float
    origin: np.ndarray
    simplex: Simplex
    grid_max_ratio: float
    grid_radius: float

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float).reshape(-1, self.origin.size)
        return self.C1 * np.exp(-self.C2 * np.linalg.norm(x - self.origin, axis=1))

    def integral(self) -> float:
        """Total mass of the bound, finite for every C2 > 0."""
        d = self.origin.size
        surface = 2 * np.pi ** (d / 2) / _gamma(d / 2)
        return float(self.C1 * surface * factorial(d - 1) / self.C2**d)


def _gamma(x):
    from math import gamma

    return gamma(x)


def regular_simplex(dim: int, center, radius: float) -> Simplex:
    """Regular simplex with the given circumradius."""
    E = np.eye(dim + 1) - 1.0 / (dim + 1)
    # orthonormal basis of the sum-zero hyperplane
    basis = np.linalg.svd(E)[2][:dim]
    V = E @ basis.T
    V *= radius / np.linalg.norm(V[0])
    return Simplex(np.asarray(center, dtype=float).reshape(1, dim) + V)


def _interior_center(f) -> np.ndarray:
    if isinstance(f, PiecewiseLogLinearDensity):
        return np.array([f.mean()])
    if isinstance(f, ProductDensity):
        return np.array([g.mean() for g in f.factors])
    mode = np.asarray(f.mode(), dtype=float)
    if f.domain is None:
        return mode
    cheb, _ = f.domain.chebyshev_center()
    return 0.5 * (mode + cheb)


def _directions(d: int, m: int) -> np.ndarray:
    if d == 1:
        return np.array([[1.0], [-1.0]])
    if d == 2:
        a = 2 * np.pi * np.arange(m) / m
        return np.stack([np.cos(a), np.sin(a)], axis=1)
    i = np.arange(m) + 0.5
    phi = np.arccos(1 - 2 * i / m)
    theta = np.pi * (1 + 5**0.5) * i
    return np.stack([np.cos(theta) * np.sin(phi), np.sin(theta) * np.sin(phi), np.cos(phi)], axis=1)


def exp_tail_constants(f, origin=None, n_radial: int = 1000, n_directions: int = 64) -> TailConstants:
    """Constants with ``f(x) <= C1 exp(-C2 |x - origin|)``, checked on a radial grid.

    A regular simplex around an interior point is scaled over a range of
    radii; the one giving the largest decay rate whose vertices keep at least
    1e-6 of the peak density is converted into constants via the
    exponential branch of the envelope.  Raises ``VerificationError`` if the
    grid check finds a violation.
    """
    d = f.dim
    origin = np.zeros(d) if origin is None else np.asarray(origin, dtype=float).reshape(d)
    f_sup = float(np.exp(f.max_logpdf()))
    center = _interior_center(f)
    scale = max(float(f.scale()), 1e-9)
    best = None
    for r in 0.1 * scale * 2.0 ** np.arange(-8, 7):
        try:
            s = regular_simplex(d, center, r)
        except Exception:
            continue
        fv = _pdf(f, s.vertices)
        if np.any(fv < 1e-6 * f_sup):
            continue
        shifted = Simplex(s.vertices - origin)
        C = shifted.volume / np.sqrt(d + 1) / shifted.sigma_max
        rate = d * C * fv.min()
        if best is None or rate > best[0]:
            best = (rate, s, C, float(fv.min()), float(fv.max()))
    if best is None:
        raise VerificationError("no simplex with all vertices in the bulk of the density")
    C2, s, C, fmin, fmax = best
    t0 = C * fmin
    r_star = np.sqrt(max(1.0 / t0**2 - 1.0, 0.0))
    C1 = max(fmax * np.exp(d), f_sup * np.exp(C2 * r_star))
    # grid out to where the bound drops below 1e-12
    R = max((np.log(C1) + 12 * np.log(10)) / C2, 1e-9)
    radii = np.unique(np.concatenate([np.linspace(0.0, R, n_radial // 2), R * np.geomspace(1e-6, 1.0, n_radial - n_radial // 2)]))
    dirs = _directions(d, n_directions)
    pts = origin[None, None, :] + radii[None, :, None] * dirs[:, None, :]
    pts = pts.reshape(-1, d)
    fx = _pdf(f, pts)
    bound = C1 * np.exp(-C2 * np.linalg.norm(pts - origin, axis=1))
    ratio = float(np.max(fx / bound))
    if ratio > 1.0 + 1e-12:
        raise VerificationError(f"tail bound violated on the radial grid (max ratio {ratio:.6g})")
    return TailConstants(float(C1), float(C2), origin, s, ratio, float(R))


# -- corner simplices --------------------------------------------------------


def _phi_range_on_simplex(f, s: Simplex):
    """(min phi, max phi lower bound, max phi upper bound) over the simplex."""
    logv = np.log(_pdf(f, s.vertices))
    mn = float(logv.min())  # concave phi attains its minimum at a vertex
    if isinstance(f, PiecewiseLogLinearDensity):
        a, b = float(s.vertices.min()), float(s.vertices.max())
        cand = np.concatenate([[a, b], f.knots[(f.knots > a) & (f.knots < b)]])
        mx = float(np.max(f.logpdf(cand)))
        return mn, mx, mx
    region = s.halfspaces()
    blocks = _lp_blocks(f)
    val, x = lp_max_concave(blocks, f.dim, region.intersect(f.domain))
    exact = float(f.logpdf(x[None, :])[0]) if x is not None else val
    lower = max(min(exact, val), mn)
    upper = max(val, exact)
    return mn, lower, upper


def corner_log_bounds(f, s: Simplex, method="quadrature", budget=200_000, seed=0, tol=None):
    """Four reports chaining corner-simplex masses, phi over the simplex, and P(s)."""
    _check_dims(f, s)
    tol = DEFAULT_TOLERANCES.check if tol is None else tol
    d = s.dim
    Pj = []
    for j in range(d + 1):
        Pj.append(probability(f, s.corner(j), method=method, budget=budget, rng_seed=seed + j + 1))
    if any(p <= 0 for p, _ in Pj):
        raise PreconditionError("every corner simplex must carry positive mass")
    P, e = probability(f, s, method=method, budget=budget, rng_seed=seed)
    vol = s.volume
    logs = [np.log(p / vol) for p, _ in Pj]
    jmin = int(np.argmin(logs))
    a = float(logs[jmin])
    ea = float(np.log1p(Pj[jmin][1] / Pj[jmin][0]))
    p = float(np.log(P / vol))
    ep_up = float(np.log1p(e / P))
    ep_low = float(-np.log1p(-min(e / P, 0.5)))
    mn, mx_low, mx_up = _phi_range_on_simplex(f, s)
    rel = 2 * _norm_relerr(f)
    top = (d + 1) * p - d * a
    inputs = {"vertices": s.vertices, "P": P, "P_err": e, "P_corners": [q for q, _ in Pj]}
    return [
        BoundReport("corner_min_lower", a, mn, ea + rel, tol, seed, inputs),
        BoundReport("corner_min_upper", mn, p, ep_low + rel, tol, seed, inputs),
        BoundReport("corner_max_lower", p, mx_low, ep_up + rel, tol, seed, inputs),
        BoundReport(
            "corner_max_upper",
            mx_up,
            top,
            (d + 1) * ep_low + d * ea + rel * (2 * d + 1) + _LP_SLACK * (1.0 + abs(mx_up)),
            tol,
            seed,
            inputs,
        ),
    ]


# -- three-ball inequality -----------------------------------------------------


def delta_t(delta: float, t: float) -> float:
    return (1.0 - t) * delta / (1.0 + t)


def _support_polytope(f):
    if isinstance(f, PiecewiseLogLinearDensity):
        lo, hi = f.support
        return HPolytope.box([lo], [hi])
    return f.domain


def _lp_blocks(f):
    if isinstance(f, PiecewiseLogLinearDensity):
        A, c = factor_lines(f)
        return [([0], A[:, None], c)]
    if isinstance(f, ProductDensity):
        return [([i], A[:, None], c) for i, A, c in ((i, *factor_lines(g)) for i, g in enumerate(f.factors))]
    return f.blocks


def sup_over_ball(f, center, radius, rel_tol: float = 1e-4, max_facets: int = 4096):
    """Upper bound on sup of f over B(center, radius) and the refinement gap.

    The ball is replaced by polytopes of tangent halfspaces with more facets;
    each LP maximum over a superset bounds the supremum from above, and the
    doubling stops once two successive values agree to ``rel_tol``.
    """
    center = np.asarray(center, dtype=float).reshape(-1)
    d = center.size
    blocks = _lp_blocks(f)
    dom = _support_polytope(f)
    if d == 1:
        val, _ = lp_max_concave(blocks, 1, HPolytope.box(center - radius, center + radius).intersect(dom))
        return float(np.exp(val)), 0.0
    m = 16 if d == 2 else 64
    prev = None
    while True:
        U = _directions(d, m)
        # every tangent halfspace contains the ball, so their intersection does too
        poly = HPolytope(U, U @ center + radius)
        val, _ = lp_max_concave(blocks, d, poly.intersect(dom))
        val = float(val)
        if prev is not None and abs(val - prev) <= rel_tol * max(1.0, abs(val)) or m >= max_facets:
            gap = 0.0 if prev is None else abs(val - prev)
            return float(np.exp(val)), gap
        prev = val
        m *= 2


def inf_over_sphere_net(f, center, radius, n: int = 256):
    """min of f over a net of the sphere; concavity puts the infimum on the boundary.

    A net minimum over-estimates the infimum, which only makes the three-ball
    right-hand side smaller (the exponent 1 - 1/t is negative).
    """
    center = np.asarray(center, dtype=float).reshape(-1)
    d = center.size
    dirs = _directions(d, n)
    return float(np.min(_pdf(f, center[None, :] + radius * dirs)))


def _ball_probability(f, center, radius, rtol=1e-8, budget=400_000):
    center = np.asarray(center, dtype=float).reshape(-1)
    if isinstance(f, PiecewiseLogLinearDensity):
        p = f.interval_probability(center[0] - radius, center[0] + radius)
        return p, 8 * np.finfo(float).eps * max(p, 1e-300) * (f.knots.size + 2)
    if isinstance(f, ProductDensity) and f.dim == 1:
        return _ball_probability(f.factors[0], center, radius)
    dom = _support_polytope(f)
    domain = None if dom is None or dom.normals.shape[0] == 0 else (dom.normals, dom.offsets)
    res = integrate_ball(_inside_pdf(f), center, radius, domain=domain, rtol=rtol, atol=1e-300, max_evals=budget, raise_on_fail=False)
    return res.value, res.error


def ball_upper_bound(f, delta: float, y, t: float, origin=None, seed=None, tol=None) -> BoundReport:
    """Three-ball inequality with balls centered relative to ``origin``.

    With ``o = origin`` the balls are ``B(o, delta)``, ``B(o + t y, delta_t)``
    and ``B(o + y, delta_t)``; ``o`` must be an interior point of the support
    with ``B(o, delta)`` inside it.
    """
    tol = DEFAULT_TOLERANCES.check if tol is None else tol
    d = f.dim
    if not 0 < t < 1:
        raise ValueError("t must lie in (0, 1)")
    if not delta > 0:
        raise ValueError("delta must be positive")
    o = np.zeros(d) if origin is None else np.asarray(origin, dtype=float).reshape(d)
    y = np.asarray(y, dtype=float).reshape(d)
    dom = _support_polytope(f)
    if dom is not None and dom.normals.shape[0] and not ball_in_polytope(dom, o, delta):
        raise PreconditionError("B(origin, delta) is not inside the support")
    dt = delta_t(delta, t)
    J = inf_over_sphere_net(f, o, delta)
    if J <= 0:
        raise PreconditionError("density vanishes on B(origin, delta)")
    lhs, gap = sup_over_ball(f, o + y, dt)
    P, e = _ball_probability(f, o + t * y, dt)
    vol = ball_volume(d, dt)
    rhs = J ** (1 - 1 / t) * (P / vol) ** (1 / t)
    low = J ** (1 - 1 / t) * (max(P - e, 0.0) / vol) ** (1 / t)
    err = rhs - low + (2 + 2 / t) * _norm_relerr(f) * max(lhs, rhs) + lhs * _LP_SLACK * (1.0 + abs(np.log(lhs)))
    inputs = {"delta": delta, "delta_t": dt, "y": y, "t": t, "origin": o, "inf_B0": J, "P": P, "P_err": e, "sup_gap": gap}
    return BoundReport("ball_upper_bound", lhs, rhs, err, tol, seed, inputs)


# -- suite -----------------------------------------------------------------------


def _distance_to_boundary(f, x) -> float:
    dom = _support_polytope(f)
    if dom is None or dom.normals.shape[0] == 0:
        return np.inf
    norms = np.linalg.norm(dom.normals, axis=1)
    return float(np.min((dom.offsets - dom.normals @ x) / norms))


def random_simplex(f, rng, max_tries: int = 100) -> Simplex:
    """Simplex whose vertices are independent draws from ``f``."""
    d = f.dim
    for _ in range(max_tries):
        V = np.asarray(f.sample(d + 1, rng), dtype=float).reshape(d + 1, d)
        try:
            return Simplex(V)
        except Exception:
            continue
    raise PreconditionError("could not draw a nondegenerate simplex")


SUITE_CHECKS = ("product", "ratio", "sandwich", "envelope", "corner", "ball")


def run_lemma_suite(f, n_trials: int, seed: int = 0, checks=SUITE_CHECKS, n_envelope_points: int = 1000, tol=None):
    """All simplex and ball checks on ``n_trials`` random configurations.

    Trial ``i`` draws from its own stream derived from ``(seed, i)`` so the
    trials are reproducible individually.
    """
    reports = []
    d = f.dim
    origin = _interior_center(f)
    room = _distance_to_boundary(f, origin)
    delta = 0.5 * min(room, float(f.scale()))
    for i in range(n_trials):
        trial_seed = int(np.random.SeedSequence([seed, i]).generate_state(1)[0])
        rng = np.random.default_rng(trial_seed)
        s = random_simplex(f, rng)
        prob = probability(f, s, rng_seed=trial_seed)
        if "product" in checks:
            reports.append(check_product_bound(f, s, seed=trial_seed, prob=prob, tol=tol))
        if "ratio" in checks:
            reports.extend(r for r in check_ratio_bounds(f, s, seed=trial_seed, prob=prob, tol=tol) if r is not None)
        if "sandwich" in checks:
            y = s.sample(1, rng)[0]
            reports.extend(check_sandwich(f, s, y, seed=trial_seed, prob=prob, tol=tol))
        if "envelope" in checks:
            reports.append(check_envelope(f, s, n_points=n_envelope_points, seed=trial_seed, tol=tol))
        if "corner" in checks:
            reports.extend(corner_log_bounds(f, s, seed=trial_seed, tol=tol))
        if "ball" in checks:
            y = np.asarray(f.sample(1, rng), dtype=float).reshape(d) - origin
            t = float(rng.uniform(0.1, 0.9))
            reports.append(ball_upper_bound(f, delta, y, t, origin=origin, seed=trial_seed, tol=tol))
    return reports
