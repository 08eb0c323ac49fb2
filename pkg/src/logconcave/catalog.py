"""Named fixture densities and the JSON density format.

Smooth families (Gaussian, gamma, beta) are represented by interpolating the
exact log-density on a fine knot grid; interpolating a concave function keeps
it concave, and the tangent tail slopes keep the tails conservative.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import stats

from .density import PiecewiseLogLinearDensity
from .multivariate import PolyhedralLogDensity, ProductDensity
from .polytope import HPolytope

CATALOG_NAMES = ("uniform", "exponential", "laplace", "gaussian", "gamma", "beta")


class DensitySpecError(ValueError):
    """Malformed density specification; the message names the offending field."""


def uniform(a: float = 0.0, b: float = 1.0) -> PiecewiseLogLinearDensity:
    if not b > a:
        raise ValueError("uniform needs a < b")
    return PiecewiseLogLinearDensity([a, b], [-np.log(b - a)] * 2, np.inf, -np.inf)


def exponential(rate: float = 1.0) -> PiecewiseLogLinearDensity:
    if not rate > 0:
        raise ValueError("rate must be positive")
    return PiecewiseLogLinearDensity([0.0], [np.log(rate)], np.inf, -rate)


def laplace(loc: float = 0.0, scale: float = 1.0) -> PiecewiseLogLinearDensity:
    if not scale > 0:
        raise ValueError("scale must be positive")
    return PiecewiseLogLinearDensity([loc], [-np.log(2 * scale)], 1.0 / scale, -1.0 / scale)


def gaussian(mean: float = 0.0, var: float = 1.0, half_width: float = 8.0, n_knots: int = 321) -> PiecewiseLogLinearDensity:
    """Piecewise log-linear approximation of N(mean, var) on mean +- half_width sd."""
    if not var > 0:
        raise ValueError("var must be positive")
    sd = np.sqrt(var)
    z = np.linspace(-half_width, half_width, n_knots)
    return PiecewiseLogLinearDensity(mean + sd * z, -0.5 * z**2, half_width / sd, -half_width / sd)


def _smooth_knots(lo, hi, n_mid=1000, n_geo=60, eps=1e-6, left_edge=True, right_edge=True):
    """Uniform grid on [lo, hi] with geometric refinement towards edges that need it."""
    parts = [np.linspace(lo, hi, n_mid)]
    width = hi - lo
    if left_edge:
        parts.append(lo + width * np.geomspace(eps, 1.0 / n_mid, n_geo))
    if right_edge:
        parts.append(hi - width * np.geomspace(eps, 1.0 / n_mid, n_geo))
    return np.unique(np.concatenate(parts))


def gamma(shape: float = 2.0, rate: float = 1.0) -> PiecewiseLogLinearDensity:
    """Gamma(shape >= 1, rate); for shape > 1 the support is cut just above 0."""
    if shape < 1 or not rate > 0:
        raise ValueError("gamma needs shape >= 1 and rate > 0")
    if shape == 1:
        return exponential(rate)
    dist = stats.gamma(shape, scale=1.0 / rate)
    hi = dist.isf(1e-16)
    eps = 1e-7 * dist.mean()
    t = _smooth_knots(eps, hi, right_edge=False, eps=1e-7)
    phi = dist.logpdf(t)
    right = (shape - 1) / hi - rate
    return PiecewiseLogLinearDensity(t, phi, np.inf, right)


def beta(a: float = 2.0, b: float = 2.0) -> PiecewiseLogLinearDensity:
    """Beta(a >= 1, b >= 1); an edge with exponent > 1 is cut at distance 1e-7."""
    if a < 1 or b < 1:
        raise ValueError("beta needs a, b >= 1")
    if a == 1 and b == 1:
        return uniform(0.0, 1.0)
    lo = 0.0 if a == 1 else 1e-7
    hi = 1.0 if b == 1 else 1.0 - 1e-7
    t = _smooth_knots(lo, hi, left_edge=a > 1, right_edge=b > 1, eps=1e-7)
    phi = stats.beta(a, b).logpdf(t)
    return PiecewiseLogLinearDensity(t, phi, np.inf, -np.inf)


_FACTORIES = {
    "uniform": uniform,
    "exponential": exponential,
    "laplace": laplace,
    "gaussian": gaussian,
    "gamma": gamma,
    "beta": beta,
}


def catalog(name: str, dim: int = 1, **params):
    """Catalog density by name; ``dim > 1`` gives the product of ``dim`` copies."""
    if name not in _FACTORIES:
        raise DensitySpecError(f"unknown catalog density {name!r}; choose from {', '.join(CATALOG_NAMES)}")
    base = _FACTORIES[name](**params)
    if dim == 1:
        return base
    return ProductDensity(tuple([base] * dim))


@dataclass(frozen=True)
class BimodalMixture:
    """Two-component Gaussian mixture; not log-concave, used as a negative control."""

    separation: float = 6.0
    weight: float = 0.5
    dim = 1

    def _parts(self, x):
        x = np.asarray(x, dtype=float)
        m = self.separation / 2
        return stats.norm(-m, 1.0), stats.norm(m, 1.0), x

    def pdf(self, x):
        a, b, x = self._parts(x)
        return self.weight * a.pdf(x) + (1 - self.weight) * b.pdf(x)

    def logpdf(self, x):
        return np.log(self.pdf(x))

    def cdf(self, x):
        a, b, x = self._parts(x)
        return self.weight * a.cdf(x) + (1 - self.weight) * b.cdf(x)

    def sf(self, x):
        a, b, x = self._parts(x)
        return self.weight * a.sf(x) + (1 - self.weight) * b.sf(x)

    def logcdf(self, x):
        return np.log(self.cdf(x))

    def logsf(self, x):
        return np.log(self.sf(x))

    @property
    def support(self):
        return -np.inf, np.inf


# -- JSON -----------------------------------------------------------------


def _field(data: dict, key: str, where: str):
    if not isinstance(data, dict):
        raise DensitySpecError(f"{where}: expected an object")
    if key not in data:
        raise DensitySpecError(f"{where}: missing field {key!r}")
    return data[key]


def _number(value, where: str) -> float:
    if isinstance(value, str) and value in ("inf", "+inf", "-inf"):
        return float(value)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DensitySpecError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _vector(value, where: str) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise DensitySpecError(f"{where}: expected a non-empty list of numbers")
    return np.array([_number(v, f"{where}[{i}]") for i, v in enumerate(value)])


def polytope_from_dict(data, where: str = "domain") -> HPolytope:
    if isinstance(data, dict) and "lo" in data and "hi" in data:
        return HPolytope.box(_vector(data["lo"], f"{where}.lo"), _vector(data["hi"], f"{where}.hi"))
    hs = _field(data, "halfspaces", where)
    if not isinstance(hs, list) or not hs:
        raise DensitySpecError(f"{where}.halfspaces: expected a non-empty list")
    U = [_vector(_field(h, "u", f"{where}.halfspaces[{i}]"), f"{where}.halfspaces[{i}].u") for i, h in enumerate(hs)]
    c = [_number(_field(h, "c", f"{where}.halfspaces[{i}]"), f"{where}.halfspaces[{i}].c") for i, h in enumerate(hs)]
    if len({u.size for u in U}) != 1:
        raise DensitySpecError(f"{where}.halfspaces: normals have different lengths")
    return HPolytope(np.array(U), np.array(c))


def density_from_dict(data, where: str = "density"):
    """Build a density from its JSON object form."""
    kind = _field(data, "type", where)
    try:
        if kind == "piecewise_loglinear":
            return PiecewiseLogLinearDensity(
                _vector(_field(data, "knots", where), f"{where}.knots"),
                _vector(_field(data, "logvals", where), f"{where}.logvals"),
                _number(_field(data, "left_slope", where), f"{where}.left_slope"),
                _number(_field(data, "right_slope", where), f"{where}.right_slope"),
            )
        if kind == "polyhedral":
            dim = int(_number(_field(data, "dim", where), f"{where}.dim"))
            pieces = _field(data, "pieces", where)
            if not isinstance(pieces, list) or not pieces:
                raise DensitySpecError(f"{where}.pieces: expected a non-empty list")
            A = [_vector(_field(p, "a", f"{where}.pieces[{i}]"), f"{where}.pieces[{i}].a") for i, p in enumerate(pieces)]
            b = [_number(_field(p, "b", f"{where}.pieces[{i}]"), f"{where}.pieces[{i}].b") for i, p in enumerate(pieces)]
            if any(a.size != dim for a in A):
                raise DensitySpecError(f"{where}.pieces: every 'a' must have length dim={dim}")
            domain = polytope_from_dict(data["domain"], f"{where}.domain") if data.get("domain") else None
            return PolyhedralLogDensity(np.array(A), np.array(b), domain=domain)
        if kind == "catalog":
            params = data.get("params", {}) or {}
            if not isinstance(params, dict):
                raise DensitySpecError(f"{where}.params: expected an object")
            return catalog(str(_field(data, "name", where)), dim=int(data.get("dim", 1)), **params)
        if kind == "product":
            factors = _field(data, "factors", where)
            return ProductDensity(tuple(density_from_dict(f, f"{where}.factors[{i}]") for i, f in enumerate(factors)))
    except DensitySpecError:
        raise
    except (ValueError, TypeError) as exc:
        raise DensitySpecError(f"{where}: {exc}") from exc
    raise DensitySpecError(f"{where}.type: unknown density type {kind!r}")


def load_density(spec: str):
    """Density from ``catalog:<name>[:dim]``, ``control:bimodal``, a JSON string, or a JSON file path."""
    if spec == "control:bimodal":
        return BimodalMixture()
    if spec.startswith("catalog:"):
        parts = spec.split(":")
        try:
            dim = int(parts[2]) if len(parts) > 2 else 1
        except ValueError:
            raise DensitySpecError(f"{spec}: dimension must be an integer") from None
        if dim < 1:
            raise DensitySpecError(f"{spec}: dimension must be >= 1")
        return catalog(parts[1], dim=dim)
    text = spec if spec.lstrip().startswith("{") else None
    source = "<string>"
    if text is None:
        path = Path(spec)
        if not path.is_file():
            raise DensitySpecError(f"density file not found: {spec}")
        text = path.read_text()
        source = str(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DensitySpecError(f"{source}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return density_from_dict(data)


def density_to_dict(d) -> dict:
    return d.to_dict()
