"""Sparse multivariate polynomials with real coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np


@dataclass(frozen=True)
class Polynomial:
    """Sum of ``coef * prod_i x_i**exponent[i]`` over ``terms``.

    ``terms`` is a tuple of ``(coef, exponent)`` pairs with ``exponent`` a tuple
    of non-negative integers, one per coordinate.
    """

    terms: tuple

    def __post_init__(self):
        cleaned = []
        dims = set()
        for coef, exps in self.terms:
            exps = tuple(int(e) for e in np.atleast_1d(exps))
            if any(e < 0 for e in exps):
                raise ValueError("exponents must be non-negative")
            dims.add(len(exps))
            cleaned.append((float(coef), exps))
        if len(dims) > 1:
            raise ValueError("all exponent vectors must have the same length")
        object.__setattr__(self, "terms", tuple(cleaned))

    @classmethod
    def constant(cls, value: float = 1.0, dim: int = 1) -> "Polynomial":
        return cls(((value, (0,) * dim),))

    @classmethod
    def monomial(cls, exponent, coef: float = 1.0) -> "Polynomial":
        exponent = tuple(np.atleast_1d(exponent).tolist())
        return cls(((coef, exponent),))

    @classmethod
    def from_coefficients(cls, coefs) -> "Polynomial":
        """Univariate polynomial ``sum_k coefs[k] x**k``."""
        return cls(tuple((c, (k,)) for k, c in enumerate(coefs) if c != 0) or ((0.0, (0,)),))

    @classmethod
    def parse(cls, text: str, dim: int = 1) -> "Polynomial":
        """Parse expressions such as ``"x^2"``, ``"2*x - 1"`` or ``"x1*x2^2"``.

        In one dimension the variable is ``x`` (or ``x1``); otherwise ``x1 .. xd``.
        """
        import sympy
        from sympy.parsing.sympy_parser import (
            convert_xor,
            implicit_multiplication,
            parse_expr,
            standard_transformations,
        )

        names = ["x"] if dim == 1 else [f"x{i + 1}" for i in range(dim)]
        symbols = sympy.symbols(names)
        local = dict(zip(names, symbols))
        if dim == 1:
            local["x1"] = symbols[0]
        transformations = standard_transformations + (convert_xor, implicit_multiplication)
        try:
            expr = parse_expr(text, local_dict=local, transformations=transformations)
            poly = sympy.Poly(sympy.expand(expr), *symbols)
        except (SyntaxError, TypeError, sympy.PolynomialError) as exc:
            raise ValueError(f"cannot parse polynomial {text!r}: {exc}") from exc
        if poly.free_symbols - set(symbols):
            raise ValueError(f"unknown symbols in {text!r}")
        terms = tuple((float(c), tuple(m)) for m, c in poly.terms())
        return cls(terms or ((0.0, (0,) * dim),))

    @property
    def dim(self) -> int:
        return len(self.terms[0][1])

    @property
    def degree(self) -> int:
        return max(sum(e) for c, e in self.terms if c != 0) if any(c != 0 for c, _ in self.terms) else 0

    def is_constant(self) -> bool:
        return self.degree == 0

    def coefficients_1d(self) -> np.ndarray:
        """Dense coefficient vector (index = power); univariate only."""
        if self.dim != 1:
            raise ValueError("coefficients_1d requires a univariate polynomial")
        out = np.zeros(self.degree + 1)
        for c, (k,) in self.terms:
            if k < out.size:
                out[k] += c
        return out

    def compose_affine_1d(self, shift: float, scale: float) -> "Polynomial":
        """Return ``q`` with ``q(z) = self(shift + scale * z)``."""
        a = self.coefficients_1d()
        out = np.zeros_like(a)
        for k, ak in enumerate(a):
            for j in range(k + 1):
                out[j] += ak * comb(k, j) * shift ** (k - j) * scale**j
        return Polynomial.from_coefficients(out)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.dim == 1 and (x.ndim == 0 or x.ndim == 1):
            x = x.reshape(-1, 1)
        x = np.atleast_2d(x)
        out = np.zeros(x.shape[0])
        for c, exps in self.terms:
            term = np.full(x.shape[0], c)
            for i, e in enumerate(exps):
                if e:
                    term = term * x[:, i] ** e
            out += term
        return out

    def __str__(self) -> str:
        parts = []
        for c, exps in self.terms:
            if self.dim == 1:
                mono = "" if exps[0] == 0 else ("x" if exps[0] == 1 else f"x^{exps[0]}")
            else:
                mono = "*".join(
                    f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}" for i, e in enumerate(exps) if e
                )
            if not mono:
                parts.append(f"{c:g}")
            elif c in (1.0, -1.0):
                parts.append(mono if c > 0 else f"-{mono}")
            else:
                parts.append(f"{c:g}*{mono}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"
