"""Hypothesis strategies shared by the test modules."""

import numpy as np
from hypothesis import strategies as st

from logconcave.density import PiecewiseLogLinearDensity


@st.composite
def loglinear_densities(draw, max_knots=6, bounded=None):
    """Random piecewise log-linear densities; ``bounded`` forces/forbids finite support."""
    k = draw(st.integers(1, max_knots))
    gaps = draw(st.lists(st.floats(0.05, 3.0), min_size=k - 1, max_size=k - 1))
    start = draw(st.floats(-3.0, 3.0))
    t = start + np.concatenate([[0.0], np.cumsum(gaps)])
    slopes = sorted(draw(st.lists(st.floats(-4.0, 4.0), min_size=k + 1, max_size=k + 1)), reverse=True)
    left, inner, right = slopes[0], slopes[1:-1], slopes[-1]
    finite = draw(st.booleans()) if bounded is None else bounded
    if finite and k >= 2:
        left, right = np.inf, -np.inf
    else:
        left = max(left, 0.0) + 0.2
        right = min(right, 0.0) - 0.2
        inner = [min(max(s, right), left) for s in inner]
    phi = np.concatenate([[0.0], np.cumsum(np.asarray(inner, dtype=float) * np.diff(t))])
    return PiecewiseLogLinearDensity(t, phi, left, right)
