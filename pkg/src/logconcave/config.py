"""Numerical tolerances and search settings.

Defaults can be overridden through the ``LOGCONCAVE_TOLERANCES`` environment
variable, which holds a JSON object mapping field names to values, e.g.
``LOGCONCAVE_TOLERANCES='{"quadrature": 1e-7}'``.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields, replace

ENV_VAR = "LOGCONCAVE_TOLERANCES"


@dataclass(frozen=True)
class Tolerances:
    normalization_1d: float = 1e-10
    quadrature: float = 1e-6
    check: float = 1e-9
    equality_rel: float = 1e-9
    concavity: float = 1e-9
    hazard_slack: float = 1e-9
    barycentric: float = 1e-12
    degeneracy: float = 1e-12
    ball: float = 1e-12
    sup_refine_rel: float = 1e-4
    divergence_cap: float = 1e6

    def as_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_env(cls, environ=None) -> "Tolerances":
        environ = os.environ if environ is None else environ
        raw = environ.get(ENV_VAR)
        if not raw:
            return cls()
        overrides = json.loads(raw)
        known = {f.name for f in fields(cls)}
        unknown = set(overrides) - known
        if unknown:
            raise ValueError(f"unknown tolerance fields in {ENV_VAR}: {sorted(unknown)}")
        return replace(cls(), **{k: float(v) for k, v in overrides.items()})


DEFAULT_TOLERANCES = Tolerances()
