"""Log-concave densities: exact one-dimensional arithmetic, numerical certificates
for simplex and ball inequalities, convergence diagnostics and KS-ball moment
confidence intervals."""

from .catalog import CATALOG_NAMES, BimodalMixture, DensitySpecError, catalog, density_from_dict, load_density
from .confidence import (
    ConfidenceResult,
    CoverageResult,
    EmpiricalSample,
    SearchConfig,
    coverage_simulation,
    ks_distance,
    massart_constant,
    moment_confidence_interval,
)
from .config import DEFAULT_TOLERANCES, Tolerances
from .convergence import (
    CompactSet,
    ConvergenceReport,
    MGFDomain1D,
    SublinearFn,
    convergence_report,
    divergence_witness,
    l1_distance,
    make_sequence,
    mgf_domain,
    sup_distance,
    weighted_l1,
)
from .density import PiecewiseLogLinearDensity, cdf, eval_logdensity, moment, normalize, sample, verify_concavity
from .errors import (
    DegenerateSimplexError,
    DimensionError,
    DivergenceError,
    InfeasibleError,
    LogConcaveError,
    NonIntegrableError,
    NotLogConcaveError,
    PreconditionError,
    QuadratureError,
    VerificationError,
)
from .inequalities import (
    BoundReport,
    EnvelopeBound,
    TailConstants,
    ball_upper_bound,
    check_envelope,
    check_product_bound,
    check_ratio_bounds,
    check_sandwich,
    corner_log_bounds,
    envelope,
    exp_tail_constants,
    run_lemma_suite,
)
from .multivariate import PolyhedralLogDensity, ProductDensity
from .polynomial import Polynomial
from .polytope import HPolytope
from .simplex import Simplex, barycentric, corner_simplex, probability, replaced_simplex_volume, sample_simplex, volume
from .univariate import check_hazard_monotone, hazard_left, hazard_right, loglinear_equality_witness, moment_bound

__version__ = "0.1.0"

__all__ = [
    "CATALOG_NAMES",
    "BimodalMixture",
    "DensitySpecError",
    "catalog",
    "density_from_dict",
    "load_density",
    "ConfidenceResult",
    "CoverageResult",
    "EmpiricalSample",
    "SearchConfig",
    "coverage_simulation",
    "ks_distance",
    "massart_constant",
    "moment_confidence_interval",
    "DEFAULT_TOLERANCES",
    "Tolerances",
    "CompactSet",
    "ConvergenceReport",
    "MGFDomain1D",
    "SublinearFn",
    "convergence_report",
    "divergence_witness",
    "l1_distance",
    "make_sequence",
    "mgf_domain",
    "sup_distance",
    "weighted_l1",
    "PiecewiseLogLinearDensity",
    "cdf",
    "eval_logdensity",
    "moment",
    "normalize",
    "sample",
    "verify_concavity",
    "DegenerateSimplexError",
    "DimensionError",
    "DivergenceError",
    "InfeasibleError",
    "LogConcaveError",
    "NonIntegrableError",
    "NotLogConcaveError",
    "PreconditionError",
    "QuadratureError",
    "VerificationError",
    "BoundReport",
    "EnvelopeBound",
    "TailConstants",
    "ball_upper_bound",
    "check_envelope",
    "check_product_bound",
    "check_ratio_bounds",
    "check_sandwich",
    "corner_log_bounds",
    "envelope",
    "exp_tail_constants",
    "run_lemma_suite",
    "PolyhedralLogDensity",
    "ProductDensity",
    "Polynomial",
    "HPolytope",
    "Simplex",
    "barycentric",
    "corner_simplex",
    "probability",
    "replaced_simplex_volume",
    "sample_simplex",
    "volume",
    "check_hazard_monotone",
    "hazard_left",
    "hazard_right",
    "loglinear_equality_witness",
    "moment_bound",
    "__version__",
]
