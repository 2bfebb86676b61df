"""Trace of a matrix as an average over the unit sphere of a symmetric norm."""

from .duality import NormingResult, check_equivariance, norming_functional, norming_functionals
from .errors import (
    DimensionError,
    NonSmoothPointError,
    NormSpecError,
    NotSymmetricError,
    QuadratureError,
    ZeroVectorError,
)
from .hyperoctahedral import (
    ExactMatrix,
    SignedPermutation,
    apply,
    conjugation_sum,
    enumerate_group,
    group_average_numerical_value,
)
from .lab import (
    MatrixInput,
    TraceExperimentConfig,
    convergence_study,
    ellipse_average,
    ellipse_counterexample,
    estimate_trace,
    estimate_trace_euclidean,
    load_matrix,
)
from .measure import (
    EstimateReport,
    SampleBatch,
    estimate_surface_average,
    perimeter_2d,
    pushforward_sample,
    quadrature_average_2d,
    sample_euclidean_sphere,
    surface_area,
    surface_weight,
)
from .norms import (
    NormSpec,
    dual_norm_eval,
    format_norm_spec,
    is_one_symmetric,
    norm_eval,
    norm_gradient,
    parse_norm_spec,
    smoothness_margin,
)

__version__ = "0.1.0"
