"""Spectrally shaped binary sequence design via convex relaxation and randomized rounding."""

from ._version import __version__
from .baselines import (
    BaselineResult,
    LpnnState,
    ShapeBounds,
    ShapeState,
    lpnn_increments,
    run_lpnn,
    run_shape,
    shape_bounds_from_problem,
    shape_scale_step,
    shape_sequence_step,
    shape_spectrum_step,
)
from .errors import (
    DegenerateObjectiveError,
    DivergenceError,
    EmptyInterfererError,
    EmptyMessageError,
    InfeasibleRelaxationError,
    LengthMismatchError,
    NoFeasibleError,
    NonConvergenceError,
    OverlapError,
    RankZeroError,
    SizeLimitError,
    SpecseqError,
    ZeroScaleError,
    ZeroSpectrumError,
)
from .experiments import (
    ExperimentConfig,
    ExperimentKind,
    ExperimentReport,
    default_config,
    run_experiment,
)
from .oracle import OracleResult, exhaustive_search, halved_constraint_optimum
from .problem import (
    BandSpec,
    DesignProblem,
    MetricBundle,
    ScoreKind,
    interferer_power,
    message_power,
    metric_bundle,
    rejection_ratio,
    reciprocal_dynamic_range,
    sequence_line,
    validate_problem,
)
from .rounding import (
    Candidate,
    DesignResult,
    approximation_ratio,
    arcsin_trace_ratio,
    mcdiarmid_bound,
    quantized_principal_eigenvector,
    run_design,
    sample_candidate,
)
from .sdp import (
    SdpSolution,
    SolverConfig,
    dual_bisection,
    inner_maxcut_sdp,
    kkt_residuals,
    solve_relaxation,
)
from .spectral import (
    EigenFactorization,
    GramMatrix,
    PartialDftBasis,
    build_partial_dft,
    eigh,
    full_spectrum,
    gram,
)

__all__ = [name for name in dir() if not name.startswith("_")]
