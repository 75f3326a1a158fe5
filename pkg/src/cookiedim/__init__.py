"""Dimensions of stationary and non-stationary cookie-cutter sets."""

from .boxdim import CoverCount, box_dimension_regression, cover_count
from .errors import (
    ConfigError,
    ConstructionError,
    CookieDimError,
    DepthCapError,
    DomainError,
    InvalidMapError,
    InvalidSystemError,
    SequenceError,
    UnsupportedVariantError,
)
from .ifs import (
    Affine,
    Composite,
    ContractionProfile,
    CookieCutter,
    Moebius,
    SystemFamily,
    WordInterval,
    compose,
    compose_word,
    contraction_profile,
    distortion,
    eval_derivative,
    eval_map,
    invert_on_image,
    moebius_from_constraints,
    reflect,
)
from .nonstationary import (
    ApproximationReport,
    DimensionEstimate,
    cantor_intervals,
    combine_error,
    dimension_estimates,
    prefix_root,
    quasi_additivity_check,
    stationary_dimension,
)
from .sequences import (
    SequenceStats,
    SymbolSequence,
    block_sequence,
    explicit_sequence,
    frequencies_condition_diagnostic,
    group_letters,
    growth_sequence,
    rarely_switching_diagnostic,
    stats,
)
from .sweep import Kink, ParametricFamily, SweepResult, instantiate, kink_detect, sweep
from .thermo import (
    PressureEvaluation,
    RootResult,
    SimplexPoint,
    bowen_root,
    moran_dimension,
    partition_function,
    pressure,
    root_map,
    stationary_pressure,
    stationary_root,
)

__version__ = "0.1.0"
