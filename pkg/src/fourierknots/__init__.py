"""Spectrally informed B-spline fitting for uniformly sampled periodic data.

The pipeline: transform the data once, read what the spectrum says about
derivatives, noise, and discontinuities through cheap per-mode filters, and
turn those indicators into a knot vector before solving a single least
squares system for the control points.
"""

__version__ = "0.1.0"

from .bspline import (
    BSplineModel,
    FitReport,
    TensorSplineModel,
    basis_eval,
    build_collocation,
    compute_errors,
    evaluate_spline,
    fit_least_squares,
    fit_tensor,
)
from .datagen import FORMULAS, HARMONIC_FIELDS, Jump, SignalSpec, generate, load_grid
from .errors import (
    GridFormatError,
    InvalidInputError,
    KnotBudgetError,
    SpectrumSymmetryError,
)
from .filters import (
    concentration_factor,
    concentration_normalization,
    derivative_filter,
    jump_filter,
    smoothing_filter,
    smoothing_filter_2d,
    spectral_derivative,
)
from .jumps import (
    JumpEntry,
    JumpReport,
    classify_jumps,
    detect_jumps,
    jump_indicator,
    jump_indicator_2d,
)
from .knots import (
    FeatureCdf,
    KnotVector,
    choose_knots,
    collapsed_feature_2d,
    feature_cdf,
    feature_function,
    finite_difference_derivative,
    knots_2d,
    knots_from_cdf,
    merge_jump_knots,
    uniform_knots,
)
from .spectral import (
    Grid1D,
    Grid2D,
    SpectralFilter,
    Spectrum,
    Spectrum2D,
    apply_filter,
    apply_filter_strands,
    fft_forward,
    fft_forward_2d,
    fft_inverse,
    fft_inverse_2d,
    frequency_vector,
    mode_indices,
)

__all__ = [
    "BSplineModel",
    "FitReport",
    "TensorSplineModel",
    "basis_eval",
    "build_collocation",
    "compute_errors",
    "evaluate_spline",
    "fit_least_squares",
    "fit_tensor",
    "FORMULAS",
    "HARMONIC_FIELDS",
    "Jump",
    "SignalSpec",
    "generate",
    "load_grid",
    "GridFormatError",
    "InvalidInputError",
    "KnotBudgetError",
    "SpectrumSymmetryError",
    "concentration_factor",
    "concentration_normalization",
    "derivative_filter",
    "jump_filter",
    "smoothing_filter",
    "smoothing_filter_2d",
    "spectral_derivative",
    "JumpEntry",
    "JumpReport",
    "classify_jumps",
    "detect_jumps",
    "jump_indicator",
    "jump_indicator_2d",
    "FeatureCdf",
    "KnotVector",
    "choose_knots",
    "collapsed_feature_2d",
    "feature_cdf",
    "feature_function",
    "finite_difference_derivative",
    "knots_2d",
    "knots_from_cdf",
    "merge_jump_knots",
    "uniform_knots",
    "Grid1D",
    "Grid2D",
    "SpectralFilter",
    "Spectrum",
    "Spectrum2D",
    "apply_filter",
    "apply_filter_strands",
    "fft_forward",
    "fft_forward_2d",
    "fft_inverse",
    "fft_inverse_2d",
    "frequency_vector",
    "mode_indices",
]
