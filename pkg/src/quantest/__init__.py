"""Quantizer design and adaptive estimation for location/scale parameters.

Designs scalar quantizers that maximize Fisher information about a location
or scale parameter under generalized Gaussian or Student's t noise, evaluates
exact and high-rate information, and runs recursive estimators on quantized
measurements.
"""

from ._version import __version__
from .adaptive import (
    EstimatorState,
    Mode,
    StaticQuantizerSpec,
    export_trajectories_csv,
    make_static_quantizer,
    run_trajectory,
    step_joint,
    step_location,
    step_scale,
)
from .design import (
    DesignSpec,
    IntervalDensity,
    asymptotic_fi,
    asymptotic_fi_general,
    exhaustive_optimal_thresholds,
    optimal_density,
    optimal_uniform_quantizer,
    practical_thresholds,
    thresholds_from_density_numeric,
)
from .distributions import (
    Distribution,
    Family,
    FamilyTag,
    ParamKind,
    cauchy,
    cdf,
    continuous_fi,
    gaussian,
    pdf,
    sample,
    score,
    score_y_derivative,
    truncation_window,
)
from .errors import ConvergenceError, DomainError, NumericalError, QuantestError
from .quantizer import (
    CellProbabilities,
    DegenerateCellWarning,
    Quantizer,
    cell_probs,
    export_cell_table_csv,
    quantize,
    quantized_fi,
    score_coefficients,
)
from .sim import SimConfig, SimResult, default_log_grid, reproduce_table, run_simulation

__all__ = [
    "__version__",
    "QuantestError", "DomainError", "ConvergenceError", "NumericalError",
    "FamilyTag", "ParamKind", "Family", "Distribution", "gaussian", "cauchy",
    "pdf", "cdf", "score", "score_y_derivative", "continuous_fi", "sample",
    "truncation_window",
    "Quantizer", "CellProbabilities", "DegenerateCellWarning", "quantize",
    "cell_probs", "quantized_fi", "score_coefficients", "export_cell_table_csv",
    "DesignSpec", "IntervalDensity", "optimal_density", "practical_thresholds",
    "thresholds_from_density_numeric", "asymptotic_fi", "asymptotic_fi_general",
    "exhaustive_optimal_thresholds", "optimal_uniform_quantizer",
    "Mode", "StaticQuantizerSpec", "EstimatorState", "make_static_quantizer",
    "step_location", "step_scale", "step_joint", "run_trajectory",
    "export_trajectories_csv",
    "SimConfig", "SimResult", "run_simulation", "reproduce_table",
    "default_log_grid",
]
