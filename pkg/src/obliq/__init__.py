"""Slope estimators for a straight line observed with error in both coordinates.

The oblique-error family interpolates between OLS(y|x) and OLS(x|y); the
geometric mean, perpendicular, likelihood, fourth-moment and minimum
deviation slopes all sit inside it.  A seeded Monte Carlo harness compares
them.
"""
from .errors import (
    DegenerateSample,
    DegenerateStats,
    DenominatorZero,
    HorizontalUndefined,
    InvalidSlope,
    NoConvergence,
    ObliqError,
    OutOfRange,
    RhoZero,
    SignAmbiguous,
)
from .estimators import (
    Method,
    SlopeFit,
    copas,
    estimate_all,
    geometric_mean,
    minimum_deviation,
    mle,
    moment_clamped,
    moment_raw,
    ols_horizontal,
    ols_vertical,
    perpendicular,
)
from .measurement_error import (
    ErrorVarianceEstimates,
    kappa_tilde,
    madansky_variances,
    mle_circularity,
    table3_row,
)
from .oblique import (
    ObliqueSolution,
    lambda_for_slope,
    lambda_min_deviation,
    oblique_angle,
    p4_eval,
    solve_slope_for_lambda,
    sse_oblique,
)
from .simulation import (
    SimulationConfig,
    SimulationReport,
    generate_sample,
    run_kappa_misspecification,
    run_study,
)
from .stats import Diagnostics, PairedSample, SummaryStats, summarize, validate

__version__ = "0.1.0"
