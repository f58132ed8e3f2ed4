"""Information-geometry toolkit for the 2D correlated Gaussian model.

Fisher-Rao geometry, geodesic dynamics, the IG correlation with its
ergodic-hierarchy classifier, and the distinguishability measure F(r).
"""

from igeh._core import (
    BRANCH_POINT,
    Block,
    BoundReport,
    Christoffel,
    ClassifyOptions,
    Coordinates,
    CorrelationEntry,
    CorrelationSeries,
    CurvatureReport,
    DerivativeMode,
    DomainError,
    FResult,
    GeodesicState,
    IgehLevel,
    IgehVerdict,
    MacroPoint,
    MetricTensor,
    MicroPoint,
    ModelConfig,
    RSchedule,
    TestFunction,
    Trajectory,
    TrajectorySample,
    bound_check,
    christoffel,
    classify,
    correlation_series,
    correlation_series_path,
    f_bruteforce,
    f_closed,
    f_curve,
    fisher_metric_analytic,
    fisher_metric_numeric,
    geodesic_rhs,
    ig_correlation,
    integrate_geodesic,
    joint_density,
    marginal_density,
    ricci,
    sample,
    schedule_r,
    score_macro,
    time_average,
    trajectory_path_series,
    verify_constraints,
)

__version__ = "0.1.0"

__all__ = [
    "BRANCH_POINT",
    "Block",
    "BoundReport",
    "Christoffel",
    "ClassifyOptions",
    "Coordinates",
    "CorrelationEntry",
    "CorrelationSeries",
    "CurvatureReport",
    "DerivativeMode",
    "DomainError",
    "FResult",
    "GeodesicState",
    "IgehLevel",
    "IgehVerdict",
    "MacroPoint",
    "MetricTensor",
    "MicroPoint",
    "ModelConfig",
    "RSchedule",
    "TestFunction",
    "Trajectory",
    "TrajectorySample",
    "bound_check",
    "christoffel",
    "classify",
    "correlation_series",
    "correlation_series_path",
    "f_bruteforce",
    "f_closed",
    "f_curve",
    "fisher_metric_analytic",
    "fisher_metric_numeric",
    "geodesic_rhs",
    "ig_correlation",
    "integrate_geodesic",
    "joint_density",
    "marginal_density",
    "ricci",
    "sample",
    "schedule_r",
    "score_macro",
    "time_average",
    "trajectory_path_series",
    "verify_constraints",
]
