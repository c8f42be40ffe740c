"""Age-of-information optimal update scheduling with distortion constraints.

Public surface: distortion curves and their inversion, problem/schedule
types with the total-age objective, exact per-mode solvers, a descent-based
verification oracle, and sawtooth trajectory reconstruction.
"""

from ._kernels import BACKEND
from .closed_form import (
    RegimeReport,
    geometric_first_interval,
    solve,
    solve_constant,
    solve_inverse_age,
    solve_proportional_age,
)
from .distortion import (
    PRESETS,
    DistortionKind,
    DistortionSpec,
    evaluate,
    min_processing_for,
    sensor_fusion_spec,
)
from .errors import (
    DomainError,
    Infeasible,
    InfeasibleDistortion,
    InfeasibleSchedule,
    NonConvergence,
    SchedulingError,
    ShapeError,
)
from .model import (
    Constant,
    ConstraintMode,
    FeasibilityReport,
    InverseAge,
    ProblemInstance,
    ProportionalAge,
    Schedule,
    Violation,
    average_age,
    check_feasibility,
    request_gaps,
    total_age,
)
from .oracle import GAP_LOWER, GAP_UPPER, OracleConfig, compare, oracle_solve, random_instance
from .trajectory import AgeTrajectory, Breakpoint, build, integrate, sample

__version__ = "0.1.0"

__all__ = [
    "AgeTrajectory",
    "BACKEND",
    "Breakpoint",
    "Constant",
    "ConstraintMode",
    "DistortionKind",
    "DistortionSpec",
    "DomainError",
    "FeasibilityReport",
    "GAP_LOWER",
    "GAP_UPPER",
    "Infeasible",
    "InfeasibleDistortion",
    "InfeasibleSchedule",
    "InverseAge",
    "NonConvergence",
    "OracleConfig",
    "PRESETS",
    "ProblemInstance",
    "ProportionalAge",
    "RegimeReport",
    "Schedule",
    "SchedulingError",
    "ShapeError",
    "Violation",
    "average_age",
    "build",
    "check_feasibility",
    "compare",
    "evaluate",
    "geometric_first_interval",
    "integrate",
    "min_processing_for",
    "oracle_solve",
    "random_instance",
    "request_gaps",
    "sample",
    "sensor_fusion_spec",
    "solve",
    "solve_constant",
    "solve_inverse_age",
    "solve_proportional_age",
    "total_age",
    "__version__",
]
