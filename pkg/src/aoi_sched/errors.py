"""Exception types shared across the package."""


class SchedulingError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SchedulingError, ValueError):
    """A parameter lies outside its valid domain."""


class ShapeError(SchedulingError, ValueError):
    """Decision vectors have inconsistent lengths."""


class Infeasible(SchedulingError):
    """No schedule can satisfy the constraints of the instance."""


class InfeasibleDistortion(Infeasible):
    """The distortion budget is stricter than the curve can ever reach."""


class InfeasibleSchedule(Infeasible):
    """A schedule implies a negative waiting gap and cannot be realized."""


class NonConvergence(SchedulingError):
    """The iterative minimizer exhausted its budget on every restart."""
