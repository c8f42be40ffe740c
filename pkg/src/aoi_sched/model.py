"""Problem instances, schedules, the total-age objective, and feasibility.

A horizon of length T carries N update requests.  Update i is requested
after waiting s_i, processed for c_i, and received at the request time plus
c_i; y_i = s_i + c_{i-1} is both the gap between consecutive requests and
the receiver's instantaneous age when update i is requested (with the
conventions c_0 = c_{N+1} = 0 and a final slot y_{N+1} closing the horizon).
The total age is

    A_T = (1/2) * sum(y_i^2, i=1..N+1) + sum(c_i * y_i, i=1..N)

Indexing follows that 1-based convention in documentation; storage is
0-based with the c_0 = c_{N+1} = 0 sentinels handled in code, never stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .errors import DomainError, ShapeError


@dataclass(frozen=True)
class Constant:
    """Every update must be processed for at least c_min."""

    c_min: float

    def __post_init__(self):
        if not (self.c_min >= 0):
            raise DomainError(f"c_min must be nonnegative, got {self.c_min}")


@dataclass(frozen=True)
class InverseAge:
    """Processing must grow with the age at request time: c_i >= alpha * y_i."""

    alpha: float

    def __post_init__(self):
        if not (self.alpha > 0):
            raise DomainError(f"alpha must be positive, got {self.alpha}")


@dataclass(frozen=True)
class ProportionalAge:
    """Processing may shrink as the age at request time grows:
    c_i >= c - alpha * y_i, together with c_i >= 0.  Requires alpha < 1/2."""

    c: float
    alpha: float

    def __post_init__(self):
        if not (self.c > 0):
            raise DomainError(f"c must be positive, got {self.c}")
        if not (0 < self.alpha < 0.5):
            raise DomainError(f"alpha must lie in (0, 1/2), got {self.alpha}")


ConstraintMode = Union[Constant, InverseAge, ProportionalAge]


@dataclass(frozen=True)
class ProblemInstance:
    """Horizon T, update count N, and the active constraint mode."""

    T: float
    N: int
    mode: ConstraintMode

    def __post_init__(self):
        if not (self.T > 0):
            raise DomainError(f"T must be positive, got {self.T}")
        if not (isinstance(self.N, int) and self.N >= 1):
            raise DomainError(f"N must be an integer >= 1, got {self.N!r}")
        if not isinstance(self.mode, (Constant, InverseAge, ProportionalAge)):
            raise DomainError(f"unrecognized constraint mode {self.mode!r}")


@dataclass(frozen=True)
class Schedule:
    """Decision vectors: N+1 inter-request intervals y and N processing times c.

    Construction only enforces shape (len(y) == len(c) + 1 >= 2) and converts
    both vectors to float tuples; constraint satisfaction is the business of
    check_feasibility, so infeasible candidate schedules can still be
    represented and scored.
    """

    y: tuple[float, ...]
    c: tuple[float, ...]

    def __init__(self, y: Sequence[float], c: Sequence[float]):
        y = tuple(float(v) for v in y)
        c = tuple(float(v) for v in c)
        if len(y) != len(c) + 1:
            raise ShapeError(f"need len(y) == len(c) + 1, got {len(y)} and {len(c)}")
        if len(c) < 1:
            raise ShapeError("at least one update is required (N >= 1)")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "c", c)

    @property
    def N(self) -> int:
        return len(self.c)


@dataclass(frozen=True)
class Violation:
    """One broken constraint: its 1-based name and how far it is broken."""

    constraint: str
    residual: float


@dataclass(frozen=True)
class FeasibilityReport:
    violations: tuple[Violation, ...]

    @property
    def feasible(self) -> bool:
        return not self.violations


def total_age(schedule: Schedule) -> float:
    """A_T = (1/2) * sum(y_i^2) + sum(c_i * y_i)."""
    y, c = schedule.y, schedule.c
    return 0.5 * sum(v * v for v in y) + sum(ci * yi for ci, yi in zip(c, y))


def average_age(schedule: Schedule, T: float) -> float:
    """Time-averaged age A_T / T."""
    if not (T > 0):
        raise DomainError(f"T must be positive, got {T}")
    return total_age(schedule) / T


def request_gaps(schedule: Schedule) -> list[float]:
    """Waiting gaps s_i = y_i - c_{i-1} (with c_0 = 0); length N+1."""
    y, c = schedule.y, schedule.c
    return [y[0]] + [y[i] - c[i - 1] for i in range(1, len(y))]


def check_feasibility(
    instance: ProblemInstance, schedule: Schedule, tol: float = 1e-9
) -> FeasibilityReport:
    """List every constraint the schedule breaks, with residuals.

    Checks, each allowed slack tol: the horizon sum (scaled by max(1, |T|)
    so large horizons are judged relatively), nonnegative waiting gaps, and
    the instance's mode constraint.  An empty report means feasible.
    """
    if not (tol >= 0):
        raise DomainError(f"tol must be nonnegative, got {tol}")
    if schedule.N != instance.N:
        raise ShapeError(f"schedule has N={schedule.N}, instance has N={instance.N}")
    y, c = schedule.y, schedule.c
    n = instance.N
    found: list[Violation] = []

    gap = abs(sum(y) - instance.T)
    if gap > tol * max(1.0, abs(instance.T)):
        found.append(Violation(f"sum(y) = {instance.T}", gap))
    for i, s in enumerate(request_gaps(schedule), start=1):
        if s < -tol:
            found.append(Violation(f"s_{i} >= 0", -s))
    mode = instance.mode
    if isinstance(mode, Constant):
        for i in range(n):
            if c[i] < mode.c_min - tol:
                found.append(Violation(f"c_{i+1} >= {mode.c_min:g}", mode.c_min - c[i]))
    elif isinstance(mode, InverseAge):
        for i in range(n):
            short = mode.alpha * y[i] - c[i]
            if short > tol:
                found.append(Violation(f"c_{i+1} >= {mode.alpha:g}*y_{i+1}", short))
    else:
        for i in range(n):
            if c[i] < -tol:
                found.append(Violation(f"c_{i+1} >= 0", -c[i]))
            short = (mode.c - mode.alpha * y[i]) - c[i]
            if short > tol:
                found.append(
                    Violation(f"c_{i+1} >= {mode.c:g} - {mode.alpha:g}*y_{i+1}", short)
                )
    return FeasibilityReport(tuple(found))
