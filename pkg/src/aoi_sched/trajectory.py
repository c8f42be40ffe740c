"""Sawtooth age curve implied by a schedule, and its exact integral.

The receiver's age grows with slope 1 and drops to c_i the instant update i
is received.  The curve is stored as an ordered breakpoint list; request
instants appear as non-drop annotations (age_before == age_after), receipt
instants as drops (age_after = c_i < age_before).  Integrating the curve
reproduces the total-age objective, which gives an independent check of the
algebraic formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, InfeasibleSchedule
from .model import Schedule, request_gaps


@dataclass(frozen=True)
class Breakpoint:
    t: float
    age_before: float
    age_after: float


@dataclass(frozen=True)
class AgeTrajectory:
    """Piecewise-linear age curve: slope 1 between breakpoints."""

    breakpoints: tuple[Breakpoint, ...]
    horizon: float


class _Builder:
    # accumulates breakpoints, merging events that share a timestamp so the
    # breakpoint list stays strictly increasing in t
    def __init__(self):
        self.points: list[Breakpoint] = [Breakpoint(0.0, 0.0, 0.0)]

    def add(self, t: float, before: float, after: float) -> None:
        last = self.points[-1]
        if t == last.t:
            self.points[-1] = Breakpoint(t, last.age_before, after)
        else:
            self.points.append(Breakpoint(t, before, after))


def build(schedule: Schedule, tol: float = 1e-9) -> AgeTrajectory:
    """Reconstruct the age curve of a schedule.

    Gap residuals beyond -tol (scaled by the horizon) raise
    InfeasibleSchedule; smaller negative rounding dust is clamped to zero so
    exactly back-to-back schedules from the solvers build cleanly.
    """
    gaps = request_gaps(schedule)
    horizon = sum(schedule.y)
    floor = -tol * max(1.0, abs(horizon))
    for i, s in enumerate(gaps, start=1):
        if s < floor:
            raise InfeasibleSchedule(f"negative waiting gap s_{i} = {s}")
    for i, ci in enumerate(schedule.c, start=1):
        if ci < floor:
            raise InfeasibleSchedule(f"negative processing time c_{i} = {ci}")
    gaps = [max(0.0, s) for s in gaps]
    cs = [max(0.0, ci) for ci in schedule.c]

    out = _Builder()
    t = 0.0
    age = 0.0
    for i in range(schedule.N):
        t += gaps[i]
        age += gaps[i]
        out.add(t, age, age)  # request i+1: annotation only, no age change
        t += cs[i]
        age += cs[i]
        out.add(t, age, cs[i])  # receipt i+1: drop to the update's own age
        age = cs[i]
    t += gaps[-1]
    age += gaps[-1]
    out.add(t, age, age)
    return AgeTrajectory(tuple(out.points), horizon=t)


def integrate(traj: AgeTrajectory) -> float:
    """Area under the curve; exact for slope-1 segments (trapezoid rule)."""
    bps = traj.breakpoints
    total = 0.0
    for a, b in zip(bps, bps[1:]):
        total += 0.5 * (a.age_after + b.age_before) * (b.t - a.t)
    return total


def sample(traj: AgeTrajectory, step: float) -> list[tuple[float, float]]:
    """Dense (t, age) rows: every breakpoint plus a grid of spacing step.

    Drop instants contribute two rows with equal t (age before, then after).
    """
    if not (step > 0):
        raise DomainError(f"step must be positive, got {step}")
    bps = traj.breakpoints
    rows: list[tuple[float, float]] = [(bps[0].t, bps[0].age_after)]
    for a, b in zip(bps, bps[1:]):
        k = math.floor(a.t / step) + 1
        t = k * step
        while t < b.t:
            rows.append((t, a.age_after + (t - a.t)))
            k += 1
            t = k * step
        rows.append((b.t, b.age_before))
        if b.age_after != b.age_before:
            rows.append((b.t, b.age_after))
    return rows
