"""Exact minimizers of total age for the three constraint modes.

Each solver classifies its instance into a regime, applies that regime's
closed-form schedule, and returns the schedule together with a RegimeReport
recording the branch, its validity condition, and signed distances to the
neighboring regime boundaries.

Branch maps:
    constant mode        A (interior), B (leading interval pinned)
    inverse-age mode     "alpha<=1" (uniform), "alpha>1" (geometric chain)
    proportional mode    S (back-to-back chain), M (interior),
                         C (processing saturated at zero, y capped at c/alpha),
                         D (unconstrained uniform split)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, Infeasible
from .model import Constant, InverseAge, ProportionalAge, ProblemInstance, Schedule

# Relative slack used when classifying an instance against a regime boundary.
# Both adjacent branch formulas agree at every boundary, so the slack only
# pins down which label a borderline instance reports.
_EDGE = 1e-12


@dataclass(frozen=True)
class RegimeReport:
    """Which closed-form branch produced a solution and why it applied."""

    mode: str
    branch: str
    condition: str
    boundary_distances: dict[str, float]


def _validate(T: float, N: int) -> None:
    if not (T > 0):
        raise DomainError(f"T must be positive, got {T}")
    if not (isinstance(N, int) and N >= 1):
        raise DomainError(f"N must be an integer >= 1, got {N!r}")


# ---------------------------------------------------------------------------
# constant mode: c_i >= c_min
# ---------------------------------------------------------------------------

def _constant_branch_a(T: float, N: int, c_min: float) -> list[float]:
    # every waiting gap interior: equal slots, last one longer by c_min
    head = (T - c_min) / (N + 1)
    return [head] * N + [(T + N * c_min) / (N + 1)]


def _constant_branch_b(T: float, N: int, c_min: float) -> list[float]:
    # middle requests fire back-to-back (s_i = 0); only y_1 and y_{N+1} move
    return [(T - N * c_min) / 2] + [c_min] * (N - 1) + [(T - (N - 2) * c_min) / 2]


def solve_constant(T: float, N: int, c_min: float) -> tuple[Schedule, RegimeReport]:
    """Minimize total age when every processing time must be at least c_min.

    All c_i sit at c_min (larger processing only inflates the objective).
    Branch A spreads requests evenly when the horizon is long; branch B pins
    the middle gaps to c_min when N*c_min <= T <= (N+2)*c_min.

    Raises Infeasible when T < N*c_min and DomainError on bad parameters.
    """
    _validate(T, N)
    if not (c_min >= 0):
        raise DomainError(f"c_min must be nonnegative, got {c_min}")
    lower, upper = N * c_min, (N + 2) * c_min
    if T < lower * (1 - _EDGE):
        raise Infeasible(f"T < N*c_min ({T} < {lower:g}): horizon too short")
    if T > upper * (1 + _EDGE):
        branch, y = "A", _constant_branch_a(T, N, c_min)
        condition = "T > (N+2)*c_min"
    else:
        branch, y = "B", _constant_branch_b(T, N, c_min)
        condition = "N*c_min <= T <= (N+2)*c_min"
    report = RegimeReport(
        mode="constant",
        branch=branch,
        condition=condition,
        boundary_distances={"T - N*c_min": T - lower, "T - (N+2)*c_min": T - upper},
    )
    return Schedule(y, [c_min] * N), report


# ---------------------------------------------------------------------------
# inverse-age mode: c_i >= alpha * y_i (tight at the optimum)
# ---------------------------------------------------------------------------

def _inverse_uniform(T: float, N: int, alpha: float) -> list[float]:
    base = T / (N + 2 * alpha + 1)
    return [base] * N + [(1 + 2 * alpha) * base]


def _inverse_geometric(T: float, N: int, alpha: float) -> list[float]:
    # y_i = alpha * y_{i-1} for i = 2..N; minimize the quadratic in eta = y_1
    s = q = 0.0
    power = 1.0
    for _ in range(N):
        s += power
        q += power * power
        power *= alpha
    eta = T * s / ((1 + 2 * alpha) * q + s * s)
    y = [eta]
    for _ in range(N - 1):
        y.append(alpha * y[-1])
    y.append(T - sum(y))
    return y


def geometric_first_interval(T: float, N: int, alpha: float) -> float:
    """Explicit rational form of the optimal first interval for alpha > 1.

    Algebraically equal to the quadratic-minimization route inside
    solve_inverse_age; kept as an independent cross-check, not used by it.
    Evaluated in exact rational arithmetic: numerator and denominator both
    vanish like (alpha - 1)^2, so a float evaluation loses the digits this
    function exists to provide near the regime boundary.
    """
    a = Fraction(alpha)
    num = Fraction(T) * (a ** (N + 2) - a**N - a**2 + 1)
    den = 2 * (a ** (2 * N + 2) - a ** (N + 1) - a**N - a**2 + a + 1)
    return float(num / den)


def solve_inverse_age(T: float, N: int, alpha: float) -> tuple[Schedule, RegimeReport]:
    """Minimize total age when processing must scale with age: c_i >= alpha*y_i.

    The constraint binds at the optimum, so c_i = alpha*y_i.  For alpha <= 1
    the first N intervals are equal; for alpha > 1 consecutive intervals grow
    geometrically, y_i = alpha*y_{i-1}.  Always feasible (the constraint set
    is scale-invariant in T).
    """
    _validate(T, N)
    if not (alpha > 0):
        raise DomainError(f"alpha must be positive, got {alpha}")
    if alpha <= 1 + _EDGE:
        branch, y = "alpha<=1", _inverse_uniform(T, N, alpha)
        condition = "alpha <= 1"
    else:
        branch, y = "alpha>1", _inverse_geometric(T, N, alpha)
        condition = "alpha > 1"
    report = RegimeReport(
        mode="inverse-age",
        branch=branch,
        condition=condition,
        boundary_distances={"alpha - 1": alpha - 1},
    )
    return Schedule(y, [alpha * v for v in y[:-1]]), report


# ---------------------------------------------------------------------------
# proportional mode: c_i >= max(0, c - alpha * y_i), 0 < alpha < 1/2
# ---------------------------------------------------------------------------

def _prop_bounds(N: int, c: float, alpha: float) -> tuple[float, float, float]:
    b1 = (N + 2 - alpha) / (1 + alpha) * c
    b2 = (N + 1 - alpha) / alpha * c
    b3 = (N + 1) / alpha * c
    return b1, b2, b3


def _prop_chain_min_horizon(N: int, c: float, alpha: float) -> float:
    # fully back-to-back schedule: y_1 = 0, y_i = c - alpha*y_{i-1},
    # y_{N+1} = c - alpha*y_N; the shortest horizon any schedule can fill
    z = 0.0
    total = 0.0
    for _ in range(N):
        z = c - alpha * z
        total += z
    return total


def _prop_branch_d(T: float, N: int, c: float, alpha: float) -> list[float]:
    return [T / (N + 1)] * (N + 1)


def _prop_branch_c(T: float, N: int, c: float, alpha: float) -> list[float]:
    cap = c / alpha
    return [cap] * N + [T - N * cap]


def _prop_branch_m(T: float, N: int, c: float, alpha: float) -> list[float]:
    denom = N + 1 - 2 * alpha
    head = (T - c) / denom
    return [head] * N + [((1 - 2 * alpha) * T + N * c) / denom]


def _prop_branch_s(T: float, N: int, c: float, alpha: float) -> list[float]:
    # Chain regime: s_i = 0 for i = 2..N, so y_i = c - alpha*y_{i-1} and every
    # interval is an affine function of eta = y_1.  Build those linear forms,
    # minimize the resulting convex quadratic, and project eta onto the
    # interval allowed by y_i >= 0 and the final gap s_{N+1} >= 0.
    p = [0.0] * (N + 1)
    q = [0.0] * (N + 1)
    q[0] = 1.0
    for i in range(1, N):
        p[i] = c - alpha * p[i - 1]
        q[i] = -alpha * q[i - 1]
    p[N] = T - sum(p[:N])
    q[N] = -sum(q[:N])

    # objective: sum over i<=N of (1/2 - alpha)*y_i^2 + c*y_i, plus y_{N+1}^2/2
    a2 = 0.5 * q[N] * q[N]
    a1 = p[N] * q[N]
    for i in range(N):
        a2 += (0.5 - alpha) * q[i] * q[i]
        a1 += 2 * (0.5 - alpha) * p[i] * q[i] + c * q[i]

    lo, hi = 0.0, math.inf
    forms = [(p[i], q[i]) for i in range(1, N + 1)]
    # final waiting gap: y_{N+1} - (c - alpha*y_N) >= 0
    forms.append((p[N] + alpha * p[N - 1] - c, q[N] + alpha * q[N - 1]))
    for pp, qq in forms:
        if qq > 0:
            lo = max(lo, -pp / qq)
        elif qq < 0:
            hi = min(hi, -pp / qq)
        elif pp < 0:
            lo, hi = math.inf, -math.inf
    if lo > hi + _EDGE * max(1.0, abs(lo), abs(hi)):
        need = _prop_chain_min_horizon(N, c, alpha)
        raise Infeasible(
            f"T < minimal feasible horizon ({T} < {need:.12g}); even the "
            "back-to-back chain schedule does not fit"
        )
    eta = min(max(-a1 / (2 * a2), lo), max(hi, lo))
    y = [p[i] + q[i] * eta for i in range(N)]
    y.append(T - sum(y))
    return y


def solve_proportional_age(
    T: float, N: int, c: float, alpha: float
) -> tuple[Schedule, RegimeReport]:
    """Minimize total age when required processing shrinks with age:
    c_i >= c - alpha*y_i (and c_i >= 0), with 0 < alpha < 1/2.

    The optimum takes c_i = max(0, c - alpha*y_i).  Regimes by horizon
    length, with B1 = (N+2-alpha)/(1+alpha)*c, B2 = (N+1-alpha)/alpha*c,
    B3 = (N+1)/alpha*c:

        T >= B3        D   uniform split, no processing needed
        B2 <= T < B3   C   first N intervals capped at c/alpha, c_i = 0
        B1 < T < B2    M   equal interior intervals, positive processing
        T <= B1        S   back-to-back chain driven by one free parameter

    Raises Infeasible when the horizon cannot fit even the tight chain.
    """
    _validate(T, N)
    if not (c > 0):
        raise DomainError(f"c must be positive, got {c}")
    if not (0 < alpha < 0.5):
        raise DomainError(f"alpha must lie in (0, 1/2), got {alpha}")
    b1, b2, b3 = _prop_bounds(N, c, alpha)
    if T >= b3 * (1 - _EDGE):
        branch, y = "D", _prop_branch_d(T, N, c, alpha)
        condition = "T >= (N+1)*c/alpha"
    elif T >= b2 * (1 - _EDGE):
        branch, y = "C", _prop_branch_c(T, N, c, alpha)
        condition = "(N+1-alpha)*c/alpha <= T < (N+1)*c/alpha"
    elif T > b1 * (1 + _EDGE):
        branch, y = "M", _prop_branch_m(T, N, c, alpha)
        condition = "(N+2-alpha)*c/(1+alpha) < T < (N+1-alpha)*c/alpha"
    else:
        branch, y = "S", _prop_branch_s(T, N, c, alpha)
        condition = "T <= (N+2-alpha)*c/(1+alpha)"
        cap = c / alpha
        for i, v in enumerate(y[:-1], start=1):
            # regime premise: chain intervals never exceed the zero-processing cap
            if v > cap * (1 + 1e-9):
                raise RuntimeError(
                    f"internal inconsistency: chain regime produced y_{i}={v} "
                    f"above c/alpha={cap}"
                )
    report = RegimeReport(
        mode="proportional",
        branch=branch,
        condition=condition,
        boundary_distances={"T - B1": T - b1, "T - B2": T - b2, "T - B3": T - b3},
    )
    cs = [max(0.0, c - alpha * v) for v in y[:-1]]
    return Schedule(y, cs), report


def solve(instance: ProblemInstance) -> tuple[Schedule, RegimeReport]:
    """Dispatch to the mode-specific solver of an instance."""
    mode = instance.mode
    if isinstance(mode, Constant):
        return solve_constant(instance.T, instance.N, mode.c_min)
    if isinstance(mode, InverseAge):
        return solve_inverse_age(instance.T, instance.N, mode.alpha)
    if isinstance(mode, ProportionalAge):
        return solve_proportional_age(instance.T, instance.N, mode.c, mode.alpha)
    raise DomainError(f"unrecognized constraint mode {mode!r}")
