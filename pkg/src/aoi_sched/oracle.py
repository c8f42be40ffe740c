"""Independent numerical minimizer used to cross-check the exact solvers.

The oracle never looks at the closed-form branch logic: it minimizes the
reduced objective directly over the feasible polytope by multi-start
transfer descent (see _kernels for the method), then recovers processing
times by the tight rule of the active mode.  Agreement between the two
routes is the package's main correctness evidence.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import _kernels, closed_form
from .errors import DomainError, Infeasible, NonConvergence
from .model import (
    Constant,
    InverseAge,
    ProblemInstance,
    ProportionalAge,
    Schedule,
    total_age,
)

logger = logging.getLogger(__name__)

# agreement band for (oracle - closed_form) / closed_form, see compare()
GAP_LOWER = -1e-6
GAP_UPPER = 1e-3


@dataclass(frozen=True)
class OracleConfig:
    """Reproducible search budget: same config + instance, same output."""

    restarts: int = 50
    max_iterations: int = 20000
    line_search_tol: float = 1e-10
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise DomainError(f"restarts must be >= 1, got {self.restarts}")
        if self.max_iterations < 1:
            raise DomainError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if not (self.line_search_tol > 0):
            raise DomainError(f"line_search_tol must be > 0, got {self.line_search_tol}")
        if self.seed < 0:
            raise DomainError(f"seed must be nonnegative, got {self.seed}")


def _mode_code(instance: ProblemInstance) -> tuple[int, float, float]:
    mode = instance.mode
    if isinstance(mode, Constant):
        return _kernels.MODE_CONSTANT, mode.c_min, 0.0
    if isinstance(mode, InverseAge):
        return _kernels.MODE_INVERSE_AGE, 0.0, mode.alpha
    if isinstance(mode, ProportionalAge):
        return _kernels.MODE_PROPORTIONAL, mode.c, mode.alpha
    raise DomainError(f"unrecognized constraint mode {mode!r}")


def _screen_feasibility(instance: ProblemInstance) -> None:
    # the shortest horizon any schedule can fill is the tight-chain sum
    mode = instance.mode
    if isinstance(mode, Constant):
        need = instance.N * mode.c_min
        if instance.T < need * (1 - 1e-12):
            raise Infeasible(f"T < N*c_min ({instance.T} < {need:g})")
    elif isinstance(mode, ProportionalAge):
        need = closed_form._prop_chain_min_horizon(instance.N, mode.c, mode.alpha)
        if instance.T < need * (1 - 1e-12):
            raise Infeasible(
                f"T < minimal feasible horizon ({instance.T} < {need:.12g})"
            )


def oracle_solve(
    instance: ProblemInstance, config: OracleConfig | None = None
) -> tuple[Schedule, float]:
    """Minimize total age numerically; return (schedule, objective).

    Deterministic in (instance, config).  Raises Infeasible when no
    schedule fits the horizon and NonConvergence when every restart
    exhausts its move budget before the stopping rule; restarts that
    individually fail to converge are logged but do not fail the solve
    as long as at least one restart finishes.
    """
    if config is None:
        config = OracleConfig()
    _screen_feasibility(instance)
    code, cpar, alpha = _mode_code(instance)
    n = instance.N + 1

    rng = np.random.default_rng(config.seed)
    draws = 1.0 - rng.random((config.restarts, n))  # uniform on (0, 1]
    starts = draws * (instance.T / draws.sum(axis=1, keepdims=True))

    y, _, converged = _kernels.solve_from_starts(
        starts,
        instance.T,
        code,
        cpar,
        alpha,
        config.line_search_tol,
        config.max_iterations,
    )
    if converged == 0:
        raise NonConvergence(
            f"no restart converged within {config.max_iterations} moves"
        )
    if converged < config.restarts:
        logger.warning(
            "%d of %d restarts hit the move budget before converging",
            config.restarts - converged,
            config.restarts,
        )

    mode = instance.mode
    if isinstance(mode, Constant):
        c = [mode.c_min] * instance.N
    elif isinstance(mode, InverseAge):
        c = [mode.alpha * v for v in y[:-1]]
    else:
        c = [max(0.0, mode.c - mode.alpha * v) for v in y[:-1]]
    schedule = Schedule(y.tolist(), c)
    return schedule, total_age(schedule)


def compare(instance: ProblemInstance, config: OracleConfig | None = None) -> float:
    """Relative excess of the oracle objective over the exact solver's.

    At a true optimum this sits in [GAP_LOWER, GAP_UPPER]: the oracle can
    only exceed the exact minimum by its own convergence slack, and can
    only undercut it by floating rounding.
    """
    sched_cf, _ = closed_form.solve(instance)
    obj_cf = total_age(sched_cf)
    _, obj_oracle = oracle_solve(instance, config)
    return (obj_oracle - obj_cf) / obj_cf


def random_instance(kind: str, rng: np.random.Generator) -> ProblemInstance:
    """Draw one feasible verification instance of the given mode kind.

    Documented sampling ranges (shared by the CLI verify command and the
    test suite): N uniform on {1..6}, T uniform on [1, 20]; constant mode
    draws c_min on [0, T/N]; inverse-age draws alpha on (0, 3]; proportional
    draws alpha on (0.01, 0.499) and c just under the largest value keeping
    the tight chain inside the horizon.
    """
    N = int(rng.integers(1, 7))
    T = float(rng.uniform(1.0, 20.0))
    if kind == "constant":
        return ProblemInstance(T=T, N=N, mode=Constant(c_min=float(rng.uniform(0.0, T / N))))
    if kind == "inverse-age":
        return ProblemInstance(T=T, N=N, mode=InverseAge(alpha=float(3.0 * (1.0 - rng.random()))))
    if kind == "proportional":
        alpha = float(rng.uniform(0.01, 0.499))
        per_unit = closed_form._prop_chain_min_horizon(N, 1.0, alpha)
        c = float(rng.uniform(0.0, T / per_unit)) * 0.999 + 1e-6
        return ProblemInstance(T=T, N=N, mode=ProportionalAge(c=c, alpha=alpha))
    raise DomainError(f"unrecognized mode kind {kind!r}")
