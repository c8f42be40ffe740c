"""Descent oracle: agreement with the exact solvers, determinism, and the
backend parity guarantee."""

import os
import subprocess
import sys
import textwrap

import numpy as np
import pytest

from aoi_sched import (
    GAP_LOWER,
    GAP_UPPER,
    Constant,
    DomainError,
    Infeasible,
    InverseAge,
    NonConvergence,
    OracleConfig,
    ProblemInstance,
    ProportionalAge,
    check_feasibility,
    compare,
    oracle_solve,
    total_age,
)
from aoi_sched.oracle import random_instance

FAST = OracleConfig(restarts=6, seed=0)


def test_constant_golden_objective():
    inst = ProblemInstance(T=10.0, N=3, mode=Constant(c_min=1.0))
    _, obj = oracle_solve(inst, FAST)
    assert obj == pytest.approx(19.625, rel=1e-3)


def test_unconstrained_symmetric_optimum():
    inst = ProblemInstance(T=10.0, N=3, mode=Constant(c_min=0.0))
    sched, _ = oracle_solve(inst, FAST)
    assert list(sched.y) == pytest.approx([2.5, 2.5, 2.5, 2.5], abs=1e-5)


def test_inverse_age_matches_exact_solver():
    inst = ProblemInstance(T=10.0, N=3, mode=InverseAge(alpha=1.5))
    from aoi_sched import solve_inverse_age

    exact, _ = solve_inverse_age(10.0, 3, 1.5)
    _, obj = oracle_solve(inst, FAST)
    assert obj == pytest.approx(total_age(exact), rel=1e-3)


def test_compare_on_reference_instances():
    cases = [
        ProblemInstance(T=10.0, N=3, mode=Constant(c_min=2.5)),
        ProblemInstance(T=10.0, N=3, mode=InverseAge(alpha=0.5)),
        ProblemInstance(T=6.0, N=3, mode=ProportionalAge(c=1.0, alpha=0.4)),
    ]
    for inst in cases:
        gap = compare(inst, FAST)
        assert GAP_LOWER <= gap <= GAP_UPPER, (inst, gap)


def test_deterministic_given_config():
    inst = ProblemInstance(T=10.0, N=4, mode=ProportionalAge(c=1.1, alpha=0.35))
    cfg = OracleConfig(restarts=5, seed=123)
    a_sched, a_obj = oracle_solve(inst, cfg)
    b_sched, b_obj = oracle_solve(inst, cfg)
    assert a_sched.y == b_sched.y  # bit-identical, not merely close
    assert a_sched.c == b_sched.c
    assert a_obj == b_obj


def test_outputs_feasible_and_sum_preserved():
    rng = np.random.default_rng(15)
    for kind in ("constant", "inverse-age", "proportional"):
        for trial in range(12):
            inst = random_instance(kind, rng)
            sched, _ = oracle_solve(inst, OracleConfig(restarts=6, seed=trial))
            assert check_feasibility(inst, sched, tol=1e-7).feasible
            assert abs(sum(sched.y) - inst.T) <= 1e-12 * max(1.0, inst.T)


def test_random_gaps_within_band():
    rng = np.random.default_rng(99)
    for kind in ("constant", "inverse-age", "proportional"):
        for trial in range(25):
            inst = random_instance(kind, rng)
            gap = compare(inst, OracleConfig(restarts=6, seed=trial))
            assert GAP_LOWER <= gap <= GAP_UPPER, (inst, gap)


def test_infeasible_instances_rejected():
    with pytest.raises(Infeasible):
        oracle_solve(ProblemInstance(T=10.0, N=3, mode=Constant(c_min=4.0)), FAST)
    with pytest.raises(Infeasible):
        oracle_solve(
            ProblemInstance(T=2.0, N=3, mode=ProportionalAge(c=1.0, alpha=0.4)), FAST
        )


def test_nonconvergence_when_budget_too_small():
    inst = ProblemInstance(T=10.0, N=3, mode=Constant(c_min=1.0))
    with pytest.raises(NonConvergence):
        oracle_solve(inst, OracleConfig(restarts=3, max_iterations=1, seed=0))


def test_config_validation():
    with pytest.raises(DomainError):
        OracleConfig(restarts=0)
    with pytest.raises(DomainError):
        OracleConfig(max_iterations=0)
    with pytest.raises(DomainError):
        OracleConfig(line_search_tol=0.0)
    with pytest.raises(DomainError):
        OracleConfig(seed=-1)


def test_python_backend_is_bit_identical():
    # same instances, pure-Python kernels in a subprocess: identical floats
    script = textwrap.dedent(
        """
        from aoi_sched import (Constant, InverseAge, OracleConfig,
                               ProblemInstance, ProportionalAge, oracle_solve)
        import aoi_sched
        assert aoi_sched.BACKEND == "python"
        cases = [
            ProblemInstance(T=10.0, N=3, mode=Constant(c_min=1.0)),
            ProblemInstance(T=10.0, N=3, mode=InverseAge(alpha=1.5)),
            ProblemInstance(T=6.0, N=3, mode=ProportionalAge(c=1.0, alpha=0.4)),
        ]
        for inst in cases:
            sched, obj = oracle_solve(inst, OracleConfig(restarts=4, seed=7))
            print(repr((sched.y, sched.c, obj)))
        """
    )
    env = dict(os.environ, AOI_SCHED_BACKEND="python")
    out = subprocess.run(
        [sys.executable, "-c", script], env=env, capture_output=True, text=True
    )
    assert out.returncode == 0, out.stderr
    lines = out.stdout.strip().splitlines()

    cases = [
        ProblemInstance(T=10.0, N=3, mode=Constant(c_min=1.0)),
        ProblemInstance(T=10.0, N=3, mode=InverseAge(alpha=1.5)),
        ProblemInstance(T=6.0, N=3, mode=ProportionalAge(c=1.0, alpha=0.4)),
    ]
    for line, inst in zip(lines, cases, strict=True):
        sched, obj = oracle_solve(inst, OracleConfig(restarts=4, seed=7))
        assert line == repr((sched.y, sched.c, obj))
