"""Distortion curves: closed-form inversion checked against a bisection
oracle, and the sensor-fusion curve checked against a direct best-linear-
estimator computation."""

import math

import numpy as np
import pytest

from aoi_sched import (
    PRESETS,
    DistortionKind,
    DistortionSpec,
    DomainError,
    InfeasibleDistortion,
    evaluate,
    min_processing_for,
    sensor_fusion_spec,
)

UNIT = PRESETS["unit"]
STEEP = PRESETS["steep"]


def invert_by_bisection(spec, beta, iters=200):
    """Independent inversion oracle: smallest c in [0, c_max] with D(c) <= beta."""
    if evaluate(spec, 0.0) <= beta:
        return 0.0
    lo, hi = 0.0, spec.c_max
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if evaluate(spec, mid) <= beta:
            hi = mid
        else:
            lo = mid
    return hi


def best_linear_mse(sigma_sq, mu_x, sigma_x_sq, reads):
    """MSE of the best linear estimate w'Y of X from `reads` noisy copies.

    Y_k = X + Z_k with E[X^2] = mu_x^2 + sigma_x_sq and var(Z_k) = sigma_sq:
    solve the normal equations G w = g with G = E[Y Y'], g = E[X Y].
    """
    r = mu_x * mu_x + sigma_x_sq
    G = np.full((reads, reads), r) + sigma_sq * np.eye(reads)
    g = np.full(reads, r)
    w = np.linalg.solve(G, g)
    return r - g @ w


def random_spec(rng):
    if rng.random() < 0.5:
        b = rng.uniform(0.1, 2.0)
        c_max = rng.uniform(0.5, 5.0)
        d = math.exp(-b * c_max) * rng.uniform(0.0, 1.0)
        return DistortionSpec(DistortionKind.EXPONENTIAL, rng.uniform(0.2, 5.0), b, d, c_max)
    return DistortionSpec(
        DistortionKind.INVERSE_LINEAR,
        rng.uniform(0.2, 5.0),
        rng.uniform(0.1, 2.0),
        rng.uniform(0.05, 2.0),
        rng.uniform(0.5, 5.0),
    )


def test_exponential_endpoints():
    assert evaluate(UNIT, 0.0) == pytest.approx(1.0, rel=1e-12)
    assert evaluate(UNIT, 4.0) == pytest.approx(0.0, abs=1e-15)


def test_inverse_linear_at_zero():
    spec = DistortionSpec(DistortionKind.INVERSE_LINEAR, 1.0, 1.0, 1.0, 10.0)
    assert evaluate(spec, 0.0) == pytest.approx(1.0, rel=1e-12)


def test_budget_at_maximum_needs_no_processing():
    assert min_processing_for(UNIT, 1.0) == 0.0
    assert min_processing_for(UNIT, 7.3) == 0.0


def test_round_trip_at_known_point():
    c = min_processing_for(UNIT, evaluate(UNIT, 2.5))
    assert c == pytest.approx(2.5, abs=1e-9)
    assert c == pytest.approx(invert_by_bisection(UNIT, evaluate(UNIT, 2.5)), abs=1e-9)


def test_inverse_linear_golden_inversion():
    spec = DistortionSpec(DistortionKind.INVERSE_LINEAR, 1.0, 1.0, 1.0, 10.0)
    assert min_processing_for(spec, 0.25) == pytest.approx(3.0, abs=1e-9)
    assert invert_by_bisection(spec, 0.25) == pytest.approx(3.0, abs=1e-9)


def test_budget_of_zero_lands_on_cmax_for_fully_decaying_curves():
    # both presets decay to exactly zero at c_max, so a zero budget is met
    assert min_processing_for(STEEP, 0.0) == pytest.approx(2.5, abs=1e-12)
    assert min_processing_for(UNIT, 0.0) == pytest.approx(4.0, abs=1e-12)


def test_infeasible_budget():
    spec = DistortionSpec(DistortionKind.EXPONENTIAL, 1.0, 1.0, 0.01, 3.0)
    floor = evaluate(spec, spec.c_max)
    assert floor > 0
    with pytest.raises(InfeasibleDistortion):
        min_processing_for(spec, floor * 0.5)
    linear = DistortionSpec(DistortionKind.INVERSE_LINEAR, 1.0, 1.0, 1.0, 10.0)
    with pytest.raises(InfeasibleDistortion):
        min_processing_for(linear, 0.05)


def test_negative_budget_rejected():
    with pytest.raises(DomainError):
        min_processing_for(UNIT, -0.1)


def test_spec_validation():
    E, L = DistortionKind.EXPONENTIAL, DistortionKind.INVERSE_LINEAR
    with pytest.raises(DomainError):
        DistortionSpec(E, 0.0, 1.0, 0.1, 1.0)
    with pytest.raises(DomainError):
        DistortionSpec(E, 1.0, -1.0, 0.1, 1.0)
    with pytest.raises(DomainError):
        DistortionSpec(E, 1.0, 1.0, -0.1, 1.0)
    with pytest.raises(DomainError):
        DistortionSpec(E, 1.0, 1.0, 0.1, 0.0)
    with pytest.raises(DomainError):
        # offset so large the curve goes negative before c_max
        DistortionSpec(E, 1.0, 1.0, 2 * math.exp(-3.0), 3.0)
    with pytest.raises(DomainError):
        DistortionSpec(L, 1.0, 1.0, 0.0, 1.0)


def test_evaluate_domain_errors():
    with pytest.raises(DomainError):
        evaluate(UNIT, -0.01)
    with pytest.raises(DomainError):
        evaluate(UNIT, UNIT.c_max + 0.01)


def test_strict_monotonicity_random():
    rng = np.random.default_rng(7)
    for _ in range(200):
        spec = random_spec(rng)
        c1, c2 = sorted(rng.uniform(0.0, spec.c_max, size=2))
        if c1 == c2:
            continue
        assert evaluate(spec, c1) > evaluate(spec, c2)


def test_round_trip_random():
    rng = np.random.default_rng(11)
    for _ in range(200):
        spec = random_spec(rng)
        c = rng.uniform(0.0, spec.c_max)
        back = min_processing_for(spec, evaluate(spec, c))
        assert back == pytest.approx(c, abs=1e-9)
        assert back == pytest.approx(invert_by_bisection(spec, evaluate(spec, c)), abs=1e-7)


def test_sensor_fusion_fields():
    spec = sensor_fusion_spec(1.0, 0.0, 1.0, 10)
    assert spec.kind is DistortionKind.INVERSE_LINEAR
    assert (spec.a, spec.b, spec.d, spec.c_max) == (1.0, 1.0, 1.0, 10.0)
    assert sensor_fusion_spec(2.0, 1.0, 1.0, 5).d == pytest.approx(1.0, rel=1e-15)


def test_sensor_fusion_single_read_golden():
    assert evaluate(sensor_fusion_spec(1.0, 0.0, 1.0, 10), 1.0) == pytest.approx(0.5, rel=1e-12)
    assert best_linear_mse(1.0, 0.0, 1.0, 1) == pytest.approx(0.5, rel=1e-12)


def test_sensor_fusion_matches_linear_estimator():
    for sigma_sq, mu_x, sigma_x_sq in [(1.0, 0.0, 1.0), (2.0, 1.0, 1.0), (0.5, -2.0, 3.0)]:
        spec = sensor_fusion_spec(sigma_sq, mu_x, sigma_x_sq, 5)
        for reads in (1, 2, 3):
            mse = best_linear_mse(sigma_sq, mu_x, sigma_x_sq, reads)
            assert evaluate(spec, float(reads)) == pytest.approx(mse, rel=1e-12)


def test_sensor_fusion_validation():
    with pytest.raises(DomainError):
        sensor_fusion_spec(0.0, 0.0, 1.0, 5)
    with pytest.raises(DomainError):
        sensor_fusion_spec(1.0, 0.0, 0.0, 5)
    with pytest.raises(DomainError):
        sensor_fusion_spec(1.0, 0.0, 1.0, 0)
