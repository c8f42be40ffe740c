"""Distortion-versus-processing-time curves.

An update that is processed for longer comes out more faithful: distortion
decreases monotonically with processing time c on a bounded domain
[0, c_max].  Two curve families are supported,

    exponential      D(c) = a * (exp(-b*c) - d)
    inverse-linear   D(c) = a / (b*c + d)

and a budget beta on distortion can be inverted into the minimum processing
time that meets it.  All functions are pure; specs are immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError, InfeasibleDistortion


class DistortionKind(str, Enum):
    EXPONENTIAL = "exponential"
    INVERSE_LINEAR = "inverse-linear"


@dataclass(frozen=True)
class DistortionSpec:
    """A strictly decreasing distortion curve on [0, c_max].

    Attributes:
        kind: curve family.
        a: positive distortion scale.
        b: positive decay rate per unit of processing time.
        d: nonnegative offset; for exponential curves it must not exceed
            exp(-b*c_max) (the curve stays nonnegative on the domain), for
            inverse-linear curves it must be positive (finite value at 0).
        c_max: upper end of the meaningful processing-time domain.
    """

    kind: DistortionKind
    a: float
    b: float
    d: float
    c_max: float

    def __post_init__(self):
        if not (self.a > 0):
            raise DomainError(f"a must be positive, got {self.a}")
        if not (self.b > 0):
            raise DomainError(f"b must be positive, got {self.b}")
        if not (self.d >= 0):
            raise DomainError(f"d must be nonnegative, got {self.d}")
        if not (self.c_max > 0):
            raise DomainError(f"c_max must be positive, got {self.c_max}")
        if self.kind == DistortionKind.EXPONENTIAL:
            ceiling = math.exp(-self.b * self.c_max)
            if self.d > ceiling:
                raise DomainError(
                    f"exponential offset d={self.d} exceeds exp(-b*c_max)={ceiling}; "
                    "the curve would go negative inside the domain"
                )
        else:
            if not (self.d > 0):
                raise DomainError("inverse-linear curves need d > 0 to be finite at c=0")


def evaluate(spec: DistortionSpec, c: float) -> float:
    """Distortion attained after processing an update for time c.

    Raises DomainError if c is outside [0, spec.c_max].
    """
    if c < 0 or c > spec.c_max:
        raise DomainError(f"processing time {c} outside [0, {spec.c_max}]")
    if spec.kind == DistortionKind.EXPONENTIAL:
        return spec.a * (math.exp(-spec.b * c) - spec.d)
    return spec.a / (spec.b * c + spec.d)


def min_processing_for(spec: DistortionSpec, beta: float) -> float:
    """Smallest processing time c in [0, c_max] with evaluate(spec, c) <= beta.

    Uses the closed-form inverse of each curve family.  Returns exactly 0.0
    when the budget is already met with no processing at all.  beta equal to
    the curve's value at c_max (zero for curves that decay all the way) is
    allowed and yields c_max.

    Raises:
        DomainError: beta is negative.
        InfeasibleDistortion: beta is below the best distortion the curve
            can reach at c_max.
    """
    if beta < 0:
        raise DomainError(f"distortion budget must be nonnegative, got {beta}")
    floor = evaluate(spec, spec.c_max)
    if beta < floor:
        raise InfeasibleDistortion(
            f"budget {beta} below the minimum achievable distortion {floor}"
        )
    # exact zero, no log/division round trip, when no processing is needed
    if beta >= evaluate(spec, 0.0):
        return 0.0
    if spec.kind == DistortionKind.EXPONENTIAL:
        c = -math.log(beta / spec.a + spec.d) / spec.b
    else:
        c = (spec.a / beta - spec.d) / spec.b
    return min(max(c, 0.0), spec.c_max)


def sensor_fusion_spec(
    sigma_sq: float, mu_x: float, sigma_x_sq: float, m_sensors: int
) -> DistortionSpec:
    """Distortion curve of linear estimation from repeated noisy reads.

    A source X with mean mu_x and variance sigma_x_sq is observed through
    c independent unit-time sensor reads, each corrupted by zero-mean noise
    of variance sigma_sq.  The mean squared error of the best linear
    estimate decays inverse-linearly in c:

        D(c) = sigma_sq / (c + sigma_sq / (mu_x**2 + sigma_x_sq))

    m_sensors caps the number of reads, so it becomes c_max.
    """
    if not (sigma_sq > 0):
        raise DomainError(f"noise variance must be positive, got {sigma_sq}")
    if not (sigma_x_sq > 0):
        raise DomainError(f"source variance must be positive, got {sigma_x_sq}")
    if m_sensors < 1:
        raise DomainError(f"need at least one sensor, got {m_sensors}")
    second_moment = mu_x * mu_x + sigma_x_sq
    return DistortionSpec(
        kind=DistortionKind.INVERSE_LINEAR,
        a=sigma_sq,
        b=1.0,
        d=sigma_sq / second_moment,
        c_max=float(m_sensors),
    )


# Ready-made curves for the CLI sweep.  "unit" is normalized to D(0) = 1 and
# hits zero at c = 4; "steep" starts at D(0) = 8 and hits zero at c = 2.5.
PRESETS: dict[str, DistortionSpec] = {
    "unit": DistortionSpec(
        kind=DistortionKind.EXPONENTIAL,
        a=1.0 / (1.0 - math.exp(-1.0)),
        b=0.25,
        d=math.exp(-1.0),
        c_max=4.0,
    ),
    "steep": DistortionSpec(
        kind=DistortionKind.EXPONENTIAL,
        a=8.0 / (1.0 - math.exp(-3.0)),
        b=1.2,
        d=math.exp(-3.0),
        c_max=2.5,
    ),
}
