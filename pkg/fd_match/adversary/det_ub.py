# Copyright 2024, NVIDIA CORPORATION & AFFILIATES. All rights reserved.
#
# Redistribution and use in source and binary forms, with or without
# modification, are permitted provided that the following conditions
# are met:
#  * Redistributions of source code must retain the above copyright
#    notice, this list of conditions and the following disclaimer.
#  * Redistributions in binary form must reproduce the above copyright
#    notice, this list of conditions and the following disclaimer in the
#    documentation and/or other materials provided with the distribution.
#  * Neither the name of NVIDIA CORPORATION nor the names of its
#    contributors may be used to endorse or promote products derived
#    from this software without specific prior written permission.
#
# THIS SOFTWARE IS PROVIDED BY THE COPYRIGHT HOLDERS ``AS IS'' AND ANY
# EXPRESS OR IMPLIED WARRANTIES, INCLUDING, BUT NOT LIMITED TO, THE
# IMPLIED WARRANTIES OF MERCHANTABILITY AND FITNESS FOR A PARTICULAR
# PURPOSE ARE DISCLAIMED.  IN NO EVENT SHALL THE COPYRIGHT OWNER OR
# CONTRIBUTORS BE LIABLE FOR ANY DIRECT, INDIRECT, INCIDENTAL, SPECIAL,
# EXEMPLARY, OR CONSEQUENTIAL DAMAGES (INCLUDING, BUT NOT LIMITED TO,
# PROCUREMENT OF SUBSTITUTE GOODS OR SERVICES; LOSS OF USE, DATA, OR
# PROFITS; OR BUSINESS INTERRUPTION) HOWEVER CAUSED AND ON ANY THEORY
# OF LIABILITY, WHETHER IN CONTRACT, STRICT LIABILITY, OR TORT
# (INCLUDING NEGLIGENCE OR OTHERWISE) ARISING IN ANY WAY OUT OF THE USE
# OF THIS SOFTWARE, EVEN IF ADVISED OF THE POSSIBILITY OF SUCH DAMAGE.

"""
Hard instance for deterministic algorithms: one fast machine of speed r,
n machines of speed 1, and jobs w_0 < w_1 < ... < w_n. Whichever machine a
deterministic algorithm picks for w_k, some prefix ends with its ratio at
most a.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from fd_match.constants import (
    DET_UB_MAX_DELTA,
    LOGGER_NAME,
    MAX_RECURRENCE_STEPS,
    REL_TOL,
)
from fd_match.core import Instance, validate_instance
from fd_match.exceptions import DomainError, NonTermination, NumericOverflow

logger = logging.getLogger(LOGGER_NAME)

_SQRT5 = math.sqrt(5)
_GOLDEN = (1 + _SQRT5) / 2


def det_ub_params(delta: float) -> Tuple[float, float]:
    """
    (a, r) for which the recurrence

        (a r - 1) w_k - (a + 1)(r - 1) w_{k-1} + r w_{k-2} = 0

    has characteristic roots (1 + sqrt 5)/2 +- i sqrt(delta).
    """
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}")
    if delta > DET_UB_MAX_DELTA:
        logger.warning(
            f"delta = {delta} exceeds {DET_UB_MAX_DELTA}; the recurrence may not stop"
        )
    numerator = 1 + math.sqrt(5 + 12 * delta + 4 * delta**2)
    a = numerator / (3 + _SQRT5 + 2 * delta)
    r = numerator / (3 - _SQRT5 + 2 * delta)
    return a, r


@dataclass(frozen=True)
class RecurrenceParams:
    delta: float
    a: float
    r: float
    w: Tuple[float, ...]

    @property
    def n(self) -> int:
        """Index of the last job, also the number of slow machines."""
        return len(self.w) - 1

    @property
    def discriminant(self) -> float:
        a, r = self.a, self.r
        return ((a + 1) * (r - 1)) ** 2 - 4 * r * (a * r - 1)

    @property
    def instance(self) -> Instance:
        return validate_instance([self.r] + [1.0] * self.n, self.w)

    def to_dict(self) -> dict:
        return {"a": self.a, "r": self.r, "delta": self.delta, "w": list(self.w)}


def det_ub_sequence(delta: float) -> RecurrenceParams:
    """
    Iterates the recurrence from w_0 = 1, w_1 = (r - a)/(a r - 1) and stops
    at the first n with w_n / w_{n-1} <= r / (r - 1).
    """
    a, r = det_ub_params(delta)
    if a * r <= 1:
        raise DomainError(f"a * r = {a * r} must exceed 1 for delta = {delta}")

    stop_ratio = r / (r - 1)
    lead = a * r - 1
    w: List[float] = [1.0, (r - a) / lead]
    while w[-1] / w[-2] > stop_ratio:
        if len(w) > MAX_RECURRENCE_STEPS:
            raise NonTermination(
                f"no stopping index within {MAX_RECURRENCE_STEPS} steps "
                f"for delta = {delta}"
            )
        nxt = ((a + 1) * (r - 1) * w[-1] - r * w[-2]) / lead
        if not math.isfinite(nxt):
            raise NumericOverflow(
                f"recurrence overflowed at step {len(w)} for delta = {delta}"
            )
        w.append(nxt)

    params = RecurrenceParams(delta, a, r, tuple(w))
    logger.debug(
        f"det-ub delta={delta}: a={a}, r={r}, n={params.n}, w_n={w[-1]:.6g}"
    )
    return params


def det_ub_closed_form(delta: float, k: int) -> float:
    """w_k from the characteristic roots, for cross-checking the iteration."""
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}")
    root = complex(_GOLDEN, math.sqrt(delta))
    coefficient = complex(0.5, -(_SQRT5 - 1) / (4 * math.sqrt(delta)))
    return 2 * (coefficient * root**k).real


@dataclass(frozen=True)
class ConditionCheck:
    name: str
    k: int
    lhs: float
    rhs: float

    @property
    def relative_violation(self) -> float:
        return (self.rhs - self.lhs) / max(1.0, abs(self.rhs))


@dataclass(frozen=True)
class DetUbReport:
    checks: Tuple[ConditionCheck, ...]
    tol: float = REL_TOL
    failures: Tuple[ConditionCheck, ...] = field(init=False)

    def __post_init__(self):
        failures = tuple(
            check for check in self.checks if check.relative_violation > self.tol
        )
        object.__setattr__(self, "failures", failures)

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def first_violation(self) -> Optional[ConditionCheck]:
        return self.failures[0] if self.failures else None


def check_det_ub_conditions(
    a: float, r: float, w: Sequence[float], tol: float = REL_TOL
) -> DetUbReport:
    """
    a r >= 1
    a (r w_k + sum_{j<k} w_j) >= r w_{k-1} + w_k  for k = 1..n
    a (r w_n + sum_{j<n} w_j) >= r w_n

    Each side is compared relative to its magnitude.
    """
    checks = [ConditionCheck("first", 0, a * r, 1.0)]
    n = len(w) - 1
    for k in range(1, n + 1):
        prefix_sum = math.fsum(w[:k])
        checks.append(
            ConditionCheck(
                "mid", k, a * (r * w[k] + prefix_sum), r * w[k - 1] + w[k]
            )
        )
    if n >= 0:
        tail = math.fsum(w[:n])
        checks.append(ConditionCheck("last", n, a * (r * w[n] + tail), r * w[n]))
    return DetUbReport(tuple(checks), tol)
