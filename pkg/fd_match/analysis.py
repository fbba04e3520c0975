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

import bisect
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from fd_match.constants import (
    ABS_TOL,
    DEFAULT_T_GRID,
    DEFAULT_U0_GRID,
    E,
    LAMBERT_MAX_ITERATIONS,
    LAMBERT_TOL,
    LOGGER_NAME,
    MIN_C,
)
from fd_match.core import Instance, sorted_opt, validate_instance
from fd_match.exceptions import (
    DomainError,
    NoMaximumInRange,
    NonTermination,
    ValidationError,
)
from fd_match.online import IntervalParams, run_interval

logger = logging.getLogger(LOGGER_NAME)

_INV_E = math.exp(-1.0)
_GOLDEN_RATIO = (1 + math.sqrt(5)) / 2
_MAX_BISECTIONS = 200


### Competitive bound ###


def lambert_w0(x: float) -> float:
    """
    Principal branch of the Lambert W function, the solution y >= -1 of
    y * exp(y) = x, by Halley iteration.
    """
    if x < -_INV_E:
        raise DomainError(f"lambert_w0 is undefined for x < -1/e, got {x}")
    if x == 0:
        return 0.0
    if x == -_INV_E:
        return -1.0

    if x >= -0.25:
        w = math.log1p(x)
    else:
        # series around the branch point
        w = math.sqrt(max(0.0, 2.0 * (math.e * x + 1.0))) - 1.0
        if w <= -1.0:
            return -1.0

    for _ in range(LAMBERT_MAX_ITERATIONS):
        ew = math.exp(w)
        f = w * ew - x
        w1 = w + 1.0
        dw = f / (ew * w1 - (w + 2.0) * f / (2.0 * w1))
        w -= dw
        if abs(dw) <= 1e-15 * (1.0 + abs(w)):
            break

    residual = w * math.exp(w) - x
    if abs(residual) > LAMBERT_TOL * max(1.0, abs(x)):
        raise NonTermination(
            f"lambert_w0({x}) did not converge, residual {residual:.3g}"
        )
    return w


def beta_of_c(c: float) -> float:
    return c * math.log(c) / (c - 1) - 1


def h_of_c(c: float) -> float:
    if c <= MIN_C:
        raise DomainError(f"h(c) needs c > 1, got {c}")
    beta = beta_of_c(c)
    return 1 - lambert_w0(beta * math.exp(beta) / c) / beta


def first_branch(c: float) -> float:
    """(c - 1) / (c ln c)."""
    if c <= MIN_C:
        raise DomainError(f"the bound needs c > 1, got {c}")
    return (c - 1) / (c * math.log(c))


@dataclass(frozen=True)
class BoundBranches:
    c: float
    first_branch: float
    h: float

    @property
    def bound(self) -> float:
        return min(self.first_branch, self.h)

    @property
    def active_branch(self) -> str:
        return "first" if self.first_branch <= self.h else "h"

    def to_dict(self) -> dict:
        return {
            "c": self.c,
            "first_branch": self.first_branch,
            "h": self.h,
            "bound": self.bound,
            "active_branch": self.active_branch,
        }


def bound_branches(c: float, allow_below_e: bool = False) -> BoundBranches:
    if c < E:
        if not allow_below_e:
            raise DomainError(f"the competitive bound holds for c >= e, got c = {c}")
        logger.warning(f"Evaluating the bound at c = {c} < e; it is not a guarantee")
    return BoundBranches(c, first_branch(c), h_of_c(c))


def bound_of_c(c: float, allow_below_e: bool = False) -> float:
    return bound_branches(c, allow_below_e).bound


def _golden_section_max(
    f: Callable[[float], float], lo: float, hi: float, tol: float
) -> Tuple[float, float]:
    """Bracket of width <= tol around the maximum of a unimodal f."""
    c = hi - (hi - lo) / _GOLDEN_RATIO
    d = lo + (hi - lo) / _GOLDEN_RATIO
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - (hi - lo) / _GOLDEN_RATIO
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + (hi - lo) / _GOLDEN_RATIO
            fd = f(d)
    return lo, hi


def _branch_gap(c: float) -> float:
    return first_branch(c) - h_of_c(c)


def find_cstar(lo: float, hi: float, tol: float) -> Tuple[float, float]:
    """
    The c in [lo, hi] maximizing the bound. The first branch decreases and
    h increases, so the maximum sits where they cross.
    """
    if not (lo >= E and lo < hi):
        raise DomainError(f"find_cstar needs e <= lo < hi, got [{lo}, {hi}]")
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    if _branch_gap(lo) <= 0 or _branch_gap(hi) >= 0:
        raise NoMaximumInRange(
            f"the bound is monotone on [{lo}, {hi}]; no interior maximum"
        )

    a, b = _golden_section_max(bound_of_c, lo, hi, tol)
    logger.debug(f"Golden-section bracket for c*: [{a}, {b}]")
    if not (_branch_gap(a) > 0 > _branch_gap(b)):
        a, b = lo, hi

    for _ in range(_MAX_BISECTIONS):
        mid = (a + b) / 2
        if mid <= a or mid >= b:
            break
        if _branch_gap(mid) > 0:
            a = mid
        else:
            b = mid

    cstar = (a + b) / 2
    return cstar, bound_of_c(cstar)


### Structure of a run ###


@dataclass(frozen=True)
class SpeedProfile:
    """Step function y -> speed of the OPT machine holding the largest job <= y.

    ``sizes`` ascends; ``speeds[i]`` applies on [sizes[i], sizes[i + 1]).
    """

    sizes: Tuple[float, ...]
    speeds: Tuple[float, ...]

    def __call__(self, y: float) -> float:
        i = bisect.bisect_right(self.sizes, y)
        return self.speeds[i - 1] if i > 0 else 0.0


def speed_profile(instance: Instance) -> SpeedProfile:
    _, pairing = sorted_opt(instance)
    speed_of_size = {w: 0.0 for w in instance.jobs}
    for machine, job in pairing:
        size = instance.jobs[job]
        # among equal sizes the profile takes the fastest holder
        speed_of_size[size] = max(speed_of_size[size], instance.speeds[machine])
    sizes = tuple(sorted(speed_of_size))
    return SpeedProfile(sizes, tuple(speed_of_size[w] for w in sizes))


@dataclass(frozen=True)
class DeltaBreakdown:
    w: float
    w_ks: Tuple[float, ...]
    delta: float


def delta_first_machine(
    instance: Instance, fastest_machine_jobs: Sequence[float]
) -> DeltaBreakdown:
    """
    Upper bound on OPT(instance) - OPT(instance without its fastest machine
    and the jobs that machine accepted):

        s1 * W - s(w) * (W - w) + sum_k w_k * s(w_k)

    where W is the largest job, w the largest accepted job and w_k the
    other accepted jobs.
    """
    if not instance.ordering:
        return DeltaBreakdown(0.0, (), 0.0)

    s1 = instance.speeds[instance.ordering[0]]
    w_max = instance.max_job
    accepted = sorted(fastest_machine_jobs, reverse=True)
    if not accepted:
        return DeltaBreakdown(0.0, (), s1 * w_max)

    profile = speed_profile(instance)
    w, w_ks = accepted[0], tuple(accepted[1:])
    delta = math.fsum(
        [s1 * w_max, -profile(w) * (w_max - w)] + [wk * profile(wk) for wk in w_ks]
    )
    return DeltaBreakdown(w, w_ks, delta)


def normalize_jobs(jobs: Sequence[float], c: float) -> Tuple[float, ...]:
    """Scale so that the largest job equals c exactly."""
    if not jobs:
        return ()
    w_max = max(jobs)
    return tuple((w / w_max) * c for w in jobs)


@dataclass(frozen=True)
class LocalMaxima:
    """Jobs larger than every job before them, in arrival order."""

    maxima: Tuple[float, ...]
    c: float

    def m_s(self, y: float) -> float:
        """Smallest local maximum in (y, c * y], or 0."""
        i = bisect.bisect_right(self.maxima, y)
        if i < len(self.maxima) and self.maxima[i] <= self.c * y:
            return self.maxima[i]
        return 0.0

    @property
    def u0(self) -> float:
        return self.m_s(1.0)


def local_maxima_ms(jobs: Sequence[float], c: float) -> LocalMaxima:
    maxima = []
    for w in jobs:
        if not maxima or w > maxima[-1]:
            maxima.append(w)
    return LocalMaxima(tuple(maxima), c)


@dataclass(frozen=True)
class U0Check:
    u0: float
    w: float
    w1: float

    @property
    def holds(self) -> bool:
        return self.u0 <= self.w and self.w1 <= self.u0


def check_u0_claims(instance: Instance, c: float, x: Sequence[float]) -> U0Check:
    """u0 <= w and w1 <= u0 on the fastest machine, in normalized units."""
    trace, _ = run_interval(instance, IntervalParams(c, tuple(x)))
    if not instance.jobs:
        return U0Check(0.0, 0.0, 0.0)

    scale = instance.max_job
    fastest = sorted(trace.assigned_sizes(instance.ordering[0]), reverse=True)
    w = (fastest[0] / scale) * c
    w1 = (fastest[1] / scale) * c if len(fastest) > 1 else 0.0
    maxima = local_maxima_ms(normalize_jobs(instance.jobs, c), c)
    return U0Check(maxima.u0, w, w1)


@dataclass(frozen=True)
class RecursionRow:
    machine: int
    opt_i: float
    opt_next: float
    delta: float
    profit: float

    @property
    def violation(self) -> float:
        return (self.opt_i - self.opt_next) - self.delta

    def violates(self, tol: float) -> bool:
        return self.violation > tol * max(1.0, abs(self.opt_i))


@dataclass(frozen=True)
class RecursionReport:
    rows: Tuple[RecursionRow, ...]
    opt_value: float
    delta_sum: float
    tol: float

    @property
    def max_step_violation(self) -> float:
        return max((row.violation for row in self.rows), default=0.0)

    @property
    def sum_violation(self) -> float:
        return self.opt_value - self.delta_sum

    @property
    def violations(self) -> int:
        count = sum(1 for row in self.rows if row.violates(self.tol))
        scale = max(1.0, abs(self.opt_value))
        return count + (1 if self.sum_violation > self.tol * scale else 0)


def _sorted_opt_value(instance: Instance) -> float:
    return sorted_opt(instance)[0]


def verify_opt_recursion(
    instance: Instance,
    c: float,
    x: Sequence[float],
    opt_oracle: Optional[Callable[[Instance], float]] = None,
    tol: float = ABS_TOL,
) -> RecursionReport:
    """
    Replays an interval run machine by machine (fastest first). Machine i
    sees the jobs the faster machines declined; OPT_i is the optimum of that
    subinstance and Delta_i bounds OPT_i - OPT_{i+1}. Violations are counted
    relative to OPT_i.
    """
    opt_oracle = opt_oracle or _sorted_opt_value
    trace, _ = run_interval(instance, IntervalParams(c, tuple(x)))

    order = instance.ordering
    remaining = list(range(instance.num_jobs))

    def subinstance(rank: int, jobs: Sequence[int]) -> Instance:
        return validate_instance(
            [instance.speeds[m] for m in order[rank:]],
            [instance.jobs[j] for j in jobs],
        )

    rows = []
    current = subinstance(0, remaining)
    opt_i = opt_oracle(current)
    opt_value = opt_i
    for rank, machine in enumerate(order):
        accepted = set(trace.assigned[machine])
        remaining = [j for j in remaining if j not in accepted]
        nxt = subinstance(rank + 1, remaining) if rank + 1 < len(order) else None
        opt_next = opt_oracle(nxt) if nxt is not None else 0.0

        breakdown = delta_first_machine(current, trace.assigned_sizes(machine))
        rows.append(
            RecursionRow(
                machine=machine,
                opt_i=opt_i,
                opt_next=opt_next,
                delta=breakdown.delta,
                profit=trace.profits[machine],
            )
        )
        current, opt_i = nxt, opt_next

    delta_sum = math.fsum(row.delta for row in rows)
    return RecursionReport(tuple(rows), opt_value, delta_sum, tol)


### Grid certificates ###


def _u0_grid(c: float, grid_size: int) -> np.ndarray:
    if grid_size < 2:
        raise ValidationError(f"grid needs at least 2 points, got {grid_size}")
    return np.linspace(1.0, c, grid_size)


def verify_ratio_all1(c: float, grid_size: int = DEFAULT_U0_GRID) -> float:
    """
    max over u0 in [1, c] of
        h(c) * (u0 c / (c - 1) + (c - u0) / ln c) - (c - u0 + u0 ln u0) / ln c
    which must not be positive.
    """
    if c < E:
        raise DomainError(f"the certificate needs c >= e, got {c}")
    alpha = h_of_c(c)
    u0 = _u0_grid(c, grid_size)
    ln_c = math.log(c)
    lhs = alpha * (u0 * c / (c - 1) + (c - u0) / ln_c)
    rhs = (c - u0 + u0 * np.log(u0)) / ln_c
    return float(np.max(lhs - rhs))


def verify_f_claim(c: float, grid_size: int = DEFAULT_T_GRID) -> float:
    """max over t in [0, 1] of c t + (c - c^t) / ln c, minus its value c at t = 1."""
    if c < E:
        raise DomainError(f"the certificate needs c >= e, got {c}")
    if grid_size < 2:
        raise ValidationError(f"grid needs at least 2 points, got {grid_size}")
    t = np.linspace(0.0, 1.0, grid_size)
    f = c * t + (c - np.power(c, t)) / math.log(c)
    return float(np.max(f) - c)


def verify_geometric_tail_claim(c: float, grid_size: int = DEFAULT_U0_GRID) -> float:
    """max over u0 in [1, c] of u0 log_c(u0 / c) + c / (c - 1) - u0 / (c - 1)."""
    if c <= MIN_C:
        raise DomainError(f"the certificate needs c > 1, got {c}")
    u0 = _u0_grid(c, grid_size)
    lhs = u0 / (c - 1)
    rhs = u0 * np.log(u0 / c) / math.log(c) + c / (c - 1)
    return float(np.max(rhs - lhs))
