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

import logging
import math
from dataclasses import dataclass
from enum import Enum, auto
from typing import List, Optional, Sequence, Tuple

import numpy as np
from fd_match.constants import DEFAULT_GAMMA, GAIN_TIE_REL_TOL, LOGGER_NAME
from fd_match.core import Instance, RunTrace, ValueReport, sorted_opt
from fd_match.exceptions import DimensionMismatch, DomainError, ValidationError

logger = logging.getLogger(LOGGER_NAME)

# x = (u + 1) * 2^-64 for a uniform 64-bit u lies in (0, 1].
_TWO_POW_MINUS_64 = 2.0**-64

# distance in log_c units below which the batch engine defers to interval_index
_BOUNDARY_SLACK = 1e-9


class TieRule(Enum):
    PREFER_FASTEST = auto()
    PREFER_SLOWEST = auto()
    PREFER_LOWEST_INDEX = auto()


@dataclass(frozen=True)
class IntervalParams:
    """Interval base c and one offset x per machine, fastest machine first."""

    c: float
    x: Tuple[float, ...]

    def __post_init__(self):
        if not self.c > 1:
            raise DomainError(f"interval base c must be > 1, got {self.c}")
        for rank, xi in enumerate(self.x):
            if not 0 < xi <= 1:
                raise ValidationError(f"x[{rank}] must lie in (0, 1], got {xi}")


class _TraceBuilder:
    """Mutable run state; frozen into a RunTrace at the end."""

    def __init__(self, instance: Instance, track_intervals: bool = False) -> None:
        self._instance = instance
        n = instance.num_machines
        self.credited = [0.0] * n
        self._assigned: List[List[int]] = [[] for _ in range(n)]
        self._intervals: Optional[List[List[int]]] = (
            [[] for _ in range(n)] if track_intervals else None
        )
        self._discarded: List[int] = []
        self._history: List[float] = []

    def assign(self, machine: int, job: int, interval: Optional[int] = None) -> None:
        self._assigned[machine].append(job)
        size = self._instance.jobs[job]
        if size > self.credited[machine]:
            self.credited[machine] = size
        if self._intervals is not None:
            self._intervals[machine].append(interval)
        self._record()

    def discard(self, job: int) -> None:
        self._discarded.append(job)
        self._record()

    def _record(self) -> None:
        speeds = self._instance.speeds
        self._history.append(
            math.fsum(s * w for s, w in zip(speeds, self.credited))
        )

    def build(self) -> RunTrace:
        intervals = None
        if self._intervals is not None:
            intervals = tuple(tuple(ks) for ks in self._intervals)
        return RunTrace(
            instance=self._instance,
            assigned=tuple(tuple(a) for a in self._assigned),
            discarded=tuple(self._discarded),
            value_history=tuple(self._history),
            interval_indices=intervals,
        )


def _report(trace: RunTrace) -> ValueReport:
    opt_value, _ = sorted_opt(trace.instance)
    return ValueReport.from_values(trace.alg_value, opt_value)


def _break_tie(tied: Sequence[int], speeds: Sequence[float], rule: TieRule) -> int:
    if rule == TieRule.PREFER_FASTEST:
        return min(tied, key=lambda i: (-speeds[i], i))
    if rule == TieRule.PREFER_SLOWEST:
        return min(tied, key=lambda i: (speeds[i], i))
    return min(tied)


def _greedy_choice(
    size: float,
    machines: Sequence[int],
    speeds: Sequence[float],
    credited: Sequence[float],
    tie_rule: TieRule,
) -> Optional[int]:
    """Machine with the largest positive gain, or None."""
    gains = {i: speeds[i] * size - speeds[i] * credited[i] for i in machines}
    best = max(gains.values(), default=0.0)
    if best <= 0:
        return None
    # Gains that agree up to rounding are ties.
    tied = [i for i, g in gains.items() if g >= best - GAIN_TIE_REL_TOL * best]
    return _break_tie(tied, speeds, tie_rule)


def run_greedy(
    instance: Instance, tie_rule: TieRule = TieRule.PREFER_FASTEST
) -> Tuple[RunTrace, ValueReport]:
    builder = _TraceBuilder(instance)
    machines = range(instance.num_machines)
    for j, size in enumerate(instance.jobs):
        machine = _greedy_choice(
            size, machines, instance.speeds, builder.credited, tie_rule
        )
        if machine is None:
            builder.discard(j)
        else:
            builder.assign(machine, j)

    trace = builder.build()
    return trace, _report(trace)


def run_threshold(
    instance: Instance,
    gamma: float = DEFAULT_GAMMA,
    tie_rule: TieRule = TieRule.PREFER_FASTEST,
) -> Tuple[RunTrace, ValueReport]:
    """
    Geometric threshold rule: the fastest machine only takes a job that is
    more than (1 + gamma) times its credited job. Anything else goes
    greedily to the remaining machines.
    """
    if gamma < 0:
        raise ValidationError(f"gamma must be non-negative, got {gamma}")

    builder = _TraceBuilder(instance)
    if not instance.ordering:
        return builder.build(), ValueReport.from_values(0.0, 0.0)

    fast = instance.ordering[0]
    others = instance.ordering[1:]
    for j, size in enumerate(instance.jobs):
        current = builder.credited[fast]
        if current == 0 or size > (1 + gamma) * current:
            builder.assign(fast, j)
            continue
        machine = _greedy_choice(
            size, others, instance.speeds, builder.credited, tie_rule
        )
        if machine is None:
            builder.discard(j)
        else:
            builder.assign(machine, j)

    trace = builder.build()
    return trace, _report(trace)


def _log_base(size: float, c: float) -> float:
    return math.log(size) / math.log(c)


def interval_index(size: float, x: float, c: float) -> int:
    """The k with c^(k+x) < size <= c^(k+1+x)."""
    k = math.ceil(_log_base(size, c) - x) - 1
    # the log ratio can land on the wrong side of a boundary
    while c ** (k + x) >= size:
        k -= 1
    while c ** (k + 1 + x) < size:
        k += 1
    return k


def run_interval(
    instance: Instance, params: IntervalParams
) -> Tuple[RunTrace, ValueReport]:
    if len(params.x) != instance.num_machines:
        raise DimensionMismatch(
            f"{len(params.x)} x values for {instance.num_machines} machines"
        )

    builder = _TraceBuilder(instance, track_intervals=True)
    current: List[Optional[int]] = [None] * instance.num_machines
    for j, size in enumerate(instance.jobs):
        for rank, machine in enumerate(instance.ordering):
            k = interval_index(size, params.x[rank], params.c)
            if current[machine] is None or current[machine] < k:
                current[machine] = k
                builder.assign(machine, j, k)
                break
        else:
            builder.discard(j)

    trace = builder.build()
    return trace, _report(trace)


def draw_x(seed: int, trial_index: int, num_machines: int) -> np.ndarray:
    """
    Offsets for one trial. The stream is keyed by (seed, trial_index); the
    value at position r belongs to the r-th fastest machine.
    """
    bit_generator = np.random.PCG64(np.random.SeedSequence([seed, trial_index]))
    u = bit_generator.random_raw(num_machines)
    return (u.astype(np.float64) + 1.0) * _TWO_POW_MINUS_64


def run_interval_random(
    instance: Instance, c: float, rng_seed: int, trial_index: int
) -> Tuple[RunTrace, ValueReport]:
    x = draw_x(rng_seed, trial_index, instance.num_machines)
    return run_interval(instance, IntervalParams(c, tuple(x.tolist())))


def run_interval_batch(instance: Instance, c: float, x: np.ndarray) -> List[float]:
    """
    Interval algorithm for many offset vectors at once.

    ``x`` has one row per trial, columns in fastest-first order. Returns the
    algorithm's value per trial, equal to what run_interval computes for the
    same row.
    """
    if not c > 1:
        raise DomainError(f"interval base c must be > 1, got {c}")
    trials, n = x.shape
    if n != instance.num_machines:
        raise DimensionMismatch(f"{n} x columns for {instance.num_machines} machines")
    if trials == 0 or n == 0:
        return [0.0] * trials

    current = np.full((trials, n), -np.inf)
    credited = np.zeros((trials, n))
    rows = np.arange(trials)
    for size in instance.jobs:
        t = _log_base(size, c) - x
        k = np.ceil(t) - 1.0
        # near a boundary the estimate may be off by one; settle those exactly
        near = np.abs(t - np.rint(t)) < _BOUNDARY_SLACK
        for trial, col in zip(*np.nonzero(near)):
            k[trial, col] = interval_index(size, float(x[trial, col]), c)
        accept = current < k
        # argmax finds the first accepting machine in scan order
        first = accept.argmax(axis=1)
        hit = accept[rows, first]
        r, m = rows[hit], first[hit]
        current[r, m] = k[r, m]
        credited[r, m] = size

    speeds = np.array([instance.speeds[i] for i in instance.ordering])
    profits = credited * speeds
    return [math.fsum(row) for row in profits.tolist()]
