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

"""Instances, run traces and the offline optimum.

An instance is a complete bipartite graph with decomposable weights: the
weight of (machine u, job v) is speeds[u] * jobs[v]. Jobs arrive in list
order. A machine is credited only for the largest job it ever receives
(free disposal).
"""

import itertools
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

from fd_match.constants import BRUTE_FORCE_LIMIT, INSTANCE_FORMAT_VERSION, LOGGER_NAME
from fd_match.exceptions import (
    EmptyMachines,
    InstanceFileError,
    NonFiniteValue,
    NonPositiveJob,
    NonPositiveSpeed,
    TooLarge,
    ValidationError,
)
from fd_match.utils import format_float, load_json

logger = logging.getLogger(LOGGER_NAME)

Pairing = Tuple[Tuple[int, int], ...]


def machine_ordering(speeds: Sequence[float]) -> Tuple[int, ...]:
    """Fastest first; equal speeds by original index ascending."""
    return tuple(sorted(range(len(speeds)), key=lambda i: (-speeds[i], i)))


def job_ordering(jobs: Sequence[float]) -> Tuple[int, ...]:
    """Largest first; equal sizes by arrival index ascending."""
    return tuple(sorted(range(len(jobs)), key=lambda j: (-jobs[j], j)))


@dataclass(frozen=True)
class Instance:
    speeds: Tuple[float, ...]
    jobs: Tuple[float, ...]
    ordering: Tuple[int, ...]

    @property
    def num_machines(self) -> int:
        return len(self.speeds)

    @property
    def num_jobs(self) -> int:
        return len(self.jobs)

    @property
    def max_job(self) -> float:
        return max(self.jobs, default=0.0)

    @property
    def fastest(self) -> Optional[int]:
        return self.ordering[0] if self.ordering else None

    def prefix(self, k: int) -> "Instance":
        return Instance(self.speeds, self.jobs[:k], self.ordering)

    def to_dict(self) -> dict:
        return {
            "version": INSTANCE_FORMAT_VERSION,
            "speeds": list(self.speeds),
            "jobs": list(self.jobs),
        }


@dataclass(frozen=True)
class ValueReport:
    alg_value: float
    opt_value: float
    ratio: Optional[float]

    @classmethod
    def from_values(cls, alg_value: float, opt_value: float) -> "ValueReport":
        ratio = alg_value / opt_value if opt_value > 0 else None
        return cls(alg_value, opt_value, ratio)

    def to_dict(self) -> dict:
        return {
            "alg_value": self.alg_value,
            "opt_value": self.opt_value,
            "ratio": self.ratio,
        }


@dataclass(frozen=True)
class RunTrace:
    """Outcome of one online run.

    ``assigned[i]`` holds the indices of the jobs machine ``i`` accepted, in
    arrival order. Jobs no machine accepted are in ``discarded``.
    ``value_history[k]`` is the algorithm's value after k + 1 arrivals.
    ``interval_indices`` is only set for interval-algorithm runs.
    """

    instance: Instance
    assigned: Tuple[Tuple[int, ...], ...]
    discarded: Tuple[int, ...]
    value_history: Tuple[float, ...]
    interval_indices: Optional[Tuple[Tuple[int, ...], ...]] = None

    def assigned_sizes(self, machine: int) -> Tuple[float, ...]:
        return tuple(self.instance.jobs[j] for j in self.assigned[machine])

    @property
    def credited(self) -> Tuple[float, ...]:
        return tuple(
            max(self.assigned_sizes(i), default=0.0)
            for i in range(self.instance.num_machines)
        )

    @property
    def profits(self) -> Tuple[float, ...]:
        return tuple(s * w for s, w in zip(self.instance.speeds, self.credited))

    @property
    def alg_value(self) -> float:
        return math.fsum(self.profits)

    def to_dict(self) -> dict:
        return {
            "assigned": [list(self.assigned_sizes(i)) for i in range(len(self.assigned))],
            "credited": list(self.credited),
            "profits": list(self.profits),
            "discarded": [self.instance.jobs[j] for j in self.discarded],
        }


def _as_floats(raw: Iterable, label: str) -> List[float]:
    values = []
    for value in raw:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValidationError(f"{label} entry {value!r} is not a number")
        try:
            values.append(float(value))
        except OverflowError:
            raise NonFiniteValue(f"{label} entry {value} does not fit a double")
    return values


def validate_instance(speeds: Iterable, jobs: Iterable) -> Instance:
    speeds = _as_floats(speeds, "speed")
    jobs = _as_floats(jobs, "job")

    for i, s in enumerate(speeds):
        if not math.isfinite(s):
            raise NonFiniteValue(f"speed {i} is not finite: {s}")
        if s <= 0:
            raise NonPositiveSpeed(f"speed {i} must be positive, got {s}")
    for j, w in enumerate(jobs):
        if not math.isfinite(w):
            raise NonFiniteValue(f"job {j} is not finite: {w}")
        if w <= 0:
            raise NonPositiveJob(f"job {j} must be positive, got {w}")
    if jobs and not speeds:
        raise EmptyMachines(f"{len(jobs)} jobs but no machines")

    return Instance(tuple(speeds), tuple(jobs), machine_ordering(speeds))


def sorted_opt(instance: Instance) -> Tuple[float, Pairing]:
    """The i-th largest job on the i-th fastest machine.

    Returns the optimum value and the pairing as (machine, job) index pairs.
    """
    jobs = job_ordering(instance.jobs)
    pairing = tuple(zip(instance.ordering, jobs))
    value = math.fsum(instance.speeds[m] * instance.jobs[j] for m, j in pairing)
    return value, pairing


def brute_force_opt(instance: Instance) -> float:
    """Exhaustive optimum over one-to-one assignments.

    Weights are positive, so every partial assignment is dominated by one
    that matches min(#machines, #jobs) pairs; only those are enumerated.
    """
    n, m = instance.num_machines, instance.num_jobs
    if n > BRUTE_FORCE_LIMIT or m > BRUTE_FORCE_LIMIT:
        raise TooLarge(
            f"brute force is limited to {BRUTE_FORCE_LIMIT}x{BRUTE_FORCE_LIMIT}, "
            f"got {n} machines and {m} jobs"
        )
    if n == 0 or m == 0:
        return 0.0

    best = 0.0
    s, w = instance.speeds, instance.jobs
    if n >= m:
        for machines in itertools.permutations(range(n), m):
            best = max(best, math.fsum(s[u] * w[v] for v, u in enumerate(machines)))
    else:
        for jobs in itertools.permutations(range(m), n):
            best = max(best, math.fsum(s[u] * w[v] for u, v in enumerate(jobs)))
    return best


def dump_instance(instance: Instance) -> str:
    speeds = ", ".join(format_float(s) for s in instance.speeds)
    jobs = ", ".join(format_float(w) for w in instance.jobs)
    return (
        f'{{"version": {INSTANCE_FORMAT_VERSION}, '
        f'"speeds": [{speeds}], "jobs": [{jobs}]}}\n'
    )


def save_instance(instance: Instance, path: Path) -> None:
    with open(path, mode="w", encoding="utf-8", newline="\n") as f:
        f.write(dump_instance(instance))


def load_instance(path: Path) -> Instance:
    try:
        data = load_json(path)
    except FileNotFoundError:
        raise InstanceFileError(f"instance file '{path}' does not exist")
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as e:
        raise InstanceFileError(f"cannot read instance file '{path}': {e}")

    if not isinstance(data, dict):
        raise InstanceFileError(f"instance file '{path}' must hold a JSON object")
    if data.get("version") != INSTANCE_FORMAT_VERSION:
        raise InstanceFileError(
            f"unsupported instance version {data.get('version')!r} in '{path}'"
        )
    for key in ("speeds", "jobs"):
        if not isinstance(data.get(key), list):
            raise InstanceFileError(f"instance file '{path}' needs a '{key}' list")

    instance = validate_instance(data["speeds"], data["jobs"])
    logger.debug(
        f"Loaded '{path}': {instance.num_machines} machines, {instance.num_jobs} jobs"
    )
    return instance
