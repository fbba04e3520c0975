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
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum, auto
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from fd_match.adversary.rand_ub import PrefixDistribution, check_prefix_length
from fd_match.constants import (
    DEFAULT_C,
    DEFAULT_CHUNK_SIZE,
    DEFAULT_GAMMA,
    ENUMERATION_LIMIT,
    LOGGER_NAME,
)
from fd_match.core import Instance, RunTrace, ValueReport, sorted_opt
from fd_match.exceptions import (
    DegenerateInstance,
    DomainError,
    TooLarge,
    ValidationError,
    ZeroTrials,
)
from fd_match.online import (
    IntervalParams,
    TieRule,
    draw_x,
    run_greedy,
    run_interval,
    run_interval_batch,
    run_threshold,
)
from fd_match.statistics import McStats, TrialRecord

logger = logging.getLogger(LOGGER_NAME)

OnlineAlgorithm = Callable[[Instance], Tuple[RunTrace, ValueReport]]


class Algorithm(Enum):
    GREEDY = auto()
    INTERVAL = auto()
    THRESHOLD = auto()


def deterministic_algorithm(
    algorithm: Algorithm,
    tie_rule: TieRule = TieRule.PREFER_FASTEST,
    c: float = DEFAULT_C,
    x: Optional[Sequence[float]] = None,
    gamma: float = DEFAULT_GAMMA,
) -> OnlineAlgorithm:
    """
    Binds an algorithm to fixed parameters. The interval algorithm uses
    x = 1 on every machine unless offsets are given.
    """
    if algorithm == Algorithm.GREEDY:
        return lambda instance: run_greedy(instance, tie_rule)
    if algorithm == Algorithm.THRESHOLD:
        return lambda instance: run_threshold(instance, gamma, tie_rule)

    def interval(instance: Instance) -> Tuple[RunTrace, ValueReport]:
        offsets = tuple(x) if x is not None else (1.0,) * instance.num_machines
        return run_interval(instance, IntervalParams(c, offsets))

    return interval


### Deterministic lower bounds ###


@dataclass(frozen=True)
class PrefixRatio:
    min_ratio: float
    argmin_prefix: int
    alg_value: float
    opt_value: float

    def to_dict(self) -> dict:
        return {
            "min_ratio": self.min_ratio,
            "argmin_prefix": self.argmin_prefix,
            "alg_value": self.alg_value,
            "opt_value": self.opt_value,
        }


def prefix_worst_ratio(instance: Instance, algorithm: OnlineAlgorithm) -> PrefixRatio:
    """
    Runs the algorithm once; after the first k jobs compares its value with
    the optimum of those k jobs. Returns the worst k (1-based).
    """
    trace, _ = algorithm(instance)
    worst = PrefixRatio(1.0, 0, 0.0, 0.0)
    for k, alg_value in enumerate(trace.value_history, start=1):
        opt_value, _ = sorted_opt(instance.prefix(k))
        ratio = alg_value / opt_value
        if worst.argmin_prefix == 0 or ratio < worst.min_ratio:
            worst = PrefixRatio(ratio, k, alg_value, opt_value)
    return worst


### Randomized lower bound: the prefix distribution ###
#
# All quantities are scaled by S = 4 (2^n - 1) so they are integers:
#   p_i S = 4 * 2^(n - i)
#   T_t S = 4 * (2^(n - t + 1) - 1)      (T_t = probability job t arrives)


def _scale(n: int) -> int:
    return 4 * (2**n - 1)


def _tail_scaled(n: int, t: int) -> int:
    return 4 * (2 ** (n - t + 1) - 1)


def _slow_gain_scaled(n: int, t: int) -> int:
    """(w_t / 4) T_t S."""
    return 2 ** (n + 1) - 2**t


def _fast_gain_scaled(n: int, t: int, m: int) -> int:
    """(w_t - w_m) T_t S, replacing job m on the fast machine (w_0 = 0)."""
    w_m = 2**m if m > 0 else 0
    return (2**t - w_m) * _tail_scaled(n, t)


def _dp_scaled(n: int) -> List[List[int]]:
    # f[t][j]: best expected value of the first t jobs with job j last on
    # the fast machine (j = 0: none yet)
    f = [[0]]
    for t in range(1, n + 1):
        prev = f[-1]
        row = [prev[j] + _slow_gain_scaled(n, t) for j in range(t)]
        row.append(max(prev[m] + _fast_gain_scaled(n, t, m) for m in range(t)))
        f.append(row)
    return f


def dp_table(n: int) -> Tuple[Tuple[float, ...], ...]:
    """f(t, j) for t = 0..n, j = 0..t."""
    check_prefix_length(n)
    scale = _scale(n)
    return tuple(
        tuple(float(Fraction(v, scale)) for v in row) for row in _dp_scaled(n)
    )


def dp_best_det(n: int) -> float:
    """Expected value of the best deterministic algorithm on the prefix distribution."""
    check_prefix_length(n)
    return float(Fraction(max(_dp_scaled(n)[-1]), _scale(n)))


def strategy_value(n: int, fast_mask: Sequence[bool]) -> float:
    """Expected value of the strategy sending job t to the fast machine iff fast_mask[t-1]."""
    check_prefix_length(n)
    if len(fast_mask) != n:
        raise ValidationError(f"strategy needs {n} choices, got {len(fast_mask)}")
    total, last = 0, 0
    for t, fast in enumerate(fast_mask, start=1):
        if fast:
            total += _fast_gain_scaled(n, t, last)
            last = t
        else:
            total += _slow_gain_scaled(n, t)
    return float(Fraction(total, _scale(n)))


def enumerate_best_det(n: int) -> float:
    """Best of all 2^n strategies, by exhaustive evaluation."""
    check_prefix_length(n)
    if n > ENUMERATION_LIMIT:
        raise TooLarge(f"enumeration is limited to n <= {ENUMERATION_LIMIT}, got {n}")

    codes = np.arange(2**n, dtype=np.int64)
    totals = np.zeros(2**n, dtype=np.int64)
    last_fast = np.zeros(2**n, dtype=np.int64)
    for t in range(1, n + 1):
        fast = ((codes >> (t - 1)) & 1).astype(bool)
        fast_gain = (2**t - last_fast) * _tail_scaled(n, t)
        totals += np.where(fast, fast_gain, _slow_gain_scaled(n, t))
        last_fast = np.where(fast, 2**t, last_fast)
    return float(Fraction(int(totals.max()), _scale(n)))


def expected_opt_prefix(n: int) -> float:
    """
    sum_i p_i OPT_i with OPT_i = (5/4) 2^i - 1/2, which is
    (1 - 2^-n)^-1 (5n/4 - (1 - 2^-n)/2).
    """
    check_prefix_length(n)
    normalizer = Fraction(2**n, 2**n - 1)
    return float(normalizer * Fraction(5 * n, 4) - Fraction(1, 2))


@dataclass(frozen=True)
class RandLowerBound:
    n: int
    dp_value: float
    bound: float
    expected_opt: float

    @property
    def ratio(self) -> float:
        return self.dp_value / self.expected_opt

    @property
    def bound_ratio(self) -> float:
        return self.bound / self.expected_opt

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "dp_value": self.dp_value,
            "bound": self.bound,
            "expected_opt": self.expected_opt,
            "ratio": self.ratio,
            "bound_ratio": self.bound_ratio,
        }


def rand_lower_bound(n: int) -> RandLowerBound:
    distribution = PrefixDistribution(n)
    return RandLowerBound(
        n=n,
        dp_value=dp_best_det(n),
        bound=distribution.normalizer * n + 1,
        expected_opt=expected_opt_prefix(n),
    )


### Monte-Carlo estimation ###


def _trial_chunks(trials: int, chunk_size: int) -> List[range]:
    return [
        range(start, min(start + chunk_size, trials))
        for start in range(0, trials, chunk_size)
    ]


def monte_carlo(
    instance: Instance,
    c: float,
    trials: int,
    seed: int,
    threads: int = 1,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> McStats:
    """
    Ratio of the randomized interval algorithm to OPT over independent
    trials. Trial t draws its offsets from the stream keyed by (seed, t),
    so the result does not depend on threads or chunk_size.
    """
    if trials < 1:
        raise ZeroTrials(f"trials must be at least 1, got {trials}")
    if not c > 1:
        raise DomainError(f"interval base c must be > 1, got {c}")
    if threads < 1 or chunk_size < 1:
        raise ValidationError("threads and chunk size must be at least 1")
    opt_value, _ = sorted_opt(instance)
    if not opt_value > 0:
        raise DegenerateInstance("the instance has OPT = 0; ratios are undefined")

    n = instance.num_machines

    def run_chunk(chunk: range) -> List[TrialRecord]:
        x = np.stack([draw_x(seed, t, n) for t in chunk])
        values = run_interval_batch(instance, c, x)
        logger.debug(f"Finished trials {chunk.start}..{chunk.stop - 1}")
        return [TrialRecord(t, v, opt_value) for t, v in zip(chunk, values)]

    chunks = _trial_chunks(trials, chunk_size)
    with ThreadPoolExecutor(max_workers=threads) as executor:
        records = [
            record
            for chunk_records in executor.map(run_chunk, chunks)
            for record in chunk_records
        ]

    stats = McStats(records)
    logger.debug(f"Monte-Carlo: {stats}")
    return stats
