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

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from fd_match.constants import RAND_UB_MAX_N
from fd_match.core import Instance, validate_instance
from fd_match.exceptions import DomainError

FAST_SPEED = 1.0
SLOW_SPEED = 0.25


def check_prefix_length(n: int) -> None:
    if isinstance(n, bool) or not isinstance(n, int) or not 1 <= n <= RAND_UB_MAX_N:
        raise DomainError(f"n must be an integer in [1, {RAND_UB_MAX_N}], got {n}")


@dataclass(frozen=True)
class PrefixDistribution:
    """
    Jobs 2, 4, ..., 2^n on one machine of speed 1 and n machines of speed
    1/4. The sequence is cut after job i with probability c / 2^i, where
    c = 1 / (1 - 2^-n).
    """

    n: int

    def __post_init__(self):
        check_prefix_length(self.n)

    @property
    def normalizer(self) -> float:
        return 1 / (1 - 2.0 ** -self.n)

    @property
    def sizes(self) -> Tuple[float, ...]:
        return tuple(2.0**i for i in range(1, self.n + 1))

    @property
    def probabilities(self) -> Tuple[float, ...]:
        return tuple(float(p) for p in self.exact_probabilities)

    @property
    def exact_probabilities(self) -> Tuple[Fraction, ...]:
        c = Fraction(2**self.n, 2**self.n - 1)
        return tuple(c / 2**i for i in range(1, self.n + 1))

    @property
    def speeds(self) -> Tuple[float, ...]:
        return (FAST_SPEED,) + (SLOW_SPEED,) * self.n

    def prefix(self, i: int) -> Instance:
        """The instance that stops after job 2^i."""
        if not 1 <= i <= self.n:
            raise DomainError(f"prefix must lie in [1, {self.n}], got {i}")
        return validate_instance(self.speeds, self.sizes[:i])

    @property
    def instance(self) -> Instance:
        return self.prefix(self.n)

    @staticmethod
    def opt_of_prefix(i: int) -> float:
        """2^i on the fast machine plus (2 + ... + 2^(i-1)) / 4 on the slow ones."""
        return 1.25 * 2.0**i - 0.5

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "normalizer": self.normalizer,
            "probabilities": list(self.probabilities),
            "probability_sum": math.fsum(self.probabilities),
        }


def rand_ub_family(n: int) -> PrefixDistribution:
    return PrefixDistribution(n)
