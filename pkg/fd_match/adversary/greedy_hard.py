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
from typing import Tuple

from fd_match.core import Instance, validate_instance
from fd_match.exceptions import DomainError


def _num_slow_machines(eps: float) -> int:
    # 1/eps^2 can land just above an integer, e.g. 1/0.2^2 = 25.000000000000004
    return math.ceil(1 / eps**2 - 1e-9)


def greedy_hard_instance(eps: float) -> Instance:
    """
    One machine of speed 1 and t = ceil(1/eps^2) machines of speed eps/2.
    Jobs (1 - eps/2)^-i, i = 1..t+1, arrive in increasing order; each one
    ties the fast machine with an empty slow machine, so greedy keeps
    moving the fast machine up and leaves the slow ones idle.
    """
    if not 0 < eps <= 1:
        raise DomainError(f"eps must lie in (0, 1], got {eps}")
    t = _num_slow_machines(eps)
    q = 1 - eps / 2
    speeds = [1.0] + [eps / 2] * t
    jobs = [q ** (-i) for i in range(1, t + 2)]
    return validate_instance(speeds, jobs)


def greedy_hard_values(eps: float) -> Tuple[float, float]:
    """Closed-form (OPT, greedy value) of greedy_hard_instance(eps)."""
    if not 0 < eps <= 1:
        raise DomainError(f"eps must lie in (0, 1], got {eps}")
    t = _num_slow_machines(eps)
    q = 1 - eps / 2
    return q ** (-1 - t) + q ** (-t) - 1, q ** (-1 - t)
