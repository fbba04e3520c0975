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

LOGGER_NAME: str = "fd-match"

# Interval base used when --c is omitted.
DEFAULT_C = 3.55829
DEFAULT_EPS = 0.2
DEFAULT_DELTA = 1e-3
DEFAULT_RAND_UB_N = 16
DEFAULT_SEED = 0
DEFAULT_TRIALS = 20000
DEFAULT_THREADS = 1
DEFAULT_CHUNK_SIZE = 2048
DEFAULT_GAMMA = 0.5

INSTANCE_FORMAT_VERSION = 1

ABS_TOL = 1e-9
REL_TOL = 1e-9
GAIN_TIE_REL_TOL = 1e-12
LAMBERT_TOL = 1e-12
LAMBERT_MAX_ITERATIONS = 64
# h(c) is undefined at c = 1 (beta -> 0).
MIN_C = 1.0 + 1e-9

DEFAULT_U0_GRID = 10_000
DEFAULT_T_GRID = 1_000

BRUTE_FORCE_LIMIT = 8
ENUMERATION_LIMIT = 20
RAND_UB_MAX_N = 60
MAX_RECURRENCE_STEPS = 1_000_000
DET_UB_MAX_DELTA = 1e-2

E = math.e
SIGNIFICANT_DIGITS = 17
