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

import json
import math
from fractions import Fraction
from pathlib import Path

import pytest
from fd_match.adversary import (
    PrefixDistribution,
    check_det_ub_conditions,
    det_ub_closed_form,
    det_ub_params,
    det_ub_sequence,
    greedy_hard_instance,
    greedy_hard_values,
    rand_ub_family,
    write_sidecar,
)
from fd_match.core import sorted_opt
from fd_match.exceptions import DomainError
from fd_match.online import run_greedy


class TestGreedyHard:
    def test_eps_one(self):
        instance = greedy_hard_instance(1.0)
        assert instance.speeds == (1.0, 0.5)
        assert instance.jobs == (2.0, 4.0)

    def test_eps_point_two(self):
        instance = greedy_hard_instance(0.2)
        assert instance.num_machines == 26
        assert instance.num_jobs == 26
        assert instance.max_job == pytest.approx(0.9**-26)
        assert list(instance.jobs) == sorted(instance.jobs)

    @pytest.mark.parametrize("eps", [1.0, 0.5, 0.3, 0.2, 0.1])
    def test_values(self, eps):
        instance = greedy_hard_instance(eps)
        expected_opt, expected_greedy = greedy_hard_values(eps)
        opt_value, _ = sorted_opt(instance)
        _, report = run_greedy(instance)
        assert opt_value == pytest.approx(expected_opt, rel=1e-9)
        assert report.alg_value == pytest.approx(expected_greedy, rel=1e-9)

    def test_greedy_ratio(self):
        _, report = run_greedy(greedy_hard_instance(0.2))
        assert report.ratio <= 1 / 1.8 + 1e-9

    @pytest.mark.parametrize("eps", [0.0, -0.1, 1.5])
    def test_invalid_eps(self, eps):
        with pytest.raises(DomainError):
            greedy_hard_instance(eps)


class TestDetUb:
    def test_params_limit(self):
        a, r = det_ub_params(1e-12)
        assert a == pytest.approx((math.sqrt(5) - 1) / 2, abs=1e-9)
        assert r == pytest.approx(2 + math.sqrt(5), abs=1e-9)

    def test_params(self):
        a, r = det_ub_params(1e-3)
        assert a == pytest.approx(0.61831013997921591, rel=1e-12)
        assert r == pytest.approx(4.2285091225411646, rel=1e-12)
        assert a * r >= 1

    @pytest.mark.parametrize("delta", [0.0, -1e-3])
    def test_invalid_delta(self, delta):
        with pytest.raises(DomainError):
            det_ub_params(delta)

    def test_sequence(self):
        params = det_ub_sequence(1e-3)
        w = params.w
        assert w[0] == 1
        assert w[1] == pytest.approx(math.sqrt(5), rel=1e-12)
        assert params.n == 154
        assert all(a < b for a, b in zip(w, w[1:]))
        assert w[-1] / w[-2] <= params.r / (params.r - 1)
        assert all(b / a > params.r / (params.r - 1) for a, b in zip(w[:-1], w[1:-1]))
        assert params.discriminant < 0

    def test_instance(self):
        params = det_ub_sequence(1e-3)
        instance = params.instance
        assert instance.speeds == (params.r,) + (1.0,) * params.n
        assert instance.jobs == params.w

    def test_closed_form(self):
        params = det_ub_sequence(1e-3)
        for k, w_k in enumerate(params.w):
            assert det_ub_closed_form(1e-3, k) == pytest.approx(w_k, rel=1e-9)

    def test_conditions_pass(self):
        params = det_ub_sequence(1e-3)
        report = check_det_ub_conditions(params.a, params.r, params.w)
        assert report.ok
        assert report.first_violation is None

    def test_mid_conditions_are_tight(self):
        params = det_ub_sequence(1e-3)
        report = check_det_ub_conditions(params.a, params.r, params.w)
        mid = [check for check in report.checks if check.name == "mid"]
        assert len(mid) == params.n
        assert mid[0].lhs == pytest.approx(mid[0].rhs, rel=1e-12)
        for check in mid:
            assert check.lhs == pytest.approx(check.rhs, rel=1e-9)

    def test_doubled_last_job_fails(self):
        params = det_ub_sequence(1e-3)
        w = list(params.w)
        w[-1] *= 2
        report = check_det_ub_conditions(params.a, params.r, w)
        assert not report.ok
        assert report.first_violation.name == "last"


class TestRandUb:
    def test_three(self):
        family = rand_ub_family(3)
        assert family.exact_probabilities == (
            Fraction(4, 7),
            Fraction(2, 7),
            Fraction(1, 7),
        )
        assert family.normalizer == pytest.approx(8 / 7)
        assert family.sizes == (2.0, 4.0, 8.0)
        assert family.speeds == (1.0, 0.25, 0.25, 0.25)

    def test_one(self):
        family = rand_ub_family(1)
        assert family.probabilities == (1.0,)

    @pytest.mark.parametrize("n", [1, 2, 16, 60])
    def test_probabilities_sum_to_one(self, n):
        assert math.fsum(rand_ub_family(n).probabilities) == pytest.approx(1, abs=1e-15)

    @pytest.mark.parametrize("n", [1, 5, 12])
    def test_opt_of_prefix(self, n):
        family = rand_ub_family(n)
        for i in range(1, n + 1):
            opt_value, _ = sorted_opt(family.prefix(i))
            assert opt_value == PrefixDistribution.opt_of_prefix(i)

    @pytest.mark.parametrize("n", [0, 61, -3, 2.5])
    def test_out_of_range(self, n):
        with pytest.raises(DomainError):
            rand_ub_family(n)


class TestSidecar:
    @pytest.fixture
    def sidecar(self, tmp_path) -> Path:
        return tmp_path / "det_ub_params.json"

    def test_det_ub_sidecar(self, sidecar):
        params = det_ub_sequence(1e-3)
        write_sidecar(sidecar, params.to_dict())
        data = json.loads(sidecar.read_text())
        assert set(data) == {"a", "r", "delta", "w"}
        assert data["w"] == list(params.w)
        assert data["a"] == params.a
