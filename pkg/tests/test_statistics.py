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

import numpy as np
import pytest
from fd_match.exceptions import ZeroTrials
from fd_match.statistics import McStats, TrialRecord
from rich.console import Console


class TestMcStats:
    @pytest.fixture
    def stats(self) -> McStats:
        records = [
            TrialRecord(2, 1.5, 2.0),
            TrialRecord(0, 1.0, 2.0),
            TrialRecord(1, 2.0, 2.0),
        ]
        return McStats(records)

    def test_statistics(self, stats):
        ratios = [0.5, 1.0, 0.75]
        assert stats.trials == 3
        assert stats.mean_ratio == pytest.approx(0.75)
        assert stats.sample_std == pytest.approx(np.std(ratios, ddof=1))
        assert stats.stderr == pytest.approx(stats.sample_std / math.sqrt(3))
        assert stats.min_ratio == 0.5
        assert stats.max_ratio == 1.0

    def test_records_sorted_by_trial(self, stats):
        assert [r.trial for r in stats.records] == [0, 1, 2]

    def test_single_trial(self):
        stats = McStats([TrialRecord(0, 1.0, 3.0)])
        assert stats.sample_std == 0
        assert stats.stderr == 0
        assert stats.min_ratio == stats.mean_ratio == stats.max_ratio

    def test_identical_ratios_stay_in_range(self):
        stats = McStats([TrialRecord(t, 0.1, 0.3) for t in range(1000)])
        assert stats.min_ratio <= stats.mean_ratio <= stats.max_ratio

    def test_no_trials(self):
        with pytest.raises(ZeroTrials):
            McStats([])

    def test_summary_keys(self, stats):
        assert list(stats.summary()) == [
            "trials",
            "mean_ratio",
            "sample_std",
            "stderr",
            "min_ratio",
            "max_ratio",
        ]

    def test_csv(self, stats):
        lines = stats.to_csv().split("\n")
        assert lines[0] == "trial,alg_value,opt_value,ratio"
        assert lines[1] == "0,1,2,0.5"
        assert lines[3] == "2,1.5,2,0.75"
        assert lines[-1] == ""
        assert "\r" not in stats.to_csv()

    def test_csv_full_precision(self):
        stats = McStats([TrialRecord(0, 1.0, 3.0)])
        ratio = stats.to_csv().split("\n")[1].split(",")[3]
        assert float(ratio) == 1.0 / 3.0
        assert ratio == "0.33333333333333331"

    def test_export_to_csv(self, stats, tmp_path):
        path = tmp_path / "mc.csv"
        stats.export_to_csv(path)
        assert path.read_bytes() == stats.to_csv().encode("utf-8")

    def test_pretty_print(self, stats):
        console = Console(record=True, width=80)
        stats.pretty_print(console)
        text = console.export_text()
        assert "Monte-Carlo ratio" in text
        assert "Mean ratio" in text
        assert "0.750000" in text
