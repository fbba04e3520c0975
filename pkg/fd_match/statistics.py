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

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence

import numpy as np
from fd_match.exceptions import ZeroTrials
from fd_match.utils import format_float
from rich.console import Console
from rich.table import Table


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    alg_value: float
    opt_value: float

    @property
    def ratio(self) -> float:
        return self.alg_value / self.opt_value


class McStats:
    """Aggregates Monte-Carlo trials of one instance.

    Records are kept in trial-index order, so every statistic and the CSV
    depend only on the set of trials, not on how they were scheduled.

    Example:

      >>> stats = McStats([TrialRecord(0, 1.0, 2.0), TrialRecord(1, 2.0, 2.0)])
      >>> stats.mean_ratio  # 0.75
    """

    csv_header = ["trial", "alg_value", "opt_value", "ratio"]

    def __init__(self, records: Sequence[TrialRecord]):
        if not records:
            raise ZeroTrials("Monte-Carlo statistics need at least one trial")
        self.records: List[TrialRecord] = sorted(records, key=lambda r: r.trial)
        ratios = np.array([r.ratio for r in self.records])
        self.trials = len(self.records)
        self.min_ratio = float(np.min(ratios))
        self.max_ratio = float(np.max(ratios))
        # rounding in the sum can push the mean an ulp outside [min, max]
        self.mean_ratio = float(np.clip(np.mean(ratios), self.min_ratio, self.max_ratio))
        self.sample_std = float(np.std(ratios, ddof=1)) if self.trials > 1 else 0.0
        self.stderr = self.sample_std / math.sqrt(self.trials)

    def __repr__(self):
        attr_strs = ",".join(f"{k}={v}" for k, v in self.summary().items())
        return f"McStats({attr_strs})"

    def summary(self) -> dict:
        return {
            "trials": self.trials,
            "mean_ratio": self.mean_ratio,
            "sample_std": self.sample_std,
            "stderr": self.stderr,
            "min_ratio": self.min_ratio,
            "max_ratio": self.max_ratio,
        }

    def pretty_print(self, console: Console = None) -> None:
        """Prints the summary as a table on the error stream."""
        table = Table(title="Monte-Carlo ratio")
        table.add_column("Statistic", justify="right", style="cyan", no_wrap=True)
        table.add_column("value", justify="right", style="green")
        for key, value in self.summary().items():
            formatted = f"{value:.6f}" if isinstance(value, float) else f"{value}"
            table.add_row(key.replace("_", " ").capitalize(), formatted)

        console = console or Console(stderr=True)
        console.print(table)

    def _write_csv(self, stream) -> None:
        csv_writer = csv.writer(stream, lineterminator="\n")
        csv_writer.writerow(self.csv_header)
        for record in self.records:
            csv_writer.writerow(
                [
                    record.trial,
                    format_float(record.alg_value),
                    format_float(record.opt_value),
                    format_float(record.ratio),
                ]
            )

    def to_csv(self) -> str:
        stream = io.StringIO()
        self._write_csv(stream)
        return stream.getvalue()

    def export_to_csv(self, csv_filename: Path) -> None:
        """Writes one row per trial."""
        with open(csv_filename, mode="w", encoding="utf-8", newline="") as csvfile:
            self._write_csv(csvfile)
