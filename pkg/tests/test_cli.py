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
from pathlib import Path

import fd_match.utils as utils
import pytest
from fd_match import __version__, parser
from fd_match.harness import Algorithm
from fd_match.main import run_cli
from fd_match.online import TieRule
from fd_match.parser import Family, OutputFormat


class TestCLIArguments:
    expected_help_output = (
        "CLI to study online matching with free disposal on related machines"
    )
    expected_version_output = f"fd-match {__version__}"

    @pytest.mark.parametrize(
        "args, expected_output",
        [
            (["-h"], expected_help_output),
            (["--help"], expected_help_output),
            (["--version"], expected_version_output),
        ],
    )
    def test_help_version_arguments_output_and_exit(
        self, args, expected_output, capsys
    ):
        with pytest.raises(SystemExit) as excinfo:
            _ = parser.parse_args(args)

        # Check that the exit was successful
        assert excinfo.value.code == 0

        # Capture that the correct message was displayed
        captured = capsys.readouterr()
        assert expected_output in captured.out

    @pytest.mark.parametrize(
        "arg, expected_attributes",
        [
            (
                ["gen", "greedy-hard", "--eps", "0.5"],
                {"family": Family.GREEDY_HARD, "eps": 0.5},
            ),
            (["gen", "det-ub", "--delta", "0.002"], {"family": Family.DET_UB}),
            (["gen", "rand-ub", "--n", "7"], {"family": Family.RAND_UB, "n": 7}),
            (["opt", "--instance", "a.json"], {"instance": Path("a.json")}),
            (
                ["run", "--instance", "a.json", "--algorithm", "interval"],
                {"algorithm": Algorithm.INTERVAL, "c": 3.55829, "x": None},
            ),
            (
                ["run", "--instance", "a.json", "--tie", "prefer-slowest"],
                {"algorithm": Algorithm.GREEDY, "tie": TieRule.PREFER_SLOWEST},
            ),
            (
                ["run", "--instance", "a.json", "--algorithm", "interval", "--x", "1,0.5"],
                {"x": (1.0, 0.5)},
            ),
            (["bound", "--c", "4"], {"c": 4.0, "allow_below_e": False}),
            (["bound", "--allow-below-e"], {"allow_below_e": True}),
            (["cstar"], {"hi": 6.0, "tol": 1e-6}),
            (["certify", "--grid", "100", "--t-grid", "10"], {"grid": 100, "t_grid": 10}),
            (
                ["mc", "--instance", "a.json", "--threads", "8"],
                {"threads": 8, "trials": 20000, "seed": 0},
            ),
            (["lb-det", "--algorithm", "threshold"], {"algorithm": Algorithm.THRESHOLD}),
            (["lb-rand", "--n", "60"], {"n": 60}),
            (["lb-rand", "--seed", "18446744073709551615"], {"seed": 2**64 - 1}),
            (["lb-rand", "--format", "csv"], {"format": OutputFormat.CSV}),
            (["lb-rand", "--out", "x.json"], {"out": Path("x.json")}),
            (["lb-rand", "-v"], {"verbose": True}),
        ],
    )
    def test_all_flags_parsed(self, arg, expected_attributes):
        args = parser.parse_args(arg)

        for key, value in expected_attributes.items():
            assert getattr(args, key) == value

    @pytest.mark.parametrize(
        "arg, expected_output",
        [
            ([], "the following arguments are required: SUBCOMMAND"),
            (["opt"], "the following arguments are required: --instance"),
            (["gen", "fancy"], "invalid choice: 'fancy'"),
            (["bound", "--unknown"], "unrecognized arguments: --unknown"),
            (["lb-rand", "--seed", "-1"], "seed must be an unsigned 64-bit integer"),
            (["lb-rand", "--seed", str(2**64)], "seed must be an unsigned 64-bit integer"),
            (["lb-rand", "--format", "xml"], "invalid choice: 'xml'"),
            (["mc", "--instance", "a.json", "--threads", "0"], "--threads"),
            (["cstar", "--lo", "5", "--hi", "4"], "--lo option must be smaller"),
            (["run", "--instance", "a.json", "--x", "1,a"], "comma-separated numbers"),
        ],
    )
    def test_conditional_errors(self, arg, expected_output, capsys):
        with pytest.raises(SystemExit) as excinfo:
            parser.parse_args(arg)

        assert excinfo.value.code == 2
        captured = capsys.readouterr()
        assert expected_output in captured.err

    def test_enum_names(self):
        assert utils.get_enum_names(Family) == ["greedy-hard", "det-ub", "rand-ub"]
        assert utils.get_enum_names(TieRule) == [
            "prefer-fastest",
            "prefer-slowest",
            "prefer-lowest-index",
        ]


class TestCLIRuns:
    def test_gen_greedy_hard(self, tmp_path):
        out = tmp_path / "greedy_hard.json"
        assert run_cli(["gen", "greedy-hard", "--eps", "1", "--out", str(out)]) == 0
        data = json.loads(out.read_text())
        assert data == {"version": 1, "speeds": [1, 0.5], "jobs": [2, 4]}

    def test_gen_det_ub_writes_sidecar(self, tmp_path):
        out = tmp_path / "det_ub.json"
        assert run_cli(["gen", "det-ub", "--out", str(out)]) == 0
        instance = json.loads(out.read_text())
        params = json.loads((tmp_path / "det_ub_params.json").read_text())
        assert set(params) == {"a", "r", "delta", "w"}
        assert instance["jobs"] == params["w"]
        assert len(instance["speeds"]) == len(params["w"])

    def test_gen_to_stdout_skips_sidecar(self, capsys, caplog):
        assert run_cli(["gen", "rand-ub", "--n", "3"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["jobs"] == [2, 4, 8]
        assert "sidecar is not written" in caplog.text

    def test_round_trip(self, tmp_path, capsys):
        out = tmp_path / "hard.json"
        run_cli(["gen", "greedy-hard", "--eps", "0.2", "--out", str(out)])
        capsys.readouterr()

        assert run_cli(["opt", "--instance", str(out)]) == 0
        opt_value = json.loads(capsys.readouterr().out)["opt_value"]
        q = 0.9
        assert opt_value == pytest.approx(q**-26 + q**-25 - 1, rel=1e-12)

        assert run_cli(["run", "--instance", str(out), "--algorithm", "greedy"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["algorithm"] == "greedy"
        assert report["opt_value"] == opt_value
        assert report["ratio"] <= 1 / 1.8 + 1e-9

    def test_run_interval_with_offsets(self, tmp_path, capsys):
        path = tmp_path / "small.json"
        path.write_text('{"version": 1, "speeds": [1, 0.5], "jobs": [4, 3]}')
        args = ["run", "--instance", str(path), "--algorithm", "interval"]
        assert run_cli(args + ["--c", "2", "--x", "1,1"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["alg_value"] == 5.5
        assert report["assigned"] == [[4], [3]]

    def test_run_interval_dimension_mismatch(self, tmp_path):
        path = tmp_path / "small.json"
        path.write_text('{"version": 1, "speeds": [1, 0.5], "jobs": [4, 3]}')
        args = ["run", "--instance", str(path), "--algorithm", "interval", "--x", "1"]
        assert run_cli(args) == 3

    def test_run_csv(self, tmp_path, capsys):
        path = tmp_path / "small.json"
        path.write_text('{"version": 1, "speeds": [1], "jobs": [4, 3]}')
        assert run_cli(["run", "--instance", str(path), "--format", "csv"]) == 0
        header, row, _ = capsys.readouterr().out.split("\n")
        assert header == "algorithm,alg_value,opt_value,ratio"
        assert row == "greedy,4,4,1"

    def test_bound(self, capsys):
        assert run_cli(["bound", "--c", "3.55829"]) == 0
        result = json.loads(capsys.readouterr().out)
        assert 0.5663 <= result["bound"] <= 0.5665
        assert result["active_branch"] == "first"
        assert result["first_branch"] <= result["h"]

    def test_bound_below_e(self):
        assert run_cli(["bound", "--c", "2"]) == 4
        assert run_cli(["bound", "--c", "2", "--allow-below-e"]) == 0

    def test_cstar(self, capsys):
        assert run_cli(["cstar", "--hi", "6", "--tol", "1e-6"]) == 0
        result = json.loads(capsys.readouterr().out)
        assert abs(result["c_star"] - 3.55829) <= 5e-3

    def test_cstar_monotone(self):
        assert run_cli(["cstar", "--lo", "5", "--hi", "6"]) == 4

    def test_certify(self, capsys):
        assert run_cli(["certify", "--c", "3.55829", "--grid", "2000"]) == 0
        result = json.loads(capsys.readouterr().out)
        assert result["certified"] is True

    def test_lb_det(self, capsys):
        assert run_cli(["lb-det", "--delta", "1e-3", "--algorithm", "greedy"]) == 0
        result = json.loads(capsys.readouterr().out)
        assert result["conditions_ok"] is True
        assert result["min_ratio"] <= 0.620
        assert result["n"] == 154

    def test_lb_rand(self, capsys):
        assert run_cli(["lb-rand", "--n", "60"]) == 0
        result = json.loads(capsys.readouterr().out)
        assert result["dp_value"] <= 61
        assert result["ratio"] <= 0.81

    def test_lb_rand_out_of_range(self):
        assert run_cli(["lb-rand", "--n", "61"]) == 4

    def test_missing_instance_file(self, tmp_path, caplog):
        assert run_cli(["opt", "--instance", str(tmp_path / "missing.json")]) == 3
        assert "does not exist" in caplog.text

    def test_invalid_instance_values(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"version": 1, "speeds": [-1], "jobs": [4]}')
        assert run_cli(["opt", "--instance", str(path)]) == 3

    def test_usage_error(self):
        assert run_cli(["opt"]) == 2

    def test_mc_zero_trials(self, tmp_path):
        path = tmp_path / "small.json"
        path.write_text('{"version": 1, "speeds": [1, 0.5], "jobs": [4, 3]}')
        assert run_cli(["mc", "--instance", str(path), "--trials", "0"]) == 3

    def test_mc_is_byte_identical(self, tmp_path):
        instance = tmp_path / "hard.json"
        run_cli(["gen", "greedy-hard", "--eps", "0.2", "--out", str(instance)])
        outputs = []
        for name, threads in [("a.csv", "1"), ("b.csv", "1"), ("c.csv", "8")]:
            out = tmp_path / name
            args = ["mc", "--instance", str(instance), "--trials", "3000"]
            args += ["--seed", "12345", "--threads", threads]
            args += ["--format", "csv", "--out", str(out)]
            assert run_cli(args) == 0
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1] == outputs[2]
        assert outputs[0].startswith(b"trial,alg_value,opt_value,ratio\n")
        assert outputs[0].count(b"\n") == 3001

        summary = json.loads((tmp_path / "a_summary.json").read_text())
        assert summary["trials"] == 3000

    def test_mc_summary_json(self, tmp_path, capsys):
        path = tmp_path / "small.json"
        path.write_text('{"version": 1, "speeds": [1, 0.5], "jobs": [4, 3]}')
        assert run_cli(["mc", "--instance", str(path), "--trials", "50"]) == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["trials"] == 50
        assert 0 < summary["mean_ratio"] <= 1

    def test_huge_integer_in_instance(self, tmp_path):
        path = tmp_path / "huge.json"
        big = "1" + "0" * 400
        path.write_text(f'{{"version": 1, "speeds": [1], "jobs": [{big}]}}')
        assert run_cli(["opt", "--instance", str(path)]) == 3

    def test_gen_file_matches_stdout(self, tmp_path, capsys):
        out = tmp_path / "rand_ub.json"
        assert run_cli(["gen", "rand-ub", "--n", "5", "--out", str(out)]) == 0
        capsys.readouterr()
        assert run_cli(["gen", "rand-ub", "--n", "5"]) == 0
        assert out.read_text() == capsys.readouterr().out

    def test_mc_csv_file_matches_stdout(self, tmp_path, capsys):
        path = tmp_path / "small.json"
        path.write_text('{"version": 1, "speeds": [1, 0.5], "jobs": [4, 3]}')
        args = ["mc", "--instance", str(path), "--trials", "40", "--format", "csv"]
        out = tmp_path / "mc.csv"
        assert run_cli(args + ["--out", str(out)]) == 0
        capsys.readouterr()
        assert run_cli(args) == 0
        assert out.read_text() == capsys.readouterr().out
