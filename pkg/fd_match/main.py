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

import argparse
import logging
import sys
from typing import List, Optional

from fd_match import analysis, harness, parser
from fd_match.adversary import (
    check_det_ub_conditions,
    det_ub_sequence,
    greedy_hard_instance,
    rand_ub_family,
    write_sidecar,
)
from fd_match.constants import ABS_TOL, LOGGER_NAME
from fd_match.core import dump_instance, load_instance, save_instance, sorted_opt
from fd_match.exceptions import FdMatchException
from fd_match.online import IntervalParams, run_interval, run_interval_random
from fd_match.parser import Family, OutputFormat
from fd_match.utils import (
    convert_option_name,
    dumps_csv_record,
    dumps_json,
    sidecar_path,
    write_text,
)

logging.basicConfig(level=logging.INFO, format="%(name)s - %(levelname)s - %(message)s")
logger = logging.getLogger(LOGGER_NAME)


def report_output(record: dict, args: argparse.Namespace) -> None:
    if args.format == OutputFormat.CSV:
        text = dumps_csv_record(record)
    else:
        text = dumps_json(record)
    write_text(text, args.out)


### Handlers ###


def generate_instance(args):
    params = None
    if args.family == Family.GREEDY_HARD:
        instance = greedy_hard_instance(args.eps)
    elif args.family == Family.DET_UB:
        recurrence = det_ub_sequence(args.delta)
        instance = recurrence.instance
        params = recurrence.to_dict()
    else:
        distribution = rand_ub_family(args.n)
        instance = distribution.instance
        params = distribution.to_dict()

    if args.out is None:
        write_text(dump_instance(instance))
    else:
        save_instance(instance, args.out)
    if params is None:
        return
    if args.out is None:
        logger.warning("No --out given; the parameter sidecar is not written.")
        return
    write_sidecar(sidecar_path(args.out, "_params.json"), params)


def compute_opt(args):
    instance = load_instance(args.instance)
    value, pairing = sorted_opt(instance)
    report_output({"opt_value": value, "pairing": [list(p) for p in pairing]}, args)


def run_algorithm(args):
    instance = load_instance(args.instance)
    if args.algorithm == harness.Algorithm.INTERVAL:
        if args.x is not None:
            trace, report = run_interval(instance, IntervalParams(args.c, args.x))
        else:
            trial = args.trial if args.trial is not None else 0
            trace, report = run_interval_random(instance, args.c, args.seed, trial)
    else:
        algorithm = harness.deterministic_algorithm(
            args.algorithm, tie_rule=args.tie, gamma=args.gamma
        )
        trace, report = algorithm(instance)

    record = {"algorithm": convert_option_name(args.algorithm.name.lower())}
    record.update(report.to_dict())
    record.update(trace.to_dict())
    report_output(record, args)


def evaluate_bound(args):
    branches = analysis.bound_branches(args.c, allow_below_e=args.allow_below_e)
    report_output(branches.to_dict(), args)


def search_cstar(args):
    cstar, bound = analysis.find_cstar(args.lo, args.hi, args.tol)
    report_output({"c_star": cstar, "bound": bound}, args)


def certify_bound(args):
    record = {
        "c": args.c,
        "grid": args.grid,
        "t_grid": args.t_grid,
        "ratio_all1_max_violation": analysis.verify_ratio_all1(args.c, args.grid),
        "f_claim_max_violation": analysis.verify_f_claim(args.c, args.t_grid),
        "geometric_tail_max_violation": analysis.verify_geometric_tail_claim(
            args.c, args.grid
        ),
    }
    record["certified"] = all(
        v <= ABS_TOL for k, v in record.items() if k.endswith("_max_violation")
    )
    if not record["certified"]:
        logger.warning(f"Certification failed at c = {args.c}")
    report_output(record, args)


def estimate_ratio(args):
    instance = load_instance(args.instance)
    stats = harness.monte_carlo(
        instance, args.c, args.trials, args.seed, args.threads, args.chunk_size
    )
    if args.format == OutputFormat.CSV and args.out is not None:
        stats.export_to_csv(args.out)
        write_text(dumps_json(stats.summary()), sidecar_path(args.out, "_summary.json"))
    elif args.format == OutputFormat.CSV:
        write_text(stats.to_csv())
    else:
        write_text(dumps_json(stats.summary()), args.out)
    stats.pretty_print()


def deterministic_lower_bound(args):
    recurrence = det_ub_sequence(args.delta)
    conditions = check_det_ub_conditions(recurrence.a, recurrence.r, recurrence.w)
    if not conditions.ok:
        logger.warning(f"det-ub condition violated: {conditions.first_violation}")
    algorithm = harness.deterministic_algorithm(
        args.algorithm, tie_rule=args.tie, c=args.c, gamma=args.gamma
    )
    worst = harness.prefix_worst_ratio(recurrence.instance, algorithm)

    record = {
        "delta": recurrence.delta,
        "a": recurrence.a,
        "r": recurrence.r,
        "n": recurrence.n,
        "conditions_ok": conditions.ok,
    }
    record.update(worst.to_dict())
    report_output(record, args)


def randomized_lower_bound(args):
    report_output(harness.rand_lower_bound(args.n).to_dict(), args)


_HANDLERS = {
    "gen": generate_instance,
    "opt": compute_opt,
    "run": run_algorithm,
    "bound": evaluate_bound,
    "cstar": search_cstar,
    "certify": certify_bound,
    "mc": estimate_ratio,
    "lb-det": deterministic_lower_bound,
    "lb-rand": randomized_lower_bound,
}


# Separate function that can raise exceptions used for testing
# to assert correct errors and messages.
def run(argv: Optional[List[str]] = None):
    args = parser.parse_args(argv)
    logger.setLevel(logging.DEBUG if args.verbose else logging.INFO)
    _HANDLERS[args.subcommand](args)


def run_cli(argv: Optional[List[str]] = None) -> int:
    # Interactive use will catch exceptions and log formatted errors rather than tracebacks.
    try:
        run(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 0
    except FdMatchException as e:
        logger.error(f"{e}")
        return e.exit_code
    except Exception as e:
        logger.error(f"{type(e).__name__}: {e}")
        return 1

    return 0


def main():
    return run_cli(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
