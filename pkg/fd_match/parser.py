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
import math
from enum import Enum, auto
from pathlib import Path
from typing import List, Optional, Tuple

import fd_match.utils as utils
from fd_match.constants import (
    DEFAULT_C,
    DEFAULT_CHUNK_SIZE,
    DEFAULT_DELTA,
    DEFAULT_EPS,
    DEFAULT_GAMMA,
    DEFAULT_RAND_UB_N,
    DEFAULT_SEED,
    DEFAULT_T_GRID,
    DEFAULT_THREADS,
    DEFAULT_TRIALS,
    DEFAULT_U0_GRID,
    LOGGER_NAME,
)
from fd_match.harness import Algorithm
from fd_match.online import TieRule

from . import __version__

logger = logging.getLogger(LOGGER_NAME)


class OutputFormat(Enum):
    JSON = auto()
    CSV = auto()


class Family(Enum):
    GREEDY_HARD = auto()
    DET_UB = auto()
    RAND_UB = auto()


def _seed(value: str) -> int:
    try:
        seed = int(value, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed: '{value}'")
    if not 0 <= seed < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return seed


def _offsets(value: str) -> Tuple[float, ...]:
    try:
        return tuple(float(v) for v in value.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers: '{value}'")


def _check_conditional_args(
    parser: argparse.ArgumentParser, args: argparse.Namespace
) -> None:
    """
    Check for conditional args and raise an error if they are not set.
    """
    if args.subcommand == "run":
        if args.algorithm == "interval":
            if args.x is not None and args.trial is not None:
                logger.warning("The --trial option is ignored when --x is given.")
        elif args.x is not None:
            logger.warning(
                "The --x option is ignored when not using the 'interval' algorithm."
            )
    if args.subcommand == "mc" and args.threads < 1:
        parser.error("The --threads option must be at least 1.")
    if args.subcommand == "cstar" and not args.lo < args.hi:
        parser.error("The --lo option must be smaller than --hi.")


def _convert_str_to_enum_entry(args, option, enum):
    """
    Convert string option to corresponding enum entry
    """
    attr_val = getattr(args, option, None)
    if attr_val is not None:
        setattr(args, f"{option}", utils.get_enum_entry(attr_val, enum))
    return args


### Parsers ###


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common_group = common.add_argument_group("Common")

    common_group.add_argument(
        "--seed",
        type=_seed,
        default=DEFAULT_SEED,
        help="Unsigned 64-bit seed for the interval algorithm's offsets.",
    )

    common_group.add_argument(
        "--format",
        type=str,
        choices=utils.get_enum_names(OutputFormat),
        default="json",
        help="Format of the result written to --out or stdout.",
    )

    common_group.add_argument(
        "--out",
        type=Path,
        default=None,
        help="Path of the result file. Results go to stdout when omitted.",
    )

    common_group.add_argument(
        "-v",
        "--verbose",
        action="store_true",
        help="Enables verbose mode.",
    )
    return common


def _add_algorithm_args(parser, default_algorithm: str):
    algorithm_group = parser.add_argument_group("Algorithm")

    algorithm_group.add_argument(
        "--algorithm",
        type=str,
        choices=utils.get_enum_names(Algorithm),
        default=default_algorithm,
        help="The online algorithm to run.",
    )

    algorithm_group.add_argument(
        "--tie",
        type=str,
        choices=utils.get_enum_names(TieRule),
        default="prefer-fastest",
        help="How greedy breaks ties between machines with equal gain.",
    )

    algorithm_group.add_argument(
        "--c",
        type=float,
        default=DEFAULT_C,
        help="Base of the interval algorithm's geometric intervals.",
    )

    algorithm_group.add_argument(
        "--gamma",
        type=float,
        default=DEFAULT_GAMMA,
        help="Growth factor the threshold algorithm requires on the fastest machine.",
    )


def _add_gen_parser(subparsers, common):
    gen = subparsers.add_parser(
        "gen", parents=[common], help="Generate an adversarial instance."
    )
    gen.add_argument(
        "family",
        type=str,
        choices=utils.get_enum_names(Family),
        help="The instance family.",
    )

    family_group = gen.add_argument_group("Family")
    family_group.add_argument(
        "--eps",
        type=float,
        default=DEFAULT_EPS,
        help="Slow machine speed is eps/2 (greedy-hard).",
    )
    family_group.add_argument(
        "--delta",
        type=float,
        default=DEFAULT_DELTA,
        help="Imaginary part squared of the recurrence roots (det-ub).",
    )
    family_group.add_argument(
        "--n",
        type=int,
        default=DEFAULT_RAND_UB_N,
        help="Length of the doubling job sequence (rand-ub).",
    )


def _add_instance_arg(parser):
    parser.add_argument(
        "--instance",
        type=Path,
        required=True,
        help="Path to an instance file.",
    )


def _add_opt_parser(subparsers, common):
    opt = subparsers.add_parser(
        "opt", parents=[common], help="Compute the offline optimum of an instance."
    )
    _add_instance_arg(opt)


def _add_run_parser(subparsers, common):
    run = subparsers.add_parser(
        "run", parents=[common], help="Run an online algorithm on an instance."
    )
    _add_instance_arg(run)
    _add_algorithm_args(run, "greedy")

    run.add_argument(
        "--x",
        type=_offsets,
        default=None,
        help="Comma-separated interval offsets in (0, 1], fastest machine first. "
        "When omitted the offsets are drawn from --seed and --trial.",
    )
    run.add_argument(
        "--trial",
        type=int,
        default=None,
        help="Trial index of the random offsets (default 0).",
    )


def _add_bound_parser(subparsers, common):
    bound = subparsers.add_parser(
        "bound", parents=[common], help="Evaluate the competitive bound at c."
    )
    bound.add_argument("--c", type=float, default=DEFAULT_C, help="Interval base.")
    bound.add_argument(
        "--allow-below-e",
        action="store_true",
        help="Evaluate the formula for c < e as well. The result is not a guarantee.",
    )


def _add_cstar_parser(subparsers, common):
    cstar = subparsers.add_parser(
        "cstar", parents=[common], help="Find the c maximizing the bound."
    )
    cstar.add_argument("--lo", type=float, default=math.e, help="Left end, at least e.")
    cstar.add_argument("--hi", type=float, default=6.0, help="Right end.")
    cstar.add_argument("--tol", type=float, default=1e-6, help="Search tolerance.")


def _add_certify_parser(subparsers, common):
    certify = subparsers.add_parser(
        "certify",
        parents=[common],
        help="Check the inequalities behind the bound on uniform grids.",
    )
    certify.add_argument("--c", type=float, default=DEFAULT_C, help="Interval base.")
    certify.add_argument(
        "--grid",
        type=int,
        default=DEFAULT_U0_GRID,
        help="Number of u0 grid points in [1, c].",
    )
    certify.add_argument(
        "--t-grid",
        type=int,
        default=DEFAULT_T_GRID,
        help="Number of t grid points in [0, 1].",
    )


def _add_mc_parser(subparsers, common):
    mc = subparsers.add_parser(
        "mc",
        parents=[common],
        help="Estimate the interval algorithm's ratio by Monte-Carlo.",
    )
    _add_instance_arg(mc)
    mc.add_argument("--c", type=float, default=DEFAULT_C, help="Interval base.")
    mc.add_argument(
        "--trials", type=int, default=DEFAULT_TRIALS, help="Number of trials."
    )
    mc.add_argument(
        "--threads",
        type=int,
        default=DEFAULT_THREADS,
        help="Worker threads. Results do not depend on this value.",
    )
    mc.add_argument(
        "--chunk-size",
        type=int,
        default=DEFAULT_CHUNK_SIZE,
        help="Trials simulated together in one batch.",
    )


def _add_lb_det_parser(subparsers, common):
    lb_det = subparsers.add_parser(
        "lb-det",
        parents=[common],
        help="Worst prefix ratio of a deterministic algorithm on the det-ub instance.",
    )
    lb_det.add_argument(
        "--delta", type=float, default=DEFAULT_DELTA, help="Recurrence parameter."
    )
    _add_algorithm_args(lb_det, "greedy")


def _add_lb_rand_parser(subparsers, common):
    lb_rand = subparsers.add_parser(
        "lb-rand",
        parents=[common],
        help="Best deterministic value on the prefix distribution.",
    )
    lb_rand.add_argument(
        "--n", type=int, default=DEFAULT_RAND_UB_N, help="Sequence length."
    )


### Entrypoint ###


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="fd-match",
        description="CLI to study online matching with free disposal on related machines",
    )
    parser.add_argument(
        "--version",
        action="version",
        version="%(prog)s " + __version__,
        help=f"Prints the version and exits.",
    )

    common = _common_parser()
    subparsers = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")
    subparsers.required = True
    _add_gen_parser(subparsers, common)
    _add_opt_parser(subparsers, common)
    _add_run_parser(subparsers, common)
    _add_bound_parser(subparsers, common)
    _add_cstar_parser(subparsers, common)
    _add_certify_parser(subparsers, common)
    _add_mc_parser(subparsers, common)
    _add_lb_det_parser(subparsers, common)
    _add_lb_rand_parser(subparsers, common)

    args = parser.parse_args(argv)
    _check_conditional_args(parser, args)
    args = _convert_str_to_enum_entry(args, "format", OutputFormat)
    args = _convert_str_to_enum_entry(args, "family", Family)
    args = _convert_str_to_enum_entry(args, "algorithm", Algorithm)
    args = _convert_str_to_enum_entry(args, "tie", TieRule)

    return args
