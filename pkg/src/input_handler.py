"""Command line parser; every sub-command shares the output flags."""
from __future__ import annotations

import argparse
from typing import List, Optional

import consts
from commands import COMMANDS

HELP = {
    "xy-scan": "block entropy of the XY chain over a (gamma, lambda) grid",
    "scaling": "entropy against log2 L with the central charge fit",
    "xxz": "Bethe ground states of the XXZ chain and their block entropies",
    "lmg": "LMG entropy surface and its scaling laws",
    "rgflow": "majorization audit of the Ising flow along a field path",
    "mps": "transfer spectrum, RG trajectory and fixed point of a uniform MPS",
    "fit": "least-squares line through two columns of a result file",
}


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="FILE", help="INI file with [model], [grid] and [output]")
    parser.add_argument("--out", metavar="PATH", help="output file, stdout when omitted")
    parser.add_argument("--format", choices=["csv", "json", "svg"], help=f"default {consts.DEFAULT_FORMAT}")
    parser.add_argument("--check", action="store_true", default=None, help="fail the run when a law is off")
    parser.add_argument("--jobs", type=int, help="grid points evaluated at once (default $SPINLAB_JOBS or 1)")
    parser.add_argument("--seed", type=int, help="seed of the Bethe restarts")
    parser.add_argument("--profile", metavar="FILE", help="dump cProfile stats for snakeviz")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")


def _add_model_flags(parser: argparse.ArgumentParser) -> None:
    # values stay strings; setup_run converts and validates them
    parser.add_argument("--gamma")
    parser.add_argument("--lambda", dest="lambda")
    parser.add_argument("--h")
    parser.add_argument("--N", help="chain size, or a comma list")
    parser.add_argument("--L", help="block size, or a comma list")
    parser.add_argument(
        "--grid", action="append", metavar="[NAME=]a:b:n",
        help="grid of one parameter; without NAME the command's main axis",
    )
    parser.add_argument("--model", help="scaling model: xx, ising or xy-critical")
    parser.add_argument("--state", help="built-in MPS state")
    parser.add_argument("--input", metavar="FILE", help="tensor file for mps, result file for fit")
    parser.add_argument("--D", help="bond dimension of symmetric-D2")
    parser.add_argument("--mu")
    parser.add_argument("--theta")
    parser.add_argument("--steps", help="RG steps")
    parser.add_argument("--M", help="modes kept by the flow audit")
    parser.add_argument("--x", help="fit column on the x axis")
    parser.add_argument("--y", help="fit column on the y axis")
    parser.add_argument("--log-x", dest="log_x", action="store_const", const="true", help="fit against log2 x")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spinlab", description="Entanglement in spin chains.")
    parser.add_argument("--version", action="version", version=f"spinlab {consts.VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name in COMMANDS:
        sub = subparsers.add_parser(name, help=HELP[name])
        _add_output_flags(sub)
        _add_model_flags(sub)
    return parser


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    return build_parser().parse_args(argv)
