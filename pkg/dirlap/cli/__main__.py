"""Command-line entry point for dirlap."""

import argparse
import logging
import sys
from collections.abc import Sequence
from typing import Optional

from pydantic import ValidationError

from dirlap.cli.commands import COMMANDS, EXIT_USAGE
from dirlap.cli.config import RunConfig
from dirlap.core.spectra import SpectralError

logger = logging.getLogger(__name__)

GENERATED_KINDS = ["z-line", "symmetric-line", "directed-cycle", "symmetric-random", "circulation-random"]


def _multipliers(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from e


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dirlap",
        description="Laplacians of directed weighted graphs: checks, spectra, Cheeger constants.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    for name in COMMANDS:
        sub = subparsers.add_parser(name)
        sub.add_argument("--input", type=str, help="graph file")
        sub.add_argument("--gen", choices=GENERATED_KINDS, help="generate the graph instead")
        sub.add_argument("--radius", type=int, help="window radius for line generators")
        sub.add_argument("--size", type=int, default=12, help="vertex count for cycle/random generators")
        sub.add_argument("--seed", type=int, default=0)
        sub.add_argument("--forward-weight", type=float, default=1.0)
        sub.add_argument("--backward-weight", type=float, default=0.0)
        sub.add_argument("--angles", type=int, default=360, help="numerical-range sample count")
        sub.add_argument("--n-max", type=int, help="largest filtration level n")
        sub.add_argument(
            "--k-schedule",
            type=_multipliers,
            default=[2, 3, 4],
            help="comma-separated multipliers: k = multiplier·n",
        )
        sub.add_argument("--tol-beta", type=float, default=None, help="tolerance on |β⁺ - β⁻|")
        sub.add_argument("--out", type=str, default="out", help="output directory")
        sub.add_argument("--threads", type=int, help="worker cap (overrides DIRLAP_THREADS)")
        sub.add_argument("--verbose", "-v", action="store_true")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = {
        "command": args.command,
        "input": args.input,
        "gen": args.gen,
        "radius": args.radius,
        "size": args.size,
        "seed": args.seed,
        "forward_weight": args.forward_weight,
        "backward_weight": args.backward_weight,
        "angles": args.angles,
        "n_max": args.n_max,
        "k_schedule": tuple(args.k_schedule),
        "out": args.out,
        "verbose": args.verbose,
        "threads": args.threads,
    }
    if args.tol_beta is not None:
        values["tol_beta"] = args.tol_beta
    return RunConfig(**values)


def run(config: RunConfig) -> int:
    """Execute one configured command; errors become exit code 1 with a message on stderr."""
    try:
        return COMMANDS[config.command](config)
    except (ValueError, OSError, SpectralError) as e:
        logger.debug("Command failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else 0

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s - %(levelname)s - %(name)s - %(message)s",
    )

    try:
        config = config_from_args(args)
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    return run(config)


def entry_point() -> None:
    """Console-script entry point."""
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
