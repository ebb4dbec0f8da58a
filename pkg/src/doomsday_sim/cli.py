"""Command-line front end.

Exit codes: 0 success, 1 input/config error, 2 every branch observer-free.
"""

from __future__ import annotations

import argparse
import json
import sys

from .cnf import DimacsError, read_dimacs
from .doomsday import AllObserversDead, ObserverRegister, load_observer
from .pipeline import RunConfig, monte_carlo, run_doomsday, slice_states
from .quantum import format_amplitudes

EXIT_OK, EXIT_ERROR, EXIT_ALL_DEAD = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="doomsday-sim",
                                description="Simulate the post-selected doomsday search on a DIMACS CNF instance.")
    p.add_argument("--input", required=True, metavar="PATH", help="DIMACS CNF file")
    p.add_argument("--observer", metavar="PATH", help="observer spec (JSON)")
    p.add_argument("--mode", choices=("postselect", "montecarlo"), default="postselect")
    p.add_argument("--seed", type=int, default=0, help="unsigned 64-bit RNG seed")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--max-runs", type=int, default=None, help="runs per trial before censoring (default 10*2^n)")
    p.add_argument("--dump-slice", choices=("A", "B", "C"), default=None)
    p.add_argument("--format", choices=("human", "structured"), default="human")
    return p


def slice_dump(config: RunConfig, which: str) -> list[str]:
    slices = slice_states(config)
    if which == "A":
        return format_amplitudes(slices.sigma_a)
    if which == "B":
        return format_amplitudes(slices.sigma_b)
    rows = []
    for b in slices.sigma_c.branches:
        rows.append(f"# branch {b.label} weight {b.weight:.17g}")
        rows.extend(format_amplitudes(b.sa_state, tol=0.0))
    return rows


def _emit(report: dict, dump: list[str] | None, fmt: str) -> None:
    if fmt == "structured":
        if dump is not None:
            report = {**report, "slice_dump": dump}
        sys.stdout.write(json.dumps(report, allow_nan=False) + "\n")
        return
    if dump is not None:
        sys.stdout.write("\n".join(dump) + "\n")
    for key, value in report.items():
        sys.stdout.write(f"{key}: {value}\n")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.dump_slice and args.mode != "postselect":
            raise ValueError("--dump-slice is only valid with --mode postselect")
        formula = read_dimacs(args.input)
        observer = load_observer(args.observer) if args.observer else ObserverRegister()
        config = RunConfig(formula, observer, args.seed, args.mode, args.trials, args.max_runs)
        if args.mode == "postselect":
            report = run_doomsday(config).to_dict()
            dump = slice_dump(config, args.dump_slice) if args.dump_slice else None
        else:
            report, dump = monte_carlo(config).to_dict(), None
    except AllObserversDead as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ALL_DEAD
    except (DimacsError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    _emit(report, dump, args.format)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
