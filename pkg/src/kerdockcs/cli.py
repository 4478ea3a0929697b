"""Command-line entry point: ``kerdockcs run`` and ``kerdockcs layout``.

Exit codes: 0 success, 1 usage or input error, 2 solver non-convergence.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .experiment import SCHEMES, ExperimentConfig, print_layout, run_experiment
from .multiscale import InvalidStrategy, MultiscaleOperator, parse_strategy
from .pgm import PGMError
from .solver import SolverConfig

EXIT_OK, EXIT_USAGE, EXIT_NONCONVERGED = 0, 1, 2

_RUN_KEYS = {"image", "scheme", "strategy", "budget", "seed", "out", "resample"}
_SOLVER_KEYS = {"max_iterations", "tolerance", "relaxation", "shrink"}


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kerdockcs", description="Deterministic multi-scale +-1 compressive imaging."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="sample an image and reconstruct it by basis pursuit")
    run.add_argument("--config", type=Path, help="JSON file; flags override its values")
    run.add_argument("--image", type=Path)
    run.add_argument("--scheme", choices=SCHEMES)
    run.add_argument("--strategy", help='per-scale powers, e.g. "0,0,0,0,0,1,2,3"')
    run.add_argument("--budget", type=int, help="total 2D measurement count (baselines)")
    run.add_argument("--seed", type=int)
    run.add_argument("--tol", type=float, dest="tolerance")
    run.add_argument("--max-iters", type=int, dest="max_iterations")
    run.add_argument("--relaxation", type=float)
    run.add_argument("--shrink", type=float)
    run.add_argument("--out", type=Path, help="output directory (metrics also go to stdout)")
    run.add_argument("--resample", action="store_true", default=None,
                     help="crop and resample to a power-of-two square instead of rejecting")
    run.add_argument("-v", "--verbose", action="store_true")

    lay = sub.add_parser("layout", help="print the measurement layout of a strategy")
    lay.add_argument("strategy", help='per-scale powers, e.g. "0,0,0,0,0,0,0,1,2,3"')
    lay.add_argument("-m", type=int, help="signal log2 length (defaults to strategy length)")
    lay.add_argument("--json", action="store_true", help="emit the layout as JSON")
    return parser


def _merge(args) -> ExperimentConfig:
    values: dict = {}
    if args.config is not None:
        loaded = json.loads(args.config.read_text())
        solver = loaded.pop("solver", {})
        unknown = set(loaded) - _RUN_KEYS - _SOLVER_KEYS
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        values.update(solver)
        values.update(loaded)
    for key in _RUN_KEYS | _SOLVER_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    if "image" not in values:
        raise ValueError("an image is required (--image or config file)")
    solver = SolverConfig.from_dict({k: values.pop(k) for k in _SOLVER_KEYS & set(values)})
    return ExperimentConfig(solver=solver, **values)


def _cmd_run(args) -> int:
    cfg = _merge(args)
    report, _ = run_experiment(cfg)
    print(report.to_json())
    if not report.converged:
        print("warning: basis pursuit did not converge", file=sys.stderr)
        return EXIT_NONCONVERGED
    return EXIT_OK


def _cmd_layout(args) -> int:
    P = parse_strategy(args.strategy)
    m = len(P) if args.m is None else args.m
    if args.json:
        print(MultiscaleOperator.from_strategy(m, P).layout.to_json(indent=2))
    else:
        print(print_layout(P, m))
    return EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_layout(args)
    except InvalidStrategy as exc:
        print("invalid strategy:", file=sys.stderr)
        for v in exc.violations:
            print(f"  - {v}", file=sys.stderr)
        return EXIT_USAGE
    except (PGMError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
