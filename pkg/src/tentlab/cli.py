"""Command-line front end.

Subcommands: iterate, cycle, basin, backward, histogram, errsum, repro.
Exit status: 0 on success, 1 for usage errors, 2 for runtime failures.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import harness
from .harness import DEFAULT_BINS, DEFAULT_SEED, ExperimentConfig, emit_report
from .preimage import DEFAULT_CAP_BITS

USAGE_ERROR = 1
RUNTIME_ERROR = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _decimal_arg(text):
    from .fixedbin import parse_decimal
    try:
        parse_decimal(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    return text


def _backend_arg(text):
    from .dynamics import backend_from_label
    try:
        backend_from_label(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    return text


def _add_common(sub, *, x0=None, steps=1000, backend=None):
    sub.add_argument("--N", dest="bound", default="100", type=_decimal_arg,
                     help="domain bound (decimal string, default 100)")
    sub.add_argument("--a", dest="slope", default="2", type=_decimal_arg,
                     help="slope (decimal string, default 2)")
    if x0 is not None:
        sub.add_argument("--x0", default=x0, type=_decimal_arg,
                         help=f"start value (default {x0})")
    if backend is not None:
        sub.add_argument("--backend", default=backend, type=_backend_arg,
                         help="rational | fixed:p,q | f64 | f32 "
                              f"(default {backend})")
    sub.add_argument("--steps", type=int, default=steps,
                     help=f"step count / search budget (default {steps})")
    sub.add_argument("--out", default=None,
                     help="output directory (default out/<command>)")


def build_parser() -> _Parser:
    parser = _Parser(prog="tentlab",
                     description="finite-precision tent-map experiments")
    cmds = parser.add_subparsers(dest="command", required=True)

    sub = cmds.add_parser("iterate", parents=[], help="write a trajectory")
    _add_common(sub, x0="0.4", backend="f64")

    sub = cmds.add_parser("cycle", help="find transient, period, and cycle")
    _add_common(sub, x0="0.4", steps=1_000_000, backend="f64")

    sub = cmds.add_parser("basin", help="integer preimage forests of all cycles")
    _add_common(sub)

    sub = cmds.add_parser("backward", help="random backward walk")
    _add_common(sub, x0="67.2", steps=1000)
    sub.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sub.add_argument("--cap-bits", type=int, default=DEFAULT_CAP_BITS)

    sub = cmds.add_parser("histogram",
                          help="bin backward-walk values (or --input values)")
    _add_common(sub, x0="67.2", steps=60_000)
    sub.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sub.add_argument("--cap-bits", type=int, default=DEFAULT_CAP_BITS)
    sub.add_argument("--bins", type=int, default=DEFAULT_BINS)
    sub.add_argument("--input", default=None,
                     help="optional file with one decimal value per line")

    sub = cmds.add_parser("errsum", help="error accumulation against the exact orbit")
    _add_common(sub, x0="0.4", backend="fixed:1,4")

    sub = cmds.add_parser("repro", help="rerun a canned experiment")
    sub.add_argument("experiment", choices=sorted(harness.EXPERIMENTS),
                     metavar="experiment",
                     help=", ".join(sorted(harness.EXPERIMENTS)))
    sub.add_argument("--out", default=None)
    return parser


def _out_dir(args) -> Path:
    if args.out:
        return Path(args.out)
    name = getattr(args, "experiment", None) or args.command
    return Path("out") / name


def _config(args, experiment: str, **overrides) -> ExperimentConfig:
    fields = dict(
        experiment=experiment,
        bound=args.bound,
        slope=getattr(args, "slope", "2"),
        x0=getattr(args, "x0", None),
        backend=getattr(args, "backend", None),
        steps=args.steps,
        bins=getattr(args, "bins", DEFAULT_BINS),
        seed=getattr(args, "seed", DEFAULT_SEED),
        cap_bits=getattr(args, "cap_bits", DEFAULT_CAP_BITS),
    )
    fields.update(overrides)
    return ExperimentConfig(**fields)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = _out_dir(args)
    try:
        if args.command == "repro":
            manifest = harness.run_experiment(args.experiment, out)
        else:
            cfg = _config(args, f"cli-{args.command}")
            if args.command == "iterate":
                files, summary = harness.iterate_files(cfg)
            elif args.command == "cycle":
                files, summary = harness.orbit_files(cfg)
            elif args.command == "basin":
                files, summary = harness.basin_files(cfg)
            elif args.command == "backward":
                files, summary = harness.walk_files(cfg)
            elif args.command == "histogram":
                values = None
                if args.input:
                    from .fixedbin import parse_decimal
                    text = Path(args.input).read_text()
                    values = [parse_decimal(line) for line in text.split()]
                files, summary = harness.histogram_files(cfg, values=values)
            elif args.command == "errsum":
                files, summary = harness.errsum_files(cfg)
            else:  # pragma: no cover - argparse enforces the choices
                raise AssertionError(args.command)
            manifest = emit_report(
                out, files, {"config": cfg.to_json_dict(), "results": summary}
            )
        print(manifest)
        return 0
    except (ValueError, OverflowError, OSError) as exc:
        print(f"tentlab: {exc}", file=sys.stderr)
        return RUNTIME_ERROR


if __name__ == "__main__":
    sys.exit(main())
