"""Command-line entry point: ``beamsched run|enumerate|validate``."""
from __future__ import annotations

import argparse
import logging
import sys

from .config import ConfigError, SystemConfig, load_config
from .harness import SCHEDULERS, ExperimentSpec, run_experiment
from .schedulers import DEFAULT_BUDGET, BudgetExceeded


def _load(path):
    return load_config(path) if path else SystemConfig()


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _scheduler_list(text: str) -> tuple[str, ...]:
    names = tuple(s.strip() for s in text.split(",") if s.strip())
    bad = [s for s in names if s not in SCHEDULERS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown scheduler(s): {', '.join(bad)}")
    return names


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="beamsched",
                                     description="mmWave coexistence beam-scheduling simulator")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run Monte-Carlo trials and write result files")
    run.add_argument("--config", help="JSON config file (defaults used if omitted)")
    run.add_argument("--trials", type=int, default=200)
    run.add_argument("--seed", type=_u64, default=None,
                     help="base seed (defaults to the config's rng_seed)")
    run.add_argument("--schedulers", type=_scheduler_list, default=SCHEDULERS,
                     help="comma-separated subset of " + ",".join(SCHEDULERS))
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                     help="max joint schedules exhaustive search may evaluate")
    run.add_argument("--workers", type=int, default=1)
    run.add_argument("--no-traces", action="store_true", help="skip convergence traces")

    enum = sub.add_parser("enumerate", help="print M! and (M!)^N for a config")
    enum.add_argument("--config")

    val = sub.add_parser("validate", help="check a config file and exit")
    val.add_argument("--config", required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = _load(args.config)
        if args.command == "validate":
            print(f"{args.config}: ok")
        elif args.command == "enumerate":
            print(f"sequences per AP (M!): {config.num_sequences}")
            print(f"joint schedules ((M!)^N): {config.joint_space_size}")
        else:
            spec = ExperimentSpec(config, args.schedulers, args.trials, args.seed,
                                  args.out, args.budget, args.workers)
            result = run_experiment(spec, keep_traces=not args.no_traces)
            for name, s in result.summary().items():
                print(f"{name:>10}  mean={s['mean']:.4f}  var={s['variance']:.4f}  "
                      f"evals={s['evaluations_total']}")
    except (ConfigError, BudgetExceeded, ValueError, OSError) as exc:
        print(f"beamsched: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
