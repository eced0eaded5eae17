"""Command-line interface.

Two subcommands:

``platoonsim run --config FILE [--arch plf|bdl|hybrid]
                 [--seed N | --seeds A..B] [--out DIR] [--log-events]``
    Run one architecture (the config's unless ``--arch`` overrides) for
    one seed or an inclusive seed range, and write ``results.csv`` into
    the output directory (one row per run).  ``--log-events``
    additionally writes ``events_<arch>_<seed>.log`` per run.

``platoonsim compare --config FILE --seeds A..B --out DIR [--log-events]``
    Run all three architectures over the seed range and write one
    combined ``results.csv``.

Exit status: 0 when every run completed, 1 when any run failed
(failures are listed on stderr), 2 on usage errors (unknown flags,
missing or invalid configuration).  Outputs are byte-deterministic for
a given configuration regardless of worker count
(``PLATOONSIM_THREADS`` controls parallelism).
"""

from __future__ import annotations

import argparse
import logging
import os
import re
import sys

from . import batch
from . import config as config_io
from .engine import ARCHITECTURES, ConfigError
from .metrics import export_csv

log = logging.getLogger("platoonsim")

_SEED_RANGE = re.compile(r"^(-?\d+)\.\.(-?\d+)$")


def _seed_range(text: str) -> list[int]:
    match = _SEED_RANGE.match(text)
    if not match:
        raise argparse.ArgumentTypeError(
            f"expected an inclusive range like 1..30, got {text!r}"
        )
    lo, hi = int(match.group(1)), int(match.group(2))
    if hi < lo:
        raise argparse.ArgumentTypeError(
            f"seed range must not be empty, got {text!r}"
        )
    return list(range(lo, hi + 1))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="platoonsim",
        description=(
            "Deterministic discrete-event comparison of platoon "
            "message-relay architectures."
        ),
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="increase log verbosity (-v info, -vv debug)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one architecture")
    run_p.add_argument("--config", required=True, help="configuration file")
    run_p.add_argument(
        "--arch",
        choices=ARCHITECTURES,
        help="override the configured architecture",
    )
    seeds = run_p.add_mutually_exclusive_group()
    seeds.add_argument("--seed", type=int, help="single seed")
    seeds.add_argument(
        "--seeds",
        type=_seed_range,
        metavar="A..B",
        help="inclusive seed range",
    )
    run_p.add_argument("--out", default=".", help="output directory")
    run_p.add_argument(
        "--log-events",
        action="store_true",
        help="write events_<arch>_<seed>.log per run",
    )

    cmp_p = sub.add_parser("compare", help="run all architectures")
    cmp_p.add_argument("--config", required=True, help="configuration file")
    cmp_p.add_argument(
        "--seeds",
        type=_seed_range,
        required=True,
        metavar="A..B",
        help="inclusive seed range",
    )
    cmp_p.add_argument("--out", required=True, help="output directory")
    cmp_p.add_argument(
        "--log-events",
        action="store_true",
        help="write events_<arch>_<seed>.log per run",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = (
        logging.WARNING
        if args.verbose == 0
        else logging.INFO
        if args.verbose == 1
        else logging.DEBUG
    )
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )

    try:
        values = config_io.load_values(args.config)
        config_io.build_engine_config(values)  # fail fast before any run
    except (ConfigError, OSError) as exc:
        print(f"platoonsim: error: {exc}", file=sys.stderr)
        return 2

    if args.command == "run":
        archs = [args.arch or values["run.architecture"]]
        if args.seed is not None:
            seed_list = [args.seed]
        elif args.seeds is not None:
            seed_list = args.seeds
        else:
            seed_list = [values["run.seed"]]
    else:  # compare
        archs = list(ARCHITECTURES)
        seed_list = args.seeds

    out_dir = args.out
    os.makedirs(out_dir, exist_ok=True)
    jobs = []
    for arch in archs:
        for seed in seed_list:
            cfg = config_io.with_overrides(values, architecture=arch, seed=seed)
            log_path = (
                os.path.join(out_dir, f"events_{arch}_{seed}.log")
                if args.log_events
                else None
            )
            jobs.append((cfg, log_path))
    log.info("running %d job(s)", len(jobs))

    results = batch.run_jobs(jobs)
    summaries = [r.summary for r in results if r.summary is not None]
    failures = [r for r in results if r.error is not None]
    if summaries:
        csv_path = os.path.join(out_dir, "results.csv")
        export_csv(summaries, csv_path)
        print(f"wrote {csv_path} ({len(summaries)} runs)")
    for r in failures:
        print(
            f"platoonsim: run failed: arch={r.arch} seed={r.seed}: {r.error}",
            file=sys.stderr,
        )
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
