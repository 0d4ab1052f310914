"""Command line entry point: ``incident-bench exp1|exp2|exp3|synth``.

Exit codes: 0 success, 2 configuration error, 3 data error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import experiments
from .data_model import write_csv
from .errors import DataParseError, DegenerateClassError, SchemaError, UnknownLevelError
from .synth import GeneratorProfile, generate, table_v_profile

EXIT_CONFIG = 2
EXIT_DATA = 3
_DATA_ERRORS = (SchemaError, DataParseError, UnknownLevelError, DegenerateClassError, FileNotFoundError)


def _csv_list(text):
    return tuple(t.strip() for t in text.split(",") if t.strip())


def _add_experiment_args(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--data", help="CSV file with a header row and a 0/1 label column")
    src.add_argument("--synth", metavar="PROFILE",
                     help="'table-v' or a generator profile JSON document")
    p.add_argument("--schema", help="schema JSON (required with --data)")
    p.add_argument("--scale", type=float, default=1.0, help="synthetic scale in (0, 1]")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="reports", help="output directory")
    p.add_argument("--format", choices=("csv", "md"), default="csv")
    p.add_argument("--algos", type=_csv_list, default=experiments.ALGORITHMS)
    p.add_argument("--train-fraction", type=float, default=0.9)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="incident-bench", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p1 = sub.add_parser("exp1", help="algorithm comparison on undersampled data")
    _add_experiment_args(p1)
    p1.add_argument("--split-first", action="store_true",
                    help="split before undersampling instead of after")

    p2 = sub.add_parser("exp2", help="RUS vs statistical ROS vs SMOTE")
    _add_experiment_args(p2)
    p2.add_argument("--strategies", type=_csv_list, default=experiments.DEFAULT_STRATEGIES,
                    help="comma list of rus, ros-stats, smote[:k]")

    p3 = sub.add_parser("exp3", help="single-variable screening")
    _add_experiment_args(p3)
    p3.add_argument("--screen-resample", choices=("rus", "none"), default="rus")
    p3.add_argument("--variables", type=_csv_list, default=None,
                    help="comma list of encoded column names (default: all)")

    ps = sub.add_parser("synth", help="write a synthetic dataset and its schema")
    ps.add_argument("--profile", default="table-v")
    ps.add_argument("--scale", type=float, default=1.0)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--out", required=True, help="CSV output path")
    ps.add_argument("--schema-out", required=True, help="schema JSON output path")
    return parser


def _config(args) -> experiments.ExperimentConfig:
    return experiments.ExperimentConfig(
        data_path=args.data,
        schema_path=args.schema,
        synth_profile=args.synth,
        scale=args.scale,
        seed=args.seed,
        train_fraction=args.train_fraction,
        algos=args.algos,
        strategies=getattr(args, "strategies", experiments.DEFAULT_STRATEGIES),
        out_dir=args.out,
        fmt=args.format,
        screen_resample=getattr(args, "screen_resample", "rus"),
        split_first=getattr(args, "split_first", False),
        variables=getattr(args, "variables", None),
    )


def _run(args) -> list[Path]:
    if args.command == "synth":
        profile = table_v_profile() if args.profile == "table-v" else GeneratorProfile.load(args.profile)
        data = generate(profile, args.scale, args.seed)
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        write_csv(data, args.out)
        data.schema.save(args.schema_out)
        return [Path(args.out), Path(args.schema_out)]

    cfg = _config(args)
    data = experiments.load_data(cfg)
    if args.command == "exp1":
        reports = [experiments.run_experiment1(cfg, data)]
    elif args.command == "exp2":
        reports = experiments.run_experiment2(cfg, data)
    else:
        reports = experiments.run_experiment3(cfg, data)
    return experiments.write_reports(reports, cfg)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        # data errors subclass ValueError, so they are caught first
        paths = _run(args)
    except _DATA_ERRORS as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ValueError, KeyError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for p in paths:
        print(p)
    return 0


if __name__ == "__main__":
    sys.exit(main())
