"""Command-line interface.

Subcommands:
  extract           compute descriptor features for a directory-per-class dataset
  evaluate          run a split protocol over a saved feature matrix
  confusion         dump the confusion matrix of a results file as CSV
  analyze-logistic  power-series vs direct-iteration comparison report
  synth             generate the synthetic grating dataset

Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from .datasets import ingest
from .descriptor import DescriptorConfig
from .errors import DataError, NumericalError
from .experiment import extract_feature_set, run_rounds, results_json
from .features_io import read_features, write_features
from .lbp import LbpParams
from .lda import DEFAULT_LAMBDA_GRID
from .logistic_series import series_orbit_check
from .maps import parse_map_spec
from .synth import generate_dataset


def _parse_lbp(text: str) -> LbpParams:
    try:
        points_text, radius_text = text.split(",")
        return LbpParams(points=int(points_text), radius=float(radius_text))
    except (ValueError, TypeError):
        raise argparse.ArgumentTypeError(
            f"expected POINTS,RADIUS (e.g. 8,1), got {text!r}") from None


def _parse_scales(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad scales list {text!r}") from None


def _parse_map(text: str):
    try:
        return parse_map_spec(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _parse_pca(text: str):
    if text == "auto":
        return "auto"
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"--pca expects 'auto' or a positive integer, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chaostex",
                                     description="chaos-map texture descriptors")
    sub = parser.add_subparsers(dest="command", required=True)

    p_extract = sub.add_parser("extract", help="extract features for a dataset")
    p_extract.add_argument("--data", required=True, help="dataset root (one directory per class)")
    p_extract.add_argument("--map", required=True, type=_parse_map,
                           help="map spec, e.g. logistic:mu=3.8 or circle:mu=0.2,nu=0.5")
    p_extract.add_argument("--n-iter", type=int, default=10)
    p_extract.add_argument("--delta", type=float, default=0.1)
    p_extract.add_argument("--lbp", type=_parse_lbp, action="append", default=None,
                           help="POINTS,RADIUS; repeat for several neighborhoods (default 8,1)")
    p_extract.add_argument("--scales", type=_parse_scales, default=(1.0,),
                           help="comma list of downsampling factors, e.g. 1.0,0.75,0.5")
    p_extract.add_argument("--out", required=True,
                           help="output file (.csv, or binary with .json sidecar)")
    p_extract.add_argument("--no-cache", action="store_true",
                           help="do not cache per-image features beside the dataset")
    p_extract.add_argument("--skip-bad", action="store_true",
                           help="skip unreadable images instead of aborting")
    p_extract.set_defaults(func=cmd_extract)

    p_eval = sub.add_parser("evaluate", help="evaluate a saved feature matrix")
    p_eval.add_argument("--features", required=True)
    p_eval.add_argument("--protocol", required=True, choices=("grouped", "half"))
    p_eval.add_argument("--rounds", type=int, default=10)
    p_eval.add_argument("--seed", type=int, default=0)
    p_eval.add_argument("--pca", type=_parse_pca, default="auto")
    p_eval.add_argument("--lambda-grid", type=float, nargs="+",
                        default=list(DEFAULT_LAMBDA_GRID))
    p_eval.add_argument("--out", required=True, help="results JSON path")
    p_eval.set_defaults(func=cmd_evaluate)

    p_confusion = sub.add_parser("confusion", help="confusion matrix CSV from results")
    p_confusion.add_argument("--results", required=True)
    p_confusion.add_argument("--out", required=True)
    p_confusion.set_defaults(func=cmd_confusion)

    p_analyze = sub.add_parser("analyze-logistic",
                               help="compare power-series predictions with direct iteration")
    p_analyze.add_argument("--mu", type=float, default=3.8)
    p_analyze.add_argument("--order", type=int, default=4)
    p_analyze.add_argument("--steps", type=int, default=5)
    p_analyze.add_argument("--points", type=int, default=21,
                           help="number of starting points on the valid x0 range")
    p_analyze.add_argument("--out", required=True, help="CSV report path")
    p_analyze.set_defaults(func=cmd_analyze_logistic)

    p_synth = sub.add_parser("synth", help="generate the synthetic grating dataset")
    p_synth.add_argument("--out", required=True)
    p_synth.add_argument("--per-class", type=int, default=40)
    p_synth.add_argument("--size", type=int, default=64)
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.set_defaults(func=cmd_synth)
    return parser


def cmd_extract(args) -> int:
    index = ingest(args.data, skip_bad=args.skip_bad)
    config = DescriptorConfig(
        map_spec=args.map,
        n_iter=args.n_iter,
        delta=args.delta,
        lbp_params=tuple(args.lbp) if args.lbp else (LbpParams(),),
        scales=args.scales,
    )
    features = extract_feature_set(index, config, use_cache=not args.no_cache)
    write_features(args.out, features)
    print(f"wrote {features.matrix.shape[0]} x {features.matrix.shape[1]} "
          f"features to {args.out}")
    return 0


def cmd_evaluate(args) -> int:
    features = read_features(args.features)
    protocol = "grouped_one_train" if args.protocol == "grouped" else "random_half"
    echo = {"descriptor": features.config, "protocol": protocol,
            "rounds": args.rounds, "seed": args.seed, "pca": args.pca,
            "lambda_grid": list(args.lambda_grid)}
    result = run_rounds(features.matrix, features.labels, features.groups,
                        protocol, rounds=args.rounds, seed=args.seed,
                        pca=args.pca, lambda_grid=tuple(args.lambda_grid),
                        config_echo=echo)
    Path(args.out).write_text(results_json(result))
    print(f"accuracy {result.mean_accuracy:.4f} +- {result.std_accuracy:.4f} "
          f"over {len(result.per_round_accuracy)} round(s)")
    return 0


def cmd_confusion(args) -> int:
    try:
        results = json.loads(Path(args.results).read_text())
        labels = results["labels"]
        confusion = results["confusion"]
    except (OSError, KeyError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read results file {args.results}: {exc}") from exc
    with Path(args.out).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(labels)
        for row in confusion:
            writer.writerow([int(v) for v in row])
    print(f"wrote {len(labels)}x{len(labels)} confusion matrix to {args.out}")
    return 0


def cmd_analyze_logistic(args) -> int:
    if args.mu <= 1.0:
        raise DataError(f"analysis requires mu > 1, got {args.mu}")
    x0_max = min(1.0, (args.mu - 1.0) / 4.0)
    grid = np.linspace(0.0, x0_max, args.points)
    with Path(args.out).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x0", "n", "direct", "series", "closed_approx", "abs_error"])
        for x0 in grid:
            report = series_orbit_check(float(x0), args.mu, args.steps, order=args.order)
            for row in report.rows:
                writer.writerow([repr(float(x0)), row.step, repr(row.direct),
                                 repr(row.series), repr(row.closed), repr(row.abs_error)])
    print(f"wrote series comparison for {args.points} starting points to {args.out}")
    return 0


def cmd_synth(args) -> int:
    written = generate_dataset(args.out, per_class=args.per_class,
                               size=args.size, seed=args.seed)
    print(f"wrote {len(written)} images under {args.out}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
