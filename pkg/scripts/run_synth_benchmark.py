#!/usr/bin/env python3
"""Benchmark every map family on the synthetic grating dataset.

Generates the dataset once, then runs the random-half protocol for the
plain-LBP baseline (identity map) and each chaotic map, printing a small
accuracy table. Useful for eyeballing how much the chaos transform adds on
top of the plain histogram.

Usage: python scripts/run_synth_benchmark.py [--workdir DIR] [--rounds N]
"""

import argparse
import tempfile
import time
from pathlib import Path

from chaostex.datasets import ingest
from chaostex.descriptor import DescriptorConfig
from chaostex.experiment import run_experiment
from chaostex.maps import MapFamily, ChaoticMapSpec
from chaostex.synth import generate_dataset


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--workdir", default=None,
                        help="where to put the dataset and feature cache (default: temp dir)")
    parser.add_argument("--rounds", type=int, default=10)
    parser.add_argument("--n-iter", type=int, default=1,
                        help="map iterations (1 spans chaos depth alpha in [1, 2])")
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--per-class", type=int, default=40)
    args = parser.parse_args()

    workdir = Path(args.workdir) if args.workdir else Path(tempfile.mkdtemp(prefix="chaostex_"))
    data = workdir / "synth"
    if not data.exists():
        generate_dataset(data, per_class=args.per_class, size=64, seed=0)
    index = ingest(data)
    print(f"dataset: {len(index.entries)} images in {data}")

    order = [MapFamily.IDENTITY, MapFamily.CIRCLE, MapFamily.GAUSS,
             MapFamily.LOGISTIC, MapFamily.SINE, MapFamily.SINGER, MapFamily.TENT]
    print(f"{'map':<10} {'mean':>7} {'std':>7} {'seconds':>8}")
    for family in order:
        config = DescriptorConfig(map_spec=ChaoticMapSpec(family), n_iter=args.n_iter)
        start = time.perf_counter()
        result = run_experiment(index, config, "random_half",
                                rounds=args.rounds, seed=args.seed)
        elapsed = time.perf_counter() - start
        tag = "baseline" if family is MapFamily.IDENTITY else family.value
        print(f"{tag:<10} {result.mean_accuracy:7.4f} {result.std_accuracy:7.4f} {elapsed:8.1f}")


if __name__ == "__main__":
    main()
