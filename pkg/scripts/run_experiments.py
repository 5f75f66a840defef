#!/usr/bin/env python3
"""Run the five design-space experiments and write CSVs under --out.

    python scripts/run_experiments.py --tasksets-per-cell 20 --workers 4 --out results
"""

import argparse
import logging
import time
from pathlib import Path

from rtladder.harness import ExperimentKind, ExperimentSpec, run_experiment

log = logging.getLogger("experiments")


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--kinds", nargs="+", default=[k.value for k in ExperimentKind], choices=[k.value for k in ExperimentKind])
    ap.add_argument("--tasksets-per-cell", type=int, default=20)
    ap.add_argument("--duration-tasksets", type=int, default=500, help="tasksets for the duration sweep")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", type=Path, default=Path("results"))
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")

    for kind in args.kinds:
        n = args.duration_tasksets if kind == "duration" else args.tasksets_per_cell
        spec = ExperimentSpec(kind, tasksets_per_cell=n, seed=args.seed, workers=args.workers)
        t0 = time.perf_counter()
        res = run_experiment(spec)
        out = res.write(args.out / kind)
        log.info("%s: %d rows, %d failed, %.0f s -> %s", kind, len(res.runs), res.failures, time.perf_counter() - t0, out)
        print(res.summary_csv())


if __name__ == "__main__":
    main()
