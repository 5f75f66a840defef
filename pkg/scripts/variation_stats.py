#!/usr/bin/env python3
"""Empirical vs analytic statistics of the runtime-variation model."""

import argparse
from statistics import NormalDist

import numpy as np
from scipy import stats

from rtladder.sim import VariationConfig, exec_time_sigma, raw_execution_times, sample_execution_time, sample_inter_arrival


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--wcet", type=int, default=10)
    ap.add_argument("--period", type=int, default=100)
    ap.add_argument("--draws", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    var = VariationConfig()
    rng = np.random.default_rng(args.seed)
    e = args.wcet
    mu, sd = 0.8 * e, exec_time_sigma(e, var)
    raw = raw_execution_times(e, var, rng, args.draws)
    print(f"execution time, wcet={e}: mean={mu} sigma={sd:.5f}")
    for half in (0.08 * e, 0.1 * e):
        emp = np.mean(np.abs(raw - mu) <= half)
        ana = 2 * NormalDist().cdf(half / sd) - 1
        print(f"  mass within mean+-{half:g}: empirical {emp:.4f}  analytic {ana:.4f}")
    ticks = sample_execution_time(e, var, rng, args.draws)
    values, counts = np.unique(ticks, return_counts=True)
    print("  rounded tick histogram:", dict(zip(values.tolist(), counts.tolist())))

    p = args.period
    gaps = sample_inter_arrival(p, var, rng, args.draws)
    k = np.arange(p, 10 * p + 100)
    exact = float((k * stats.poisson.pmf(k, 1.2 * p)).sum() / stats.poisson.sf(p - 1, 1.2 * p))
    print(f"inter-arrival, p={p}: min={gaps.min()} mean={gaps.mean():.3f} exact truncated mean={exact:.3f}")


if __name__ == "__main__":
    main()
