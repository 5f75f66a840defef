#!/usr/bin/env python3
"""Walk through the four-task example: schedule, observed intervals, ladder, inference."""

from rtladder.harness import run_attack
from rtladder.ladder import build_ladder, mark_intervals
from rtladder.model import TaskSet, TaskSpec
from rtladder.observer import ObserverConfig, reconstruct_intervals
from rtladder.sim import response_time_analysis, simulate

HORIZON = 50

ts = TaskSet(
    [
        TaskSpec("t1", 15, 1, 3, 1),
        TaskSpec("obs", 10, 2, 0, 2),
        TaskSpec("vic", 8, 2, 1, 3),
        TaskSpec("t4", 6, 1, 4, 4),
    ],
    "obs",
    "vic",
)


def timeline(trace, task_id):
    row = ["."] * trace.horizon
    for s in trace.slices_of(task_id):
        row[s.start:s.end] = ["#"] * (s.end - s.start)
    return "".join(row)


def main():
    print("response times:", response_time_analysis(ts).response)
    trace = simulate(ts, HORIZON)
    for t in ts.by_priority():
        print(f"{t.id:>4} {timeline(trace, t.id)}")

    ivs = reconstruct_intervals(trace, "obs", ObserverConfig(1, 2, 0, HORIZON))
    print("observed:", [tuple(i) for i in ivs])

    lad = build_ladder(8, 0)
    for row in range(0, HORIZON, 8):
        cells = ["#" if any(a <= x < b for a, b in ivs) else "." for x in range(row, row + 8)]
        print(f"  row {row:>2}: {''.join(cells)}")
    mark_intervals(lad, ivs)
    print("  alive : " + "".join("." if e else "^" for e in lad.eliminated))

    r = run_attack(ts, var=None, lam=1, duration=HORIZON)
    print("candidates:", [tuple(c) for c in r.inference.candidates])
    print(f"delta_hat={r.inference.delta_hat} a_hat={r.inference.a_hat} a_v={r.a_v} "
          f"success={r.outcome.success} precision={r.outcome.precision}")


if __name__ == "__main__":
    main()
