"""Command-line front end: ``rtladder {generate,simulate,attack,analyze,sweep,infer}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .capability import analyze_pair
from .harness import ExperimentKind, ExperimentSpec, infer_from_file, run_attack, run_experiment
from .model import lcm_pair, load_taskset, save_taskset, validate_taskset
from .sim import VariationConfig, response_time_analysis, simulate, write_trace
from .taskgen import GenConfig, GenerationError, VictimMode, coverage_group, generate_taskset


def _int_list(text: str) -> tuple[int, ...]:
    out = []
    for part in text.split(","):
        if "-" in part:
            a, b = part.split("-")
            out.extend(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    return tuple(out)


def _variation(args) -> VariationConfig | None:
    return None if args.deterministic else VariationConfig(seed=args.seed)


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    print(text)


def cmd_generate(args) -> int:
    rng = np.random.default_rng(args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cfg = GenConfig(
        util_group=args.util_group,
        n_tasks=args.n_tasks,
        sporadic_fraction=args.sporadic_fraction,
        victim_mode=VictimMode(args.victim_mode),
        require_full_coverage=args.coverage_group is None,
        coverage_range=None if args.coverage_group is None else coverage_group(args.coverage_group),
    )
    manifest = []
    for i in range(args.count):
        ts = generate_taskset(cfg, rng)
        name = f"taskset_{i:04d}.json"
        save_taskset(ts, out / name)
        manifest.append({"file": name, "utilization": ts.meta["utilization"], "coverage": ts.meta["coverage"]})
    (out / "manifest.json").write_text(json.dumps({"seed": args.seed, "tasksets": manifest}, indent=1) + "\n")
    print(f"wrote {args.count} tasksets to {out}")
    return 0


def cmd_simulate(args) -> int:
    ts = load_taskset(args.taskset)
    horizon = args.horizon or args.multiple * lcm_pair(ts.observer.period, ts.victim.period)
    trace = simulate(ts, horizon, _variation(args))
    if args.out:
        write_trace(trace, args.out)
    print(f"horizon={horizon} slices={len(trace.slices)} releases={len(trace.releases)}")
    return 0


def cmd_attack(args) -> int:
    ts = load_taskset(args.taskset)
    r = run_attack(
        ts, args.multiple, _variation(args), lam=args.lam, attack_start=args.attack_start, duration=args.duration
    )
    doc = {
        "lambda": r.lam,
        "duration": r.duration,
        "observed_intervals": r.intervals,
        "inference": r.inference.to_dict(),
        "a_v": r.a_v,
        "success": r.outcome.success,
        "precision": r.outcome.precision,
    }
    _emit(doc, args.out)
    return 0


def cmd_analyze(args) -> int:
    ts = load_taskset(args.taskset)
    problems = validate_taskset(ts)
    rta = response_time_analysis(ts) if not problems else None
    obs, vic = ts.observer, ts.victim
    doc = {
        "violations": problems,
        "schedulable": None if rta is None else rta.schedulable,
        "response_times": None if rta is None else rta.response,
        "capability": analyze_pair(obs.wcet, obs.period, vic.period).to_dict(),
    }
    _emit(doc, args.out)
    return 0 if not problems else 1


def cmd_sweep(args) -> int:
    spec = ExperimentSpec(
        kind=ExperimentKind(args.kind),
        tasksets_per_cell=args.tasksets_per_cell,
        duration_multiples=args.duration_multiples,
        seed=args.seed,
        cells=tuple(args.cells.split(";")) if args.cells else None,
        workers=args.workers,
    )
    res = run_experiment(spec)
    res.write(args.out)
    sys.stdout.write(res.summary_csv())
    return 0


def cmd_infer(args) -> int:
    res = infer_from_file(args.intervals, args.period, args.start)
    _emit(res.to_dict(), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rtladder", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write synthetic tasksets")
    g.add_argument("--count", type=int, default=10)
    g.add_argument("--util-group", type=int, default=4)
    g.add_argument("--n-tasks", type=int, default=5)
    g.add_argument("--sporadic-fraction", type=float, default=0.5)
    g.add_argument("--victim-mode", choices=[m.value for m in VictimMode], default=VictimMode.HIGHEST.value)
    g.add_argument("--coverage-group", type=int, help="coverage group index 0..9 (default: coverage >= 1)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("simulate", help="simulate a taskset and export its trace")
    s.add_argument("taskset")
    s.add_argument("--horizon", type=int)
    s.add_argument("--multiple", type=int, default=1, help="horizon in units of lcm(p_o, p_v)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--deterministic", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_simulate)

    a = sub.add_parser("attack", help="run the inference attack on one taskset")
    a.add_argument("taskset")
    a.add_argument("--multiple", type=int, default=10, help="attack duration in units of lcm(p_o, p_v)")
    a.add_argument("--duration", type=int, help="attack duration in ticks (overrides --multiple)")
    a.add_argument("--lambda", dest="lam", type=int)
    a.add_argument("--attack-start", type=int, default=0)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--deterministic", action="store_true")
    a.add_argument("--out")
    a.set_defaults(func=cmd_attack)

    z = sub.add_parser("analyze", help="validation, RTA and observer capability")
    z.add_argument("taskset")
    z.add_argument("--out")
    z.set_defaults(func=cmd_analyze)

    w = sub.add_parser("sweep", help="run one of the design-space experiments")
    w.add_argument("kind", choices=[k.value for k in ExperimentKind])
    w.add_argument("--tasksets-per-cell", type=int, default=100)
    w.add_argument("--duration-multiples", type=_int_list, default=tuple(range(1, 11)))
    w.add_argument("--cells", help="';'-separated cell labels to run, e.g. 'cov=0.401-0.500'")
    w.add_argument("--workers", type=int, default=1)
    w.add_argument("--seed", type=int, default=0)
    w.add_argument("--out", required=True)
    w.set_defaults(func=cmd_sweep)

    i = sub.add_parser("infer", help="offline inference from a start,end interval file")
    i.add_argument("intervals")
    i.add_argument("--period", type=int, required=True, help="victim period")
    i.add_argument("--start", type=int, default=0, help="ladder start tick")
    i.add_argument("--out")
    i.set_defaults(func=cmd_infer)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ValueError, OSError, GenerationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
