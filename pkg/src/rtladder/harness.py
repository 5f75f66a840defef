"""End-to-end attacks and the design-space experiments."""

from __future__ import annotations

import csv
import enum
import io
import json
import logging
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .capability import choose_lambda
from .ladder import InferenceResult, build_ladder, infer, infer_arrival_column, mark_intervals
from .metrics import RunOutcome, aggregate, outcome
from .model import Interval, TaskSet, lcm_pair
from .observer import ObserverConfig, read_intervals, reconstruct_intervals
from .sim import DeadlineMissError, VariationConfig, simulate
from .taskgen import (
    TASK_COUNTS,
    UTIL_GROUPS,
    GenConfig,
    GenerationError,
    VictimMode,
    coverage_group,
    generate_in_coverage_group,
    generate_taskset,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class AttackResult:
    duration: int
    lam: int
    intervals: int
    inference: InferenceResult
    outcome: RunOutcome
    a_v: int


def run_attack_durations(
    ts: TaskSet,
    durations: Sequence[int],
    var: VariationConfig | None = VariationConfig(),
    *,
    lam: int | None = None,
    attack_start: int = 0,
) -> list[AttackResult]:
    """Simulate once up to the longest duration and infer after each prefix.

    ``lam`` defaults to the coverage-based choice. ``var=None`` is deterministic.
    """
    obs, vic = ts.observer, ts.victim
    if lam is None:
        lam = choose_lambda(obs.wcet, obs.period, vic.period)
    unit = lcm_pair(obs.period, vic.period)
    longest = max(durations)
    trace = simulate(ts, attack_start + longest, var, record={obs.id})
    cfg = ObserverConfig(lam, obs.wcet, attack_start, longest)
    observed = reconstruct_intervals(trace, obs.id, cfg)

    results = []
    ladder = build_ladder(vic.period, attack_start)
    used = 0
    for d in sorted(set(durations)):
        stop = attack_start + d
        chunk = []
        while used < len(observed) and observed[used].start < stop:
            a, b = observed[used]
            if b > stop:
                break  # straddles this window; truncated now, fully marked later
            chunk.append(observed[used])
            used += 1
        mark_intervals(ladder, chunk)
        view = ladder.copy()
        if used < len(observed) and observed[used].start < stop:
            mark_intervals(view, [Interval(observed[used].start, stop)])
        res = infer_arrival_column(view)
        results.append(
            AttackResult(
                duration=d,
                lam=lam,
                intervals=used,
                inference=res,
                outcome=outcome(res.a_hat, vic.offset, vic.period, d / unit),
                a_v=vic.offset,
            )
        )
    by_d = {r.duration: r for r in results}
    return [by_d[d] for d in durations]


def run_attack(
    ts: TaskSet,
    window_multiple: int = 10,
    var: VariationConfig | None = VariationConfig(),
    *,
    lam: int | None = None,
    attack_start: int = 0,
    duration: int | None = None,
) -> AttackResult:
    """Full pipeline for one taskset: simulate, reconstruct, fold, infer, score.

    The attack lasts ``window_multiple * lcm(p_o, p_v)`` ticks unless
    ``duration`` is given explicitly.
    """
    if duration is None:
        duration = window_multiple * lcm_pair(ts.observer.period, ts.victim.period)
    return run_attack_durations(ts, [duration], var, lam=lam, attack_start=attack_start)[0]


def infer_from_file(path, period: int, start: int = 0) -> InferenceResult:
    """Offline inference from a ``start,end`` interval file."""
    return infer(sorted(read_intervals(path)), period, start)


# -- experiments ------------------------------------------------------------------

class ExperimentKind(str, enum.Enum):
    DURATION = "duration"
    GRID = "grid"
    VICTIM = "victim"
    SPORADIC = "sporadic"
    COVERAGE = "coverage"


MODES = (VictimMode.JUST_ABOVE_OBSERVER, VictimMode.HIGHEST)
SPORADIC_FRACTIONS = (0.0, 0.25, 0.5, 0.75, 1.0)


@dataclass(frozen=True)
class ExperimentSpec:
    kind: ExperimentKind
    tasksets_per_cell: int = 100
    duration_multiples: tuple[int, ...] = tuple(range(1, 11))
    seed: int = 0
    cells: tuple[str, ...] | None = None  # restrict to these cell labels
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "kind", ExperimentKind(self.kind))
        object.__setattr__(self, "duration_multiples", tuple(self.duration_multiples))
        if self.tasksets_per_cell < 1:
            raise ValueError("tasksets_per_cell must be >= 1")
        if not self.duration_multiples or min(self.duration_multiples) < 1:
            raise ValueError("duration multiples must be positive")
        if self.cells is not None:
            object.__setattr__(self, "cells", tuple(self.cells))


@dataclass(frozen=True)
class CoverageDraw:
    lo: Fraction
    hi: Fraction
    victim_mode: VictimMode


@dataclass(frozen=True)
class Job:
    cell: str
    index: int
    entropy: tuple[int, ...]
    gen: GenConfig | CoverageDraw
    multiples: tuple[int, ...]


def mixed_cell(i: int) -> tuple[int, int, VictimMode]:
    """Round-robin over (utilization group, task count, victim mode)."""
    return UTIL_GROUPS[(i // 12) % 10], TASK_COUNTS[(i // 2) % 6], MODES[i % 2]


def plan_jobs(spec: ExperimentSpec) -> list[Job]:
    k, n_per = spec.kind, spec.tasksets_per_cell
    jobs = []
    if k is ExperimentKind.DURATION:
        for i in range(n_per):
            x, n, mode = mixed_cell(i)
            gen = GenConfig(util_group=x, n_tasks=n, victim_mode=mode)
            jobs.append(Job("all", i, (spec.seed, 0, i), gen, spec.duration_multiples))
    elif k is ExperimentKind.GRID:
        for ci, (n, x) in enumerate((n, x) for n in TASK_COUNTS for x in UTIL_GROUPS):
            for i in range(n_per):
                gen = GenConfig(util_group=x, n_tasks=n, victim_mode=MODES[i % 2])
                jobs.append(Job(f"n={n},u={x}", i, (spec.seed, ci, i), gen, (10,)))
    elif k is ExperimentKind.VICTIM:
        for ci, (mode, n) in enumerate((m, n) for m in MODES for n in TASK_COUNTS):
            for i in range(n_per):
                gen = GenConfig(util_group=UTIL_GROUPS[i % 10], n_tasks=n, victim_mode=mode)
                jobs.append(Job(f"mode={mode.value},n={n}", i, (spec.seed, ci, i), gen, (10,)))
    elif k is ExperimentKind.SPORADIC:
        for f in SPORADIC_FRACTIONS:
            for i in range(n_per):
                x, n, mode = mixed_cell(i)
                gen = GenConfig(util_group=x, n_tasks=n, victim_mode=mode, sporadic_fraction=f)
                # same entropy across fractions: paired tasksets differing only in task kinds
                jobs.append(Job(f"sporadic={f:g}", i, (spec.seed, i), gen, (10,)))
    elif k is ExperimentKind.COVERAGE:
        for x in UTIL_GROUPS:
            lo, hi = coverage_group(x)
            for i in range(n_per):
                gen = CoverageDraw(lo, hi, MODES[i % 2])
                jobs.append(Job(f"cov={float(lo):.3f}-{float(hi):.3f}", i, (spec.seed, x, i), gen, (10,)))
    if spec.cells is not None:
        jobs = [j for j in jobs if j.cell in spec.cells]
    return jobs


def run_job(job: Job) -> list[dict]:
    ss = np.random.SeedSequence(list(job.entropy))
    gen_ss, sim_ss = ss.spawn(2)
    base = {"cell": job.cell, "index": job.index}
    try:
        rng = np.random.default_rng(gen_ss)
        if isinstance(job.gen, CoverageDraw):
            ts = generate_in_coverage_group(job.gen.lo, job.gen.hi, rng, victim_mode=job.gen.victim_mode)
        else:
            ts = generate_taskset(job.gen, rng)
        var = VariationConfig(seed=int(sim_ss.generate_state(1, np.uint64)[0]))
        unit = lcm_pair(ts.observer.period, ts.victim.period)
        results = run_attack_durations(ts, [m * unit for m in job.multiples], var)
    except (GenerationError, DeadlineMissError) as exc:
        return [dict(base, multiple=m, status=f"error: {exc}") for m in job.multiples]

    meta = ts.meta
    rows = []
    for m, r in zip(job.multiples, results):
        rows.append(
            dict(
                base,
                multiple=m,
                status="ok",
                util_group=meta["util_group"],
                n_tasks=meta["n_tasks"],
                victim_mode=meta["victim_mode"],
                sporadic_fraction=meta["sporadic_fraction"],
                coverage=meta["coverage"],
                utilization=meta["utilization"],
                p_o=ts.observer.period,
                e_o=ts.observer.wcet,
                p_v=ts.victim.period,
                lam=r.lam,
                a_v=r.a_v,
                a_hat=r.inference.a_hat,
                surviving=r.inference.surviving,
                success=r.outcome.success,
                precision=r.outcome.precision,
            )
        )
    return rows


def _groups(kind: ExperimentKind, row: dict) -> list[tuple[str, str, float]]:
    """(group label, plot series, x) keys a run row contributes to."""
    if kind is ExperimentKind.DURATION:
        return [(f"dur={row['multiple']}", "all", row["multiple"])]
    if kind is ExperimentKind.GRID:
        n, x = row["n_tasks"], row["util_group"]
        return [(row["cell"], f"n={n}", x), (f"n={n}", "by_n", n), (f"u={x}", "by_u", x), ("all", "pooled", 0)]
    if kind is ExperimentKind.VICTIM:
        mode, n, x = row["victim_mode"], row["n_tasks"], row["util_group"]
        return [(row["cell"], f"mode={mode},by_n", n), (f"mode={mode},u={x}", f"mode={mode},by_u", x)]
    if kind is ExperimentKind.SPORADIC:
        return [(row["cell"], "all", row["sporadic_fraction"])]
    hi = float(row["cell"].split("-")[1])
    return [(row["cell"], "all", hi)]


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6f}"
    if isinstance(v, bool):
        return str(int(v))
    return "" if v is None else str(v)


RUN_COLUMNS = [
    "experiment", "cell", "index", "multiple", "status", "util_group", "n_tasks", "victim_mode",
    "sporadic_fraction", "coverage", "utilization", "p_o", "e_o", "p_v", "lam", "a_v", "a_hat",
    "surviving", "success", "precision",
]
SUMMARY_COLUMNS = ["experiment", "group", "success_rate", "precision_mean", "precision_sd", "n"]


def _csv(columns: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in columns])
    return buf.getvalue()


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    runs: list[dict]
    summary: list[dict]
    plot: list[dict]
    failures: int = 0
    seeds: list[dict] = field(default_factory=list)

    def runs_csv(self) -> str:
        return _csv(RUN_COLUMNS, self.runs)

    def summary_csv(self) -> str:
        return _csv(SUMMARY_COLUMNS, self.summary)

    def plot_csv(self) -> str:
        return _csv(["series", "x", "success_rate", "precision_mean", "n"], self.plot)

    def group(self, label: str) -> dict:
        for row in self.summary:
            if row["group"] == label:
                return row
        raise KeyError(label)

    def write(self, out: str | Path) -> Path:
        out = Path(out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "runs.csv").write_text(self.runs_csv())
        (out / "summary.csv").write_text(self.summary_csv())
        (out / "plot_data.csv").write_text(self.plot_csv())
        spec = asdict(self.spec)
        spec["kind"] = self.spec.kind.value
        manifest = {"spec": spec, "failures": self.failures, "jobs": self.seeds}
        (out / "manifest.json").write_text(json.dumps(manifest, indent=1) + "\n")
        return out


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Generate tasksets per cell, attack each, and aggregate per group.

    Results do not depend on ``spec.workers``: every job carries its own seed
    and rows are merged in plan order.
    """
    jobs = plan_jobs(spec)
    if spec.workers > 1:
        with ProcessPoolExecutor(spec.workers) as pool:
            nested = list(pool.map(run_job, jobs, chunksize=max(1, len(jobs) // (8 * spec.workers))))
    else:
        nested = [run_job(j) for j in jobs]

    runs = []
    for rows in nested:
        for r in rows:
            runs.append(dict(r, experiment=spec.kind.value))
    failures = sum(1 for r in runs if r["status"] != "ok")
    if failures:
        log.warning("%d run rows failed", failures)

    buckets: dict[str, list[RunOutcome]] = defaultdict(list)
    plot_keys: dict[str, tuple[str, float]] = {}
    for r in runs:
        if r["status"] != "ok":
            continue
        o = RunOutcome(bool(r["success"]), r["precision"], None, float(r["multiple"]))
        for label, series, x in _groups(spec.kind, r):
            buckets[label].append(o)
            plot_keys[label] = (series, x)

    summary, plot = [], []
    for label, outs in buckets.items():
        s = aggregate(outs)
        summary.append(
            {
                "experiment": spec.kind.value,
                "group": label,
                "success_rate": s.success_rate,
                "precision_mean": s.precision_mean,
                "precision_sd": s.precision_sd,
                "n": s.n,
            }
        )
        series, x = plot_keys[label]
        plot.append({"series": series, "x": x, "success_rate": s.success_rate, "precision_mean": s.precision_mean, "n": s.n})
    plot.sort(key=lambda p: (p["series"], p["x"]))
    seeds = [{"cell": j.cell, "index": j.index, "entropy": list(j.entropy)} for j in jobs]
    return ExperimentResult(spec, runs, summary, plot, failures, seeds)
