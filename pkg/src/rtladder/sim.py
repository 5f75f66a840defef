"""Fixed-priority preemptive uniprocessor simulation and response-time analysis.

The simulator is event driven but reproduces the tick-stepped semantics
exactly: at every tick the highest-priority released and unfinished job runs.
All randomness is drawn up front per task, in taskset order, from one
``numpy.random.Generator`` seeded by ``VariationConfig.seed``.
"""

from __future__ import annotations

import bisect
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from statistics import NormalDist
from typing import Collection, NamedTuple

import numpy as np

from .model import Interval, TaskKind, TaskSet, TaskSpec, checked_tick, validate_taskset

_INF = float("inf")


@dataclass(frozen=True)
class VariationConfig:
    """Runtime variation: normal execution times, Poisson sporadic gaps."""

    exec_mean_fraction: float = 0.80
    exec_upper_quantile: float = 0.9999
    sporadic_mean_fraction: float = 1.20
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.exec_mean_fraction <= 1:
            raise ValueError("exec_mean_fraction must be in (0, 1]")
        if not 0.5 < self.exec_upper_quantile < 1:
            raise ValueError("exec_upper_quantile must be in (0.5, 1)")
        if self.sporadic_mean_fraction < 1:
            raise ValueError("sporadic_mean_fraction must be >= 1")


def exec_time_sigma(wcet: int, var: VariationConfig) -> float:
    """Standard deviation putting ``wcet`` at the configured upper quantile."""
    z = NormalDist().inv_cdf(var.exec_upper_quantile)
    return (1.0 - var.exec_mean_fraction) * wcet / z


def raw_execution_times(wcet: int, var: VariationConfig, rng: np.random.Generator, size=None):
    """Continuous normal draws before rounding and clamping."""
    return rng.normal(var.exec_mean_fraction * wcet, exec_time_sigma(wcet, var), size)


def sample_execution_time(wcet: int, var: VariationConfig | None, rng: np.random.Generator, size=None):
    """Draw execution time(s) in ticks, rounded and clamped to ``[1, wcet]``.

    ``var=None`` is the deterministic mode and always returns ``wcet``.
    """
    if wcet < 1:
        raise ValueError("wcet must be >= 1")
    if var is None:
        return wcet if size is None else np.full(size, wcet, dtype=np.int64)
    draws = raw_execution_times(wcet, var, rng, size)
    ticks = np.clip(np.rint(draws), 1, wcet).astype(np.int64)
    return int(ticks) if size is None else ticks


def sample_inter_arrival(period: int, var: VariationConfig | None, rng: np.random.Generator, size=None):
    """Poisson inter-arrival time(s) with mean ``1.2 * period``, redrawn below ``period``."""
    if period < 1:
        raise ValueError("period must be >= 1")
    if var is None:
        return period if size is None else np.full(size, period, dtype=np.int64)
    lam = var.sporadic_mean_fraction * period
    draws = np.atleast_1d(rng.poisson(lam, size)).astype(np.int64)
    low = draws < period
    while low.any():
        draws[low] = rng.poisson(lam, int(low.sum()))
        low = draws < period
    return int(draws[0]) if size is None else draws


class Slice(NamedTuple):
    """Contiguous execution of one job: ``[start, end)``."""

    task: str
    job: int
    start: int
    end: int

    @property
    def interval(self) -> Interval:
        return Interval(self.start, self.end)


@dataclass
class Trace:
    """Ground-truth schedule over ``[0, horizon)``."""

    horizon: int
    slices: list[Slice] = field(default_factory=list)
    releases: list[tuple[str, int]] = field(default_factory=list)
    completions: list[tuple[str, int]] = field(default_factory=list)

    def slices_of(self, task_id: str) -> list[Slice]:
        return [s for s in self.slices if s.task == task_id]

    def releases_of(self, task_id: str) -> list[int]:
        return [r for tid, r in self.releases if tid == task_id]

    def completions_of(self, task_id: str) -> list[int]:
        return [c for tid, c in self.completions if tid == task_id]

    def executed(self, task_id: str) -> dict[int, int]:
        """Executed ticks per job index."""
        out: dict[int, int] = defaultdict(int)
        for s in self.slices:
            if s.task == task_id:
                out[s.job] += s.end - s.start
        return dict(out)


class DeadlineMissError(RuntimeError):
    def __init__(self, task_id: str, job: int, deadline: int):
        super().__init__(f"task {task_id} job {job} missed its deadline at t={deadline}")
        self.task_id = task_id
        self.job = job
        self.deadline = deadline


def _draw_samples(order: list[TaskSpec], horizon: int, var: VariationConfig | None):
    rng = np.random.default_rng(None if var is None else var.seed)
    demands, gaps = [], []
    for task in order:
        n_jobs = 0 if task.offset >= horizon else (horizon - 1 - task.offset) // task.period + 1
        demands.append(sample_execution_time(task.wcet, var, rng, n_jobs).tolist())
        if task.kind is TaskKind.SPORADIC and var is not None:
            gaps.append(sample_inter_arrival(task.period, var, rng, n_jobs).tolist())
        else:
            gaps.append(None)
    return demands, gaps


def simulate(
    ts: TaskSet,
    horizon: int,
    var: VariationConfig | None = None,
    *,
    record: Collection[str] | None = None,
) -> Trace:
    """Simulate ``ts`` over ``[0, horizon)``.

    ``var=None`` runs every job for exactly its WCET and releases sporadic
    tasks every minimum inter-arrival time. ``record`` limits which tasks'
    slices/releases/completions are stored; scheduling is unaffected.
    Raises ``DeadlineMissError`` on the first deadline miss.
    """
    problems = validate_taskset(ts)
    if problems:
        raise ValueError("invalid taskset: " + "; ".join(problems))
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    checked_tick(horizon)

    order = ts.by_priority()
    n = len(order)
    ids = [t.id for t in order]
    period = [t.period for t in order]
    keep = [record is None or tid in record for tid in ids]
    demands, gaps = _draw_samples(order, horizon, var)

    next_rel = [t.offset if t.offset < horizon else _INF for t in order]
    job_no = [0] * n
    cur_job = [-1] * n
    remaining = [0] * n
    deadline = [0] * n
    mask = 0  # bit i set <=> task i has a pending job; bit 0 is the highest priority

    slices: list[list] = []
    releases: list[tuple[int, int]] = []
    completions: list[tuple[str, int]] = []

    t = 0
    next_event = min(next_rel)
    while True:
        if next_event <= t:
            for i in range(n):
                r = next_rel[i]
                while r <= t:
                    if remaining[i]:
                        raise DeadlineMissError(ids[i], cur_job[i], deadline[i])
                    k = job_no[i]
                    job_no[i] = k + 1
                    cur_job[i] = k
                    remaining[i] = demands[i][k]
                    deadline[i] = r + period[i]
                    mask |= 1 << i
                    if keep[i]:
                        releases.append((r, i))
                    r += period[i] if gaps[i] is None else gaps[i][k]
                    if r >= horizon:
                        r = _INF
                next_rel[i] = r
            next_event = min(next_rel)
        if t >= horizon:
            break
        if not mask:
            t = horizon if next_event >= horizon else next_event
            continue

        i = (mask & -mask).bit_length() - 1
        end = t + remaining[i]
        for j in range(i):
            if next_rel[j] < end:
                end = next_rel[j]
        if end > horizon:
            end = horizon
        if keep[i]:
            last = slices[-1] if slices else None
            if last is not None and last[0] == i and last[1] == cur_job[i] and last[3] == t:
                last[3] = end
            else:
                slices.append([i, cur_job[i], t, end])
        remaining[i] -= end - t
        t = end
        if not remaining[i]:
            mask &= ~(1 << i)
            if t > deadline[i]:
                raise DeadlineMissError(ids[i], cur_job[i], deadline[i])
            if keep[i]:
                completions.append((ids[i], t))

    for i in range(n):
        if remaining[i] and deadline[i] <= horizon:
            raise DeadlineMissError(ids[i], cur_job[i], deadline[i])

    releases.sort()
    return Trace(
        horizon=horizon,
        slices=[Slice(ids[i], k, a, b) for i, k, a, b in slices],
        releases=[(ids[i], r) for r, i in releases],
        completions=completions,
    )


# -- response-time analysis ----------------------------------------------------

@dataclass(frozen=True)
class RTAResult:
    response: dict[str, int]  # last iterate; exceeds the deadline when unschedulable
    schedulable: bool

    def ok(self, task_id: str, ts: TaskSet) -> bool:
        return self.response[task_id] <= ts[task_id].deadline


def response_time_analysis(ts: TaskSet) -> RTAResult:
    """Exact fixed-priority RTA for implicit deadlines.

    Sporadic tasks are analysed at their minimum inter-arrival time.
    """
    order = ts.by_priority()
    response = {}
    schedulable = True
    for idx, task in enumerate(order):
        hp = order[:idx]
        r = task.wcet
        while True:
            nxt = task.wcet + sum(-(-r // h.period) * h.wcet for h in hp)
            if nxt == r or nxt > task.deadline:
                r = nxt
                break
            r = nxt
        response[task.id] = r
        if r > task.deadline:
            schedulable = False
    return RTAResult(response, schedulable)


def is_schedulable(ts: TaskSet) -> bool:
    return response_time_analysis(ts).schedulable


# -- trace checks ----------------------------------------------------------------

def check_trace(trace: Trace, ts: TaskSet, demands: dict[str, dict[int, int]] | None = None) -> list[str]:
    """Return violated trace invariants (empty when the trace is consistent).

    Checks non-overlap, that slices sit between their job's release and
    completion, fixed-priority dominance at every slice, and (when
    ``demands`` is given) per-job execution conservation. Requires a trace
    recorded for all tasks.
    """
    problems = []
    prev_end = 0
    for s in trace.slices:
        if s.start >= s.end:
            problems.append(f"empty slice {s}")
        if s.start < prev_end:
            problems.append(f"overlapping slice {s}")
        prev_end = max(prev_end, s.end)

    pri = {t.id: t.priority for t in ts.tasks}
    rel = {t.id: trace.releases_of(t.id) for t in ts.tasks}
    comp = {t.id: trace.completions_of(t.id) for t in ts.tasks}
    for s in trace.slices:
        r = rel[s.task]
        if s.job >= len(r) or r[s.job] > s.start:
            problems.append(f"slice {s} before its release")
        c = comp[s.task]
        if s.job < len(c) and c[s.job] < s.end:
            problems.append(f"slice {s} after its completion")

    # pending window of every job: [release, completion or horizon)
    starts, ends = {}, {}
    for t in ts.tasks:
        c = comp[t.id]
        starts[t.id] = rel[t.id]
        ends[t.id] = [c[k] if k < len(c) else trace.horizon for k in range(len(rel[t.id]))]
    for s in trace.slices:
        for other in starts:
            if pri[other] <= pri[s.task]:
                continue
            k = bisect.bisect_left(starts[other], s.end) - 1
            if k >= 0 and ends[other][k] > s.start:
                problems.append(
                    f"{s.task} ran in [{s.start},{s.end}) while higher-priority {other} job {k} was pending"
                )

    if demands is not None:
        for tid, per_job in demands.items():
            ran = trace.executed(tid)
            for k, c in enumerate(comp[tid]):
                if ran.get(k, 0) != per_job.get(k):
                    problems.append(f"{tid} job {k} executed {ran.get(k, 0)} != demand {per_job.get(k)}")
    return problems


def sampled_demands(ts: TaskSet, horizon: int, var: VariationConfig | None) -> dict[str, dict[int, int]]:
    """The per-job execution times ``simulate`` draws for the same arguments."""
    order = ts.by_priority()
    demands, _ = _draw_samples(order, horizon, var)
    return {t.id: dict(enumerate(d)) for t, d in zip(order, demands)}


# -- trace files -------------------------------------------------------------------

_RESERVED = {"R", "C", "H"}


def write_trace(trace: Trace, path: str | Path) -> None:
    """Write ``H,horizon`` then one ``task,start,end`` line per slice and
    ``R,task,tick`` / ``C,task,tick`` lines for releases and completions."""
    lines = [f"H,{trace.horizon}"]
    for s in trace.slices:
        if s.task in _RESERVED or "," in s.task:
            raise ValueError(f"task id {s.task!r} cannot be written to a trace file")
        lines.append(f"{s.task},{s.start},{s.end}")
    lines += [f"R,{tid},{r}" for tid, r in trace.releases]
    lines += [f"C,{tid},{c}" for tid, c in trace.completions]
    Path(path).write_text("\n".join(lines) + "\n")


def read_trace(path: str | Path) -> Trace:
    horizon = None
    raw_slices, releases, completions = [], [], []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        try:
            if parts[0] == "H" and len(parts) == 2:
                horizon = int(parts[1])
            elif parts[0] == "R" and len(parts) == 3:
                releases.append((parts[1], int(parts[2])))
            elif parts[0] == "C" and len(parts) == 3:
                completions.append((parts[1], int(parts[2])))
            elif len(parts) == 3:
                raw_slices.append((parts[0], int(parts[1]), int(parts[2])))
            else:
                raise ValueError("unexpected field count")
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: cannot parse {line!r} ({exc})") from None
    if horizon is None:
        horizon = max((e for _, _, e in raw_slices), default=0)

    done = defaultdict(list)
    for tid, c in completions:
        done[tid].append(c)
    slices = []
    for tid, a, b in raw_slices:
        job = bisect.bisect_right(done[tid], a)
        slices.append(Slice(tid, job, a, b))
    return Trace(horizon, slices, releases, completions)
