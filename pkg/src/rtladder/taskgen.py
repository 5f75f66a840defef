"""Synthetic tasksets: UUniFast utilizations, rate-monotonic priorities,
observer at the bottom, victim at one of two priority extremes."""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .capability import coverage_fraction
from .model import TaskKind, TaskSet, TaskSpec
from .sim import is_schedulable

TASK_COUNTS = (5, 7, 9, 11, 13, 15)
UTIL_GROUPS = tuple(range(10))
UTIL_DRIFT = 0.02  # tolerated WCET-rounding drift outside the utilization group


class VictimMode(str, enum.Enum):
    JUST_ABOVE_OBSERVER = "pri2"  # victim priority 2, right above the observer
    HIGHEST = "highest"  # victim has the highest priority in the set


def util_range(x: int) -> tuple[float, float]:
    return 0.001 + 0.1 * x, 0.1 + 0.1 * x


def coverage_group(x: int) -> tuple[Fraction, Fraction]:
    return Fraction(1, 1000) + Fraction(x, 10), Fraction(1, 10) + Fraction(x, 10)


class GenerationError(RuntimeError):
    def __init__(self, attempts: int, failures: Counter):
        reason, count = failures.most_common(1)[0] if failures else ("unknown", 0)
        super().__init__(f"no taskset after {attempts} attempts; most frequent failure: {reason} ({count}x)")
        self.reason = reason
        self.failures = failures


@dataclass(frozen=True)
class GenConfig:
    """Generation parameters. ``util_group``/``n_tasks`` set to None are
    redrawn uniformly on every attempt."""

    util_group: int | None = 4
    n_tasks: int | None = 5
    sporadic_fraction: float = 0.5
    period_range: tuple[int, int] = (100, 1000)
    victim_mode: VictimMode = VictimMode.HIGHEST
    require_full_coverage: bool = True
    coverage_range: tuple[Fraction, Fraction] | None = None
    max_attempts: int = 200_000

    def __post_init__(self):
        lo, hi = self.period_range
        if not 1 <= lo <= hi:
            raise ValueError("period range must satisfy 1 <= lo <= hi")
        if not 0 <= self.sporadic_fraction <= 1:
            raise ValueError("sporadic_fraction must be in [0, 1]")
        if self.util_group is not None and self.util_group not in UTIL_GROUPS:
            raise ValueError("util_group must be in 0..9")
        if self.n_tasks is not None and self.n_tasks < 2:
            raise ValueError("need at least an observer and a victim")
        if self.n_tasks is not None and self.n_tasks > hi - lo + 1:
            raise ValueError("period range too narrow for distinct periods")
        object.__setattr__(self, "victim_mode", VictimMode(self.victim_mode))
        if self.coverage_range is not None:
            object.__setattr__(self, "coverage_range", tuple(Fraction(c) for c in self.coverage_range))


def uunifast(n: int, total: float, rng: np.random.Generator) -> list[float]:
    """Uniform split of ``total`` into ``n`` non-negative shares."""
    shares = []
    rest = total
    for i in range(1, n):
        nxt = rest * rng.random() ** (1.0 / (n - i))
        shares.append(rest - nxt)
        rest = nxt
    shares.append(rest)
    return shares


def sporadic_count(n: int, fraction: float) -> int:
    # periodic count rounds up: n=5..15 at 50% gives 3,4,...,8 periodic tasks
    return min(n - math.ceil((1 - fraction) * n - 1e-9), n - 2)


def _attempt(cfg: GenConfig, rng: np.random.Generator):
    x = cfg.util_group if cfg.util_group is not None else int(rng.integers(0, 10))
    n = cfg.n_tasks if cfg.n_tasks is not None else int(rng.choice(TASK_COUNTS))
    lo, hi = cfg.period_range

    periods = set()
    while len(periods) < n:
        periods.add(int(rng.integers(lo, hi + 1)))
    periods = sorted(periods, reverse=True)  # index 0: lowest RM priority

    u_lo, u_hi = util_range(x)
    target = rng.uniform(u_lo, u_hi)
    shares = uunifast(n, target, rng)
    wcets = [min(p, max(1, round(u * p))) for u, p in zip(shares, periods)]
    offsets = [int(rng.integers(0, p)) for p in periods]
    perm = rng.permutation(n).tolist()  # drawn unconditionally so kinds do not shift the stream

    obs_idx = 0
    vic_idx = 1 if cfg.victim_mode is VictimMode.JUST_ABOVE_OBSERVER else n - 1
    k_sporadic = sporadic_count(n, cfg.sporadic_fraction)
    others = [i for i in perm if i not in (obs_idx, vic_idx)]
    sporadic = set(others[:k_sporadic])

    tasks = []
    for i, (p, e, a) in enumerate(zip(periods, wcets, offsets)):
        if i == obs_idx:
            tid = "obs"
        elif i == vic_idx:
            tid = "vic"
        else:
            tid = f"t{i + 1}"
        kind = TaskKind.SPORADIC if i in sporadic else TaskKind.PERIODIC
        tasks.append(TaskSpec(tid, p, e, a, priority=i + 1, kind=kind))

    cov = coverage_fraction(wcets[obs_idx], periods[obs_idx], periods[vic_idx])
    if cfg.coverage_range is not None:
        c_lo, c_hi = cfg.coverage_range
        if not c_lo <= cov <= c_hi:
            return None, "coverage outside group"
    elif cfg.require_full_coverage and cov < 1:
        return None, "coverage below 1"

    ts = TaskSet(
        tasks,
        "obs",
        "vic",
        meta={
            "util_group": x,
            "n_tasks": n,
            "target_utilization": target,
            "victim_mode": cfg.victim_mode.value,
            "sporadic_fraction": cfg.sporadic_fraction,
            "coverage": float(cov),
        },
    )
    util = ts.utilization
    if not u_lo - UTIL_DRIFT <= util <= u_hi + UTIL_DRIFT:
        return None, "utilization drift"
    if not is_schedulable(ts):
        return None, "not schedulable"
    ts.meta["utilization"] = util
    return ts, None


def generate_taskset(cfg: GenConfig, rng: np.random.Generator) -> TaskSet:
    """Draw tasksets until one is RTA-schedulable and meets the coverage
    constraint; raises ``GenerationError`` after ``cfg.max_attempts``."""
    failures: Counter = Counter()
    for _ in range(cfg.max_attempts):
        ts, reason = _attempt(cfg, rng)
        if ts is not None:
            return ts
        failures[reason] += 1
    raise GenerationError(cfg.max_attempts, failures)


BELOW_FULL_COVERAGE = (Fraction(0), Fraction(999, 1000))  # C < 1 given gcd <= 1000


def generate_in_coverage_group(
    lo: Fraction,
    hi: Fraction,
    rng: np.random.Generator,
    *,
    victim_mode: VictimMode = VictimMode.HIGHEST,
    sporadic_fraction: float = 0.5,
    max_tasksets: int = 20_000,
    attempts_per_taskset: int = 5_000,
) -> TaskSet:
    """Taskset whose coverage lies in ``[lo, hi]``, binned after generation.

    Each draw picks a (utilization group, task count) cell uniformly, generates
    a schedulable taskset with coverage below 1 in that cell, and keeps it only
    if its coverage falls in the group. Cells therefore contribute in
    proportion to how often their sub-unit coverage sets land in the group,
    not in proportion to their raw acceptance rate.
    """
    failures: Counter = Counter()
    for _ in range(max_tasksets):
        cfg = GenConfig(
            util_group=int(rng.integers(0, 10)),
            n_tasks=int(rng.choice(TASK_COUNTS)),
            sporadic_fraction=sporadic_fraction,
            victim_mode=victim_mode,
            require_full_coverage=False,
            coverage_range=BELOW_FULL_COVERAGE,
            max_attempts=attempts_per_taskset,
        )
        try:
            ts = generate_taskset(cfg, rng)
        except GenerationError as exc:
            failures[f"cell: {exc.reason}"] += 1
            continue
        if lo <= coverage_fraction(ts.observer.wcet, ts.observer.period, ts.victim.period) <= hi:
            return ts
        failures["coverage outside group"] += 1
    raise GenerationError(max_tasksets, failures)
