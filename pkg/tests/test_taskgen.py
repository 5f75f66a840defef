import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rtladder.capability import coverage_fraction
from rtladder.model import TaskKind, validate_taskset
from rtladder.sim import is_schedulable
from rtladder.taskgen import (
    TASK_COUNTS,
    UTIL_DRIFT,
    GenConfig,
    GenerationError,
    VictimMode,
    coverage_group,
    generate_in_coverage_group,
    generate_taskset,
    sporadic_count,
    util_range,
    uunifast,
)


def check_postconditions(ts, cfg):
    assert validate_taskset(ts) == []
    assert is_schedulable(ts)
    periods = [t.period for t in ts.tasks]
    lo, hi = cfg.period_range
    assert len(set(periods)) == len(periods) and all(lo <= p <= hi for p in periods)
    # rate monotonic, observer at the bottom
    by_pri = ts.by_priority()
    assert [t.period for t in by_pri] == sorted(periods)
    assert ts.observer.priority == 1 == min(t.priority for t in ts.tasks)
    if cfg.victim_mode is VictimMode.HIGHEST:
        assert ts.victim.priority == len(ts)
    else:
        assert ts.victim.priority == 2
    assert ts.victim.kind is TaskKind.PERIODIC and ts.observer.kind is TaskKind.PERIODIC
    u_lo, u_hi = util_range(ts.meta["util_group"])
    assert u_lo - UTIL_DRIFT <= ts.utilization <= u_hi + UTIL_DRIFT
    assert ts.meta["utilization"] == ts.utilization


def test_default_cell_postconditions():
    cfg = GenConfig(util_group=4, n_tasks=5, victim_mode=VictimMode.HIGHEST)
    rng = np.random.default_rng(0)
    for _ in range(50):
        ts = generate_taskset(cfg, rng)
        check_postconditions(ts, cfg)
        o, v = ts.observer, ts.victim
        assert o.wcet >= math.gcd(o.period, v.period)


def test_all_periodic():
    ts = generate_taskset(GenConfig(n_tasks=9, sporadic_fraction=0.0), np.random.default_rng(1))
    assert all(t.kind is TaskKind.PERIODIC for t in ts.tasks)


@pytest.mark.parametrize("n, periodic", list(zip(TASK_COUNTS, (3, 4, 5, 6, 7, 8))))
def test_half_sporadic_counts(n, periodic):
    assert n - sporadic_count(n, 0.5) == periodic
    ts = generate_taskset(GenConfig(n_tasks=n, util_group=2), np.random.default_rng(n))
    assert Counter(t.kind for t in ts.tasks)[TaskKind.PERIODIC] == periodic


def test_fully_sporadic_keeps_roles_periodic():
    ts = generate_taskset(GenConfig(n_tasks=7, sporadic_fraction=1.0), np.random.default_rng(2))
    kinds = Counter(t.kind for t in ts.tasks)
    assert kinds[TaskKind.SPORADIC] == 5 and kinds[TaskKind.PERIODIC] == 2


def test_coverage_range_respected():
    lo, hi = coverage_group(4)
    assert (lo, hi) == (Fraction(401, 1000), Fraction(1, 2))
    cfg = GenConfig(util_group=None, n_tasks=None, require_full_coverage=False, coverage_range=(lo, hi))
    rng = np.random.default_rng(3)
    for _ in range(20):
        ts = generate_taskset(cfg, rng)
        c = coverage_fraction(ts.observer.wcet, ts.observer.period, ts.victim.period)
        assert lo <= c <= hi


def test_binned_coverage_generation():
    lo, hi = coverage_group(4)
    rng = np.random.default_rng(4)
    for mode in VictimMode:
        ts = generate_in_coverage_group(lo, hi, rng, victim_mode=mode)
        assert lo <= coverage_fraction(ts.observer.wcet, ts.observer.period, ts.victim.period) <= hi
        assert validate_taskset(ts) == [] and is_schedulable(ts)


def test_generation_failure_names_constraint():
    cfg = GenConfig(util_group=9, n_tasks=15, max_attempts=20)
    with pytest.raises(GenerationError) as info:
        generate_taskset(cfg, np.random.default_rng(0))
    assert info.value.reason in {"not schedulable", "coverage below 1", "utilization drift"}
    assert sum(info.value.failures.values()) == 20


@pytest.mark.parametrize(
    "kw",
    [{"period_range": (0, 10)}, {"sporadic_fraction": 1.5}, {"util_group": 10}, {"n_tasks": 1}, {"n_tasks": 20, "period_range": (1, 10)}],
)
def test_config_validation(kw):
    with pytest.raises(ValueError):
        GenConfig(**kw)


@given(st.integers(1, 20), st.floats(0.01, 1.0), st.integers(0, 2**32))
def test_uunifast_sums_to_total(n, total, seed):
    shares = uunifast(n, total, np.random.default_rng(seed))
    assert len(shares) == n and min(shares) >= 0
    assert sum(shares) == pytest.approx(total)


def test_same_seed_same_taskset():
    cfg = GenConfig(util_group=None, n_tasks=None)
    a = generate_taskset(cfg, np.random.default_rng(9))
    b = generate_taskset(cfg, np.random.default_rng(9))
    assert a == b and a.meta == b.meta


def test_ten_thousand_tasksets():
    rng = np.random.default_rng(2024)
    for i in range(10_000):
        cfg = GenConfig(util_group=i % 10, n_tasks=TASK_COUNTS[(i // 10) % 6], victim_mode=list(VictimMode)[i % 2])
        ts = generate_taskset(cfg, rng)
        assert validate_taskset(ts) == [] and is_schedulable(ts)
        u_lo, u_hi = util_range(i % 10)
        assert u_lo - UTIL_DRIFT <= ts.utilization <= u_hi + UTIL_DRIFT
        assert ts.observer.priority == 1 and ts.victim.kind is TaskKind.PERIODIC
