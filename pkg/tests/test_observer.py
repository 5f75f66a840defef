import pytest
from conftest import EX1_INTERVALS
from hypothesis import given
from hypothesis import strategies as st

from rtladder.model import Interval, TaskSet, TaskSpec
from rtladder.observer import (
    MissingObserverError,
    ObserverConfig,
    measure_job,
    read_intervals,
    reconstruct_intervals,
    write_intervals,
)
from rtladder.sim import DeadlineMissError, Slice, VariationConfig, simulate


def test_example_intervals(ex1):
    tr = simulate(ex1, 50)
    got = reconstruct_intervals(tr, "obs", ObserverConfig(1, 2, 0, 50))
    assert got == [Interval(*iv) for iv in EX1_INTERVALS]


def test_unpreempted_observer_full_budget():
    ts = TaskSet([TaskSpec("o", 10, 4, 0, 1), TaskSpec("v", 1000, 1, 999, 2)], "o", "v")
    got = reconstruct_intervals(simulate(ts, 40), "o", ObserverConfig(4, 4))
    assert got == [Interval(0, 4), Interval(10, 14), Interval(20, 24), Interval(30, 34)]


def test_budget_carries_over_preemption():
    # v preempts o at tick 2 for 2 ticks; o's job 0 runs [0,2) and [4,6)
    ts = TaskSet([TaskSpec("o", 20, 4, 0, 1), TaskSpec("v", 19, 2, 2, 2)], "o", "v")
    tr = simulate(ts, 20)
    assert [(s.start, s.end) for s in tr.slices_of("o")] == [(0, 2), (4, 6)]
    got = reconstruct_intervals(tr, "o", ObserverConfig(3, 4))
    assert got == [Interval(0, 2), Interval(4, 5)]
    assert sum(iv.length for iv in got) == 3


def test_measure_job_zero_budget():
    assert measure_job([Slice("o", 0, 0, 5)], 0) == []


def test_window_truncates(ex1):
    tr = simulate(ex1, 50)
    got = reconstruct_intervals(tr, "obs", ObserverConfig(2, 2, attack_start=13, attack_duration=30))
    assert got == [Interval(13, 14), Interval(20, 22), Interval(30, 32)]


def test_missing_observer(ex1):
    tr = simulate(ex1, 50, record={"vic"})
    with pytest.raises(MissingObserverError):
        reconstruct_intervals(tr, "obs", ObserverConfig(1, 2))


@pytest.mark.parametrize("kw", [{"lam": 3, "wcet": 2}, {"lam": -1, "wcet": 2}, {"lam": 1, "wcet": 2, "attack_start": -1}])
def test_config_validation(kw):
    with pytest.raises(ValueError):
        ObserverConfig(**kw)


@given(st.integers(0, 2**32), st.integers(1, 6))
def test_budget_and_containment(seed, lam):
    ts = TaskSet(
        [TaskSpec("o", 23, 6, 3, 1), TaskSpec("m", 11, 2, 5, 2), TaskSpec("v", 7, 2, 1, 3)], "o", "v"
    )
    try:
        tr = simulate(ts, 600, VariationConfig(seed=seed))
    except DeadlineMissError:
        return
    got = reconstruct_intervals(tr, "o", ObserverConfig(lam, 6))
    own = tr.slices_of("o")
    per_job = {}
    for iv in got:
        host = [s for s in own if s.start <= iv.start and iv.end <= s.end]
        assert len(host) == 1
        per_job[host[0].job] = per_job.get(host[0].job, 0) + iv.length
    ran = tr.executed("o")
    for job, used in per_job.items():
        assert used == min(lam, ran[job])


def test_interval_file_roundtrip(tmp_path):
    ivs = [Interval(0, 1), Interval(12, 13), Interval(43, 44)]
    write_intervals(ivs, tmp_path / "iv.csv")
    assert read_intervals(tmp_path / "iv.csv") == ivs


def test_interval_file_comments_and_errors(tmp_path):
    p = tmp_path / "iv.csv"
    p.write_text("# comment\n\n3,5\n")
    assert read_intervals(p) == [Interval(3, 5)]
    p.write_text("3,5\n9;10\n")
    with pytest.raises(ValueError, match=":2:"):
        read_intervals(p)
    p.write_text("7,5\n")
    with pytest.raises(ValueError, match="invalid interval"):
        read_intervals(p)
