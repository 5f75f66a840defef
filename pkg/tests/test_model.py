import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rtladder.model import (
    MAX_TICK,
    Interval,
    TaskKind,
    TaskSet,
    TaskSpec,
    TimeOverflowError,
    ceil_div,
    gcd_pair,
    hyperperiod,
    lcm_pair,
    load_taskset,
    save_taskset,
    taskset_from_dict,
    taskset_to_dict,
    validate_taskset,
)


def test_example_taskset_is_valid(ex1):
    assert validate_taskset(ex1) == []


def test_duplicate_period_reported(ex1):
    tasks = list(ex1.tasks)
    tasks[0] = TaskSpec("t1", 10, 1, 3, 1)
    assert "duplicate period" in validate_taskset(TaskSet(tasks, "obs", "vic"))


def test_victim_below_observer_reported(ex1):
    ts = TaskSet(ex1.tasks, observer_id="vic", victim_id="obs")
    assert "victim not higher priority than observer" in validate_taskset(ts)


def test_sporadic_victim_reported(ex1):
    tasks = [TaskSpec("vic", 8, 2, 1, 3, TaskKind.SPORADIC) if t.id == "vic" else t for t in ex1.tasks]
    assert "victim is not periodic" in validate_taskset(TaskSet(tasks, "obs", "vic"))


@pytest.mark.parametrize(
    "bad, needle",
    [
        (TaskSpec("x", 20, 0, 0, 9), "wcet"),
        (TaskSpec("x", 20, 21, 0, 9), "wcet"),
        (TaskSpec("x", 20, 1, 20, 9), "offset"),
        (TaskSpec("x", 20, 1, 0, 9, deadline=15), "deadline"),
        (TaskSpec("x", 20, 1, 0, 0), "priority"),
        (TaskSpec("x", 20, 1, 0, 4), "duplicate priority"),
        (TaskSpec("t1", 20, 1, 0, 9), "duplicate task id"),
    ],
)
def test_violations_are_data(ex1, bad, needle):
    ts = TaskSet(list(ex1.tasks) + [bad], "obs", "vic")
    problems = validate_taskset(ts)
    assert any(needle in p for p in problems), problems


def test_missing_roles():
    ts = TaskSet([TaskSpec("a", 5, 1, 0, 1)], "obs", "vic")
    assert {"observer not in taskset", "victim not in taskset"} <= set(validate_taskset(ts))


def test_validate_does_not_mutate(ex1):
    before = taskset_to_dict(ex1)
    assert validate_taskset(ex1) == validate_taskset(ex1)
    assert taskset_to_dict(ex1) == before


@pytest.mark.parametrize("a, b, g, l", [(10, 8, 2, 40), (7, 6, 1, 42), (12, 12, 12, 12), (1, 9, 1, 9)])
def test_gcd_lcm_examples(a, b, g, l):
    assert gcd_pair(a, b) == g
    assert lcm_pair(a, b) == l


@given(st.integers(1, 1000), st.integers(1, 1000))
def test_lcm_divisible_by_both(a, b):
    l = lcm_pair(a, b)
    assert l % a == 0 and l % b == 0
    assert l * gcd_pair(a, b) == a * b
    assert gcd_pair(a, b) == math.gcd(a, b)


def test_nonpositive_gcd_args_rejected():
    with pytest.raises(ValueError):
        gcd_pair(0, 3)


def test_lcm_overflow_is_an_error():
    big = 2**62 + 1  # odd, coprime to 4
    with pytest.raises(TimeOverflowError):
        lcm_pair(big, 4)
    assert lcm_pair(MAX_TICK, 1) == MAX_TICK


def test_hyperperiod_and_ceil_div():
    assert hyperperiod([15, 10, 8, 6]) == 120
    assert ceil_div(7, 2) == 4 and ceil_div(8, 2) == 4


def test_interval_length():
    iv = Interval(3, 7)
    assert iv.length == 4 and len(iv) == 4


def test_default_deadline_and_utilization():
    t = TaskSpec("a", 10, 2, 0, 1)
    assert t.deadline == 10
    assert t.utilization == 0.2


def test_taskset_accessors(ex1):
    assert ex1.observer.id == "obs" and ex1.victim.id == "vic"
    assert [t.id for t in ex1.by_priority()] == ["t4", "vic", "obs", "t1"]
    assert {t.id for t in ex1.higher_priority("obs")} == {"vic", "t4"}
    assert ex1.utilization == pytest.approx(1 / 15 + 2 / 10 + 2 / 8 + 1 / 6)
    with pytest.raises(KeyError):
        ex1["nope"]


def test_taskset_file_roundtrip(ex1, tmp_path):
    ts = TaskSet(ex1.tasks, "obs", "vic", meta={"utilization": 0.68})
    assert taskset_from_dict(taskset_to_dict(ts)) == ts
    save_taskset(ts, tmp_path / "ts.json")
    back = load_taskset(tmp_path / "ts.json")
    assert back == ts and back.meta == ts.meta
