"""Task model, integer time arithmetic and taskset validation."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

# Time is an unsigned tick count that must fit a signed 64-bit word.
MAX_TICK = 2**63 - 1


class TimeOverflowError(OverflowError):
    pass


def checked_tick(value: int) -> int:
    if value < 0 or value > MAX_TICK:
        raise TimeOverflowError(f"tick value {value} outside [0, 2**63)")
    return value


def gcd_pair(a: int, b: int) -> int:
    if a < 1 or b < 1:
        raise ValueError(f"gcd_pair needs positive arguments, got ({a}, {b})")
    while b:
        a, b = b, a % b
    return a


def lcm_pair(a: int, b: int) -> int:
    return checked_tick(a // gcd_pair(a, b) * b)


class Interval(NamedTuple):
    """Half-open tick interval ``[start, end)``."""

    start: int
    end: int

    def __len__(self) -> int:
        return self.end - self.start

    @property
    def length(self) -> int:
        return self.end - self.start


class TaskKind(str, enum.Enum):
    PERIODIC = "periodic"
    SPORADIC = "sporadic"


@dataclass(frozen=True)
class TaskSpec:
    """Static parameters of one task.

    For sporadic tasks ``period`` is the minimum inter-arrival time. Larger
    ``priority`` means higher priority.
    """

    id: str
    period: int
    wcet: int
    offset: int
    priority: int
    kind: TaskKind = TaskKind.PERIODIC
    deadline: int | None = None

    def __post_init__(self):
        if self.deadline is None:
            object.__setattr__(self, "deadline", self.period)
        object.__setattr__(self, "kind", TaskKind(self.kind))

    @property
    def utilization(self) -> float:
        return self.wcet / self.period


@dataclass(frozen=True)
class TaskSet:
    tasks: tuple[TaskSpec, ...]
    observer_id: str
    victim_id: str
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "tasks", tuple(self.tasks))

    def __getitem__(self, task_id: str) -> TaskSpec:
        for task in self.tasks:
            if task.id == task_id:
                return task
        raise KeyError(task_id)

    def __len__(self) -> int:
        return len(self.tasks)

    @property
    def observer(self) -> TaskSpec:
        return self[self.observer_id]

    @property
    def victim(self) -> TaskSpec:
        return self[self.victim_id]

    @property
    def utilization(self) -> float:
        return sum(t.utilization for t in self.tasks)

    def by_priority(self) -> list[TaskSpec]:
        """Tasks ordered from highest to lowest priority."""
        return sorted(self.tasks, key=lambda t: -t.priority)

    def higher_priority(self, task_id: str) -> list[TaskSpec]:
        pri = self[task_id].priority
        return [t for t in self.tasks if t.priority > pri]


def validate_taskset(ts: TaskSet) -> list[str]:
    """Return every violated model constraint; an empty list means ok.

    Schedulability is not checked here (see ``sim.response_time_analysis``).
    """
    problems = []
    ids = [t.id for t in ts.tasks]
    if len(set(ids)) != len(ids):
        problems.append("duplicate task id")
    if not ts.tasks:
        problems.append("empty taskset")
    for t in ts.tasks:
        if t.period < 1:
            problems.append(f"{t.id}: period must be >= 1")
            continue
        if not 1 <= t.wcet <= t.period:
            problems.append(f"{t.id}: wcet must satisfy 1 <= e <= p")
        if t.deadline != t.period:
            problems.append(f"{t.id}: deadline must equal period")
        if not 0 <= t.offset < t.period:
            problems.append(f"{t.id}: offset must satisfy 0 <= a < p")
        if t.priority < 1:
            problems.append(f"{t.id}: priority must be a positive integer")
    periods = [t.period for t in ts.tasks]
    if len(set(periods)) != len(periods):
        problems.append("duplicate period")
    priorities = [t.priority for t in ts.tasks]
    if len(set(priorities)) != len(priorities):
        problems.append("duplicate priority")

    if ts.observer_id not in ids:
        problems.append("observer not in taskset")
    if ts.victim_id not in ids:
        problems.append("victim not in taskset")
    if ts.observer_id in ids and ts.victim_id in ids:
        if ts.observer_id == ts.victim_id:
            problems.append("observer and victim are the same task")
        if ts.victim.priority <= ts.observer.priority:
            problems.append("victim not higher priority than observer")
        if ts.victim.kind is not TaskKind.PERIODIC:
            problems.append("victim is not periodic")
    return problems


# -- taskset files ------------------------------------------------------------

def taskset_to_dict(ts: TaskSet) -> dict:
    doc = {
        "observer_id": ts.observer_id,
        "victim_id": ts.victim_id,
        "tasks": [
            {
                "id": t.id,
                "kind": t.kind.value,
                "period": t.period,
                "deadline": t.deadline,
                "wcet": t.wcet,
                "offset": t.offset,
                "priority": t.priority,
            }
            for t in ts.tasks
        ],
    }
    if ts.meta:
        doc["meta"] = ts.meta
    return doc


def taskset_from_dict(doc: dict) -> TaskSet:
    tasks = [
        TaskSpec(
            id=str(t["id"]),
            period=int(t["period"]),
            wcet=int(t["wcet"]),
            offset=int(t["offset"]),
            priority=int(t["priority"]),
            kind=TaskKind(t.get("kind", "periodic")),
            deadline=int(t.get("deadline", t["period"])),
        )
        for t in doc["tasks"]
    ]
    return TaskSet(tasks, str(doc["observer_id"]), str(doc["victim_id"]), dict(doc.get("meta", {})))


def save_taskset(ts: TaskSet, path: str | Path) -> None:
    Path(path).write_text(json.dumps(taskset_to_dict(ts), indent=2) + "\n")


def load_taskset(path: str | Path) -> TaskSet:
    return taskset_from_dict(json.loads(Path(path).read_text()))


def hyperperiod(periods) -> int:
    h = 1
    for p in periods:
        h = lcm_pair(h, p)
    return h


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)

