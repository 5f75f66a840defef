import os

import pytest
from hypothesis import HealthCheck, settings

from rtladder.model import TaskSet, TaskSpec

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", parent=settings.get_profile("default"), max_examples=300)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def example_taskset() -> TaskSet:
    # (p, e, a, pri) from the worked example; t4 has the highest priority
    return TaskSet(
        [
            TaskSpec("t1", 15, 1, 3, 1),
            TaskSpec("obs", 10, 2, 0, 2),
            TaskSpec("vic", 8, 2, 1, 3),
            TaskSpec("t4", 6, 1, 4, 4),
        ],
        observer_id="obs",
        victim_id="vic",
    )


@pytest.fixture
def ex1() -> TaskSet:
    return example_taskset()


EX1_INTERVALS = [(0, 1), (12, 13), (20, 21), (30, 31), (43, 44)]


def tick_schedule(ts: TaskSet, horizon: int, releases: dict, demands: dict) -> list[tuple[str, int, int]]:
    """Reference scheduler: one tick at a time, highest pending priority runs.

    ``releases[id]`` lists release ticks, ``demands[id][k]`` the k-th job's
    execution time. Returns merged (task, start, end) runs.
    """
    pending = {t.id: [] for t in ts.tasks}  # FIFO of [job, remaining]
    nxt = {t.id: 0 for t in ts.tasks}
    pri = {t.id: t.priority for t in ts.tasks}
    runs = []
    for tick in range(horizon):
        for tid, rel in releases.items():
            while nxt[tid] < len(rel) and rel[nxt[tid]] <= tick:
                k = nxt[tid]
                pending[tid].append([k, demands[tid][k]])
                nxt[tid] += 1
        ready = [tid for tid, q in pending.items() if q]
        if not ready:
            continue
        tid = max(ready, key=pri.__getitem__)
        job = pending[tid][0]
        job[1] -= 1
        if runs and runs[-1][0] == tid and runs[-1][1] == job[0] and runs[-1][3] == tick:
            runs[-1][3] = tick + 1
        else:
            runs.append([tid, job[0], tick, tick + 1])
        if job[1] == 0:
            pending[tid].pop(0)
    return [tuple(r) for r in runs]
