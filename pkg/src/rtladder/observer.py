"""Observer-side reconstruction of its own execution intervals.

The observer only sees its own slices. Each job spends up to ``lambda`` ticks
in a timer-polling loop at the front of its execution; a preemption ends the
current interval and the unspent budget carries over to the job's next slice.
At tick resolution a preemption is exactly a gap between consecutive slices
of the same job, so the polling loop reduces to clipping slices to the budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .model import Interval
from .sim import Slice, Trace


class MissingObserverError(LookupError):
    pass


@dataclass(frozen=True)
class ObserverConfig:
    lam: int  # measured ticks per observer job
    wcet: int
    attack_start: int = 0
    attack_duration: int | None = None  # None: until the trace horizon

    def __post_init__(self):
        if not 0 <= self.lam <= self.wcet:
            raise ValueError(f"lambda must satisfy 0 <= lambda <= e_o, got {self.lam} (e_o={self.wcet})")
        if self.attack_start < 0:
            raise ValueError("attack_start must be >= 0")
        if self.attack_duration is not None and self.attack_duration < 0:
            raise ValueError("attack_duration must be >= 0")

    def window(self, horizon: int) -> Interval:
        end = horizon if self.attack_duration is None else self.attack_start + self.attack_duration
        return Interval(self.attack_start, end)


def measure_job(slices: list[Slice], lam: int) -> list[Interval]:
    """Intervals one job records with a budget of ``lam`` ticks."""
    out = []
    budget = lam
    for s in slices:
        if budget <= 0:
            break
        take = min(budget, s.end - s.start)
        out.append(Interval(s.start, s.start + take))
        budget -= take
    return out


def reconstruct_intervals(trace: Trace, observer_id: str, cfg: ObserverConfig) -> list[Interval]:
    """Execution intervals the observer measures inside the attack window.

    Intervals straddling a window boundary are truncated to it.
    """
    own = trace.slices_of(observer_id)
    if not own and not trace.releases_of(observer_id):
        raise MissingObserverError(f"observer {observer_id!r} does not appear in the trace")
    lo, hi = cfg.window(trace.horizon)

    out = []
    job_slices: list[Slice] = []
    for s in own + [None]:
        if job_slices and (s is None or s.job != job_slices[0].job):
            for a, b in measure_job(job_slices, cfg.lam):
                a, b = max(a, lo), min(b, hi)
                if a < b:
                    out.append(Interval(a, b))
            job_slices = []
        if s is not None:
            job_slices.append(s)
    return out


def write_intervals(intervals, path: str | Path) -> None:
    Path(path).write_text("".join(f"{a},{b}\n" for a, b in intervals))


def read_intervals(path: str | Path) -> list[Interval]:
    """Parse ``start,end`` lines; blank lines and ``#`` comments are skipped."""
    out = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            a, b = (int(x) for x in line.split(","))
        except ValueError:
            raise ValueError(f"{path}:{lineno}: expected 'start,end', got {line!r}") from None
        if a > b or a < 0:
            raise ValueError(f"{path}:{lineno}: invalid interval [{a},{b})")
        out.append(Interval(a, b))
    return out
