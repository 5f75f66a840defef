"""Schedule ladder: fold observed intervals modulo the victim period and infer
the victim's arrival column and initial offset."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .model import Interval, checked_tick


class OutOfWindowError(ValueError):
    pass


class NoCandidateError(LookupError):
    """Every column was eliminated; there is nothing to infer from."""


@dataclass
class Ladder:
    period: int
    start: int = 0
    eliminated: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.period < 1:
            raise ValueError(f"victim period must be >= 1, got {self.period}")
        if self.eliminated is None:
            self.eliminated = np.zeros(self.period, dtype=bool)

    def column(self, tick: int) -> int:
        return (tick - self.start) % self.period

    @property
    def surviving(self) -> list[int]:
        return np.flatnonzero(~self.eliminated).tolist()

    def copy(self) -> "Ladder":
        return Ladder(self.period, self.start, self.eliminated.copy())


def build_ladder(period: int, start: int = 0) -> Ladder:
    return Ladder(period, start)


def mark_intervals(ladder: Ladder, intervals: Iterable[Interval]) -> Ladder:
    """Eliminate every column touched by an observed interval (in place)."""
    p = ladder.period
    for a, b in intervals:
        if a < ladder.start:
            raise OutOfWindowError(f"interval [{a},{b}) starts before ladder start {ladder.start}")
        if b - a <= 0:
            continue
        if b - a >= p:
            ladder.eliminated[:] = True
            continue
        c0 = (a - ladder.start) % p
        c1 = c0 + (b - a)
        if c1 <= p:
            ladder.eliminated[c0:c1] = True
        else:
            ladder.eliminated[c0:] = True
            ladder.eliminated[: c1 - p] = True
    return ladder


def surviving_runs(eliminated: np.ndarray) -> list[Interval]:
    """Maximal circular runs of surviving columns, as ``[start, start+len)``
    with ``start`` in ``[0, p)``; a run may extend past ``p`` when it wraps."""
    p = len(eliminated)
    alive = ~eliminated
    if alive.all():
        return [Interval(0, p)]
    if not alive.any():
        return []
    # rotate so the scan starts at an eliminated column; no run is split then
    pivot = int(np.flatnonzero(eliminated)[0])
    rolled = np.roll(alive, -pivot)
    padded = np.concatenate(([False], rolled, [False])).astype(np.int8)
    edges = np.diff(padded)
    starts = np.flatnonzero(edges == 1)
    stops = np.flatnonzero(edges == -1)
    runs = []
    for s, e in zip(starts.tolist(), stops.tolist()):
        first = (s + pivot) % p
        runs.append(Interval(first, first + (e - s)))
    runs.sort()
    return runs


@dataclass(frozen=True)
class InferenceResult:
    period: int
    start: int
    candidates: tuple[Interval, ...]
    delta_hat: int | None  # None when no column survives
    surviving: int

    @property
    def has_candidate(self) -> bool:
        return self.delta_hat is not None

    @property
    def largest_len(self) -> int:
        return max((c.length for c in self.candidates), default=0)

    @property
    def a_hat(self) -> int | None:
        if self.delta_hat is None:
            return None
        return infer_initial_offset(self, self.start, self.period)

    def to_dict(self) -> dict:
        return {
            "period": self.period,
            "start": self.start,
            "delta_hat": self.delta_hat,
            "a_hat": self.a_hat,
            "candidates": [list(c) for c in self.candidates],
            "largest_len": self.largest_len,
            "surviving": self.surviving,
        }


def infer_arrival_column(ladder: Ladder) -> InferenceResult:
    """Pick the start of the longest surviving run (ties: smallest start)."""
    runs = surviving_runs(ladder.eliminated)
    if runs:
        best = min(runs, key=lambda r: (-r.length, r.start))
        delta = best.start
    else:
        delta = None
    return InferenceResult(
        period=ladder.period,
        start=ladder.start,
        candidates=tuple(runs),
        delta_hat=delta,
        surviving=int((~ladder.eliminated).sum()),
    )


def infer_initial_offset(res: InferenceResult, start: int, period: int) -> int:
    if res.delta_hat is None:
        raise NoCandidateError("no surviving column to infer an offset from")
    return (start + res.delta_hat) % period


def predict_arrival(a_hat: int, period: int, k: int) -> int:
    """Release time of the victim's ``k``-th job (``k = 0`` is the first)."""
    if not 0 <= a_hat < period:
        raise ValueError("a_hat must lie in [0, period)")
    if k < 0:
        raise ValueError("k must be >= 0")
    return checked_tick(a_hat + period * k)


def infer(intervals: Iterable[Interval], period: int, start: int = 0) -> InferenceResult:
    return infer_arrival_column(mark_intervals(build_ladder(period, start), intervals))
