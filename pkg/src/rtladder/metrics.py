"""Inference success and precision ratio, plus batch aggregation."""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import Sequence


def success(a_hat: int | None, a_v: int, p_v: int) -> bool:
    return a_hat is not None and a_hat % p_v == a_v % p_v


def precision_ratio(a_hat: int | None, a_v: int, p_v: int) -> float:
    """Two-branch precision score in ``[0, 1]``; 1 is an exact hit.

    ``a_hat=None`` (no candidate) scores as the worst case, ``eps = p_v / 2``.
    """
    if a_hat is None:
        return 0.0
    if not (0 <= a_hat < p_v and 0 <= a_v < p_v):
        raise ValueError("offsets must lie in [0, p_v)")
    eps = abs(a_hat - a_v)
    if 2 * eps > p_v:
        return 1.0 - (p_v - eps) / (p_v / 2)
    return 1.0 - eps / (p_v / 2)


@dataclass(frozen=True)
class RunOutcome:
    success: bool
    precision: float
    epsilon: int | None
    duration_units: float

    def __post_init__(self):
        if self.success and self.precision != 1.0:
            raise ValueError("a successful run must have precision 1")


def outcome(a_hat: int | None, a_v: int, p_v: int, duration_units: float) -> RunOutcome:
    eps = None if a_hat is None else abs(a_hat - a_v)
    return RunOutcome(success(a_hat, a_v, p_v), precision_ratio(a_hat, a_v, p_v), eps, duration_units)


@dataclass(frozen=True)
class Summary:
    n: int
    success_rate: float
    precision_mean: float
    precision_sd: float
    precision_min: float
    precision_median: float
    precision_max: float


def aggregate(outcomes: Sequence[RunOutcome]) -> Summary:
    if not outcomes:
        raise ValueError("cannot aggregate an empty list of outcomes")
    prec = [o.precision for o in outcomes]
    return Summary(
        n=len(outcomes),
        success_rate=sum(o.success for o in outcomes) / len(outcomes),
        precision_mean=statistics.fmean(prec),
        precision_sd=statistics.pstdev(prec) if len(prec) > 1 else 0.0,
        precision_min=min(prec),
        precision_median=statistics.median(prec),
        precision_max=max(prec),
    )
