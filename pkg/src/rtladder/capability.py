"""Pre-attack analytics for an observer/victim pair."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import checked_tick, gcd_pair, lcm_pair


def coverage_fraction(e_o: int, p_o: int, p_v: int) -> Fraction:
    if min(e_o, p_o, p_v) < 1:
        raise ValueError("e_o, p_o and p_v must all be >= 1")
    return Fraction(e_o, gcd_pair(p_o, p_v))


def coverage_ratio(e_o: int, p_o: int, p_v: int) -> float:
    """``e_o / gcd(p_o, p_v)``; at least 1 means every ladder column is reachable."""
    return float(coverage_fraction(e_o, p_o, p_v))


def choose_lambda(e_o: int, p_o: int, p_v: int) -> int:
    """Smallest budget that still covers every column once, else all of ``e_o``."""
    g = gcd_pair(p_o, p_v)
    return g if e_o >= g else e_o


def attack_window(p_o: int, p_v: int, multiple: int) -> int:
    if multiple < 1:
        raise ValueError("multiple must be >= 1")
    return checked_tick(multiple * lcm_pair(p_o, p_v))


@dataclass(frozen=True)
class CapabilityReport:
    coverage: Fraction
    recommended_lambda: int
    window: int  # lcm(p_o, p_v)
    full_coverage: bool

    def to_dict(self) -> dict:
        return {
            "coverage": float(self.coverage),
            "coverage_exact": str(self.coverage),
            "recommended_lambda": self.recommended_lambda,
            "lcm": self.window,
            "full_coverage": self.full_coverage,
        }


def analyze_pair(e_o: int, p_o: int, p_v: int) -> CapabilityReport:
    c = coverage_fraction(e_o, p_o, p_v)
    return CapabilityReport(c, choose_lambda(e_o, p_o, p_v), lcm_pair(p_o, p_v), c >= 1)
