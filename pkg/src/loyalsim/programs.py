"""Subsidy-program data model.

A platform pays owners a base wage ``p`` per shared unit plus a loyalty
bonus.  The bonus is described by a piecewise-linear cumulative schedule
``W(s)``: the marginal bonus is 0 below the first threshold and ``B_k`` on
``[t_k, t_{k+1})``, with thresholds and marginal bonuses strictly
increasing.  A single-threshold schedule is a linear loyalty program (LLP),
``W(s) = B * (s - t)^+``; an empty schedule is "no program".  Sign-up
bonuses (one-time, exclusivity-conditioned) are a separate tiny type.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

__all__ = [
    "SubsidySchedule",
    "SignUpBonus",
    "PlatformConfig",
    "llp",
    "no_program",
    "validate",
    "schedule_to_dict",
    "schedule_from_dict",
]


@dataclass(frozen=True)
class SubsidySchedule:
    base_pay: float
    thresholds: Tuple[float, ...] = ()
    bonuses: Tuple[float, ...] = ()

    @property
    def levels(self) -> int:
        return len(self.thresholds)

    def marginal_bonus(self, s: float) -> float:
        """Marginal bonus collected at sharing level s (0 below t_1)."""
        rate = 0.0
        for t, b in zip(self.thresholds, self.bonuses):
            if s >= t:
                rate = b
        return rate

    def cumulative_bonus(self, s: float) -> float:
        """W(s): total bonus for sharing s, integrating the marginal schedule."""
        if not 0.0 <= s <= 1.0:
            raise ValueError(f"sharing level {s} outside [0, 1]")
        problems = validate(self)
        if problems:
            raise ValueError("; ".join(problems))
        total = 0.0
        ts = list(self.thresholds) + [1.0]
        for k, b in enumerate(self.bonuses):
            lo, hi = ts[k], ts[k + 1]
            if s > lo:
                total += b * (min(s, hi) - lo)
        return total

    def wage_at(self, s: float) -> float:
        """Effective per-unit wage (base pay + marginal bonus) at level s."""
        return self.base_pay + self.marginal_bonus(s)


def validate(sch: SubsidySchedule) -> List[str]:
    """Return a list of schedule violations (empty when well formed)."""
    out: List[str] = []
    if sch.base_pay < 0:
        out.append("base pay must be non-negative")
    if len(sch.thresholds) != len(sch.bonuses):
        out.append("thresholds and bonuses must have equal length")
    for t in sch.thresholds:
        if not 0.0 < t < 1.0:
            out.append(f"threshold {t} outside (0, 1)")
    for i in range(1, len(sch.thresholds)):
        if not sch.thresholds[i] > sch.thresholds[i - 1]:
            out.append("thresholds not increasing")
            break
    for b in sch.bonuses:
        if not b > 0:
            out.append(f"marginal bonus {b} must be positive")
    for i in range(1, len(sch.bonuses)):
        if not sch.bonuses[i] > sch.bonuses[i - 1]:
            out.append("bonuses not strictly increasing")
            break
    return out


def llp(p: float, B: float, t: float) -> SubsidySchedule:
    """Single-threshold program paying bonus B per unit shared beyond t."""
    sch = SubsidySchedule(base_pay=p, thresholds=(t,), bonuses=(B,))
    problems = validate(sch)
    if problems:
        raise ValueError("; ".join(problems))
    return sch


def no_program(p: float = 0.0) -> SubsidySchedule:
    """Base pay only, W identically zero."""
    return SubsidySchedule(base_pay=p)


@dataclass(frozen=True)
class SignUpBonus:
    """One-time lump payment conditional on exclusive sharing."""

    amount: float = 0.0

    def __post_init__(self) -> None:
        if self.amount < 0:
            raise ValueError("sign-up bonus must be non-negative")


@dataclass(frozen=True)
class PlatformConfig:
    """Platform prices: owner pay p and renter charge q (q >= p)."""

    owner_pay: float
    renter_charge: float

    def __post_init__(self) -> None:
        if self.renter_charge <= 0:
            raise ValueError("renter charge must be positive")
        if self.owner_pay < 0 or self.renter_charge < self.owner_pay:
            raise ValueError("prices must satisfy 0 <= p <= q")

    @property
    def commission(self) -> Optional[float]:
        """beta with q = (1 + beta) p; undefined (None) at p = 0."""
        if self.owner_pay == 0:
            return None
        return self.renter_charge / self.owner_pay - 1.0


def schedule_to_dict(sch: SubsidySchedule, signup: Optional[float] = None) -> dict:
    """JSON-stable serialization (keys fixed so golden files stay put)."""
    out = {
        "p": sch.base_pay,
        "thresholds": list(sch.thresholds),
        "bonuses": list(sch.bonuses),
    }
    if signup is not None:
        out["signup"] = signup
    return out


def schedule_from_dict(d: dict) -> SubsidySchedule:
    sch = SubsidySchedule(
        base_pay=float(d["p"]),
        thresholds=tuple(float(t) for t in d.get("thresholds", ())),
        bonuses=tuple(float(b) for b in d.get("bonuses", ())),
    )
    problems = validate(sch)
    if problems:
        raise ValueError("; ".join(problems))
    return sch
