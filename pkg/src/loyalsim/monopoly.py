"""Single-platform analysis.

Covers the owner's best response to an arbitrary subsidy schedule, the
revenue-optimal single-threshold program for a fixed base pay, and the
globally optimal price-plus-program (base pay zero, bonus equal to the full
renter charge).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .programs import SubsidySchedule, llp, no_program, validate
from .utilities import OwnerClass, SelfUseUtility

__all__ = [
    "best_response",
    "optimal_llp",
    "optimal_monopoly_program",
    "market_revenue",
    "participation_check",
    "MonopolyOutcome",
    "OptimalLlp",
]


@dataclass(frozen=True)
class MonopolyOutcome:
    sharing: Tuple[float, ...]
    revenue: float
    total_subsidy: float
    income: float  # (q - p) * total sharing, before subsidies


@dataclass(frozen=True)
class OptimalLlp:
    bonus: float
    threshold: float
    revenue: float
    schedule: SubsidySchedule
    degenerate: bool = False


def _owner_utility(u: SelfUseUtility, sch: SubsidySchedule, s: float) -> float:
    return u.value(1.0 - s) + sch.base_pay * s + sch.cumulative_bonus(s)


def best_response(u: SelfUseUtility, sch: SubsidySchedule) -> Tuple[float, float]:
    """Maximize f(1-s) + p s + W(s) over s in [0, 1].

    The objective is concave on each bonus segment, so the argmax is one of
    finitely many candidates: s = 0, each threshold, the stationary point of
    each segment (sharing at the segment's effective wage, clipped into the
    segment) and s = 1.  Ties break toward the larger sharing level, which
    makes the closed-form optimal programs attainable rather than suprema.
    """
    problems = validate(sch)
    if problems:
        raise ValueError("; ".join(problems))

    candidates = {0.0, 1.0}
    ts = list(sch.thresholds) + [1.0]
    # Segment below the first threshold pays base wage only.
    s_base = u.sharing_at_wage(sch.base_pay)
    if not sch.thresholds or s_base < sch.thresholds[0]:
        candidates.add(s_base)
    for k, b in enumerate(sch.bonuses):
        lo, hi = ts[k], ts[k + 1]
        candidates.add(lo)
        s_w = u.sharing_at_wage(sch.base_pay + b)
        if lo <= s_w < hi:
            candidates.add(s_w)

    ordered = sorted(candidates)
    values = [_owner_utility(u, sch, s) for s in ordered]
    top = max(values)
    # Programs are built around exact indifference, so candidates tied up to
    # float noise are genuine ties; resolve to the largest sharing level.
    tie_tol = 1e-9 * max(1.0, abs(top))
    best_s, best_u = max(
        (s, val) for s, val in zip(ordered, values) if val >= top - tie_tol
    )
    return best_s, best_u


def optimal_llp(u: SelfUseUtility, p: float, q: float) -> OptimalLlp:
    """Revenue-optimal single-threshold program at base pay p, charge q.

    The optimal bonus rebates the full commission, B* = q - p, and the
    threshold is set so the owner is exactly indifferent between the program
    and the no-program sharing level: the bonus paid beyond the threshold
    just covers the forgone self-use value.
    """
    if q < p or p < 0:
        raise ValueError("need 0 <= p <= q")
    s0 = u.sharing_at_wage(p)
    if q == p:
        return OptimalLlp(0.0, s0, 0.0, no_program(p), degenerate=True)
    s = u.sharing_at_wage(q)
    opportunity = u.marginal_integral(1.0 - s, 1.0 - s0) - p * (s - s0)
    B = q - p
    t = s - opportunity / B
    return OptimalLlp(B, t, B * t, llp(p, B, t))


def optimal_monopoly_program(u: SelfUseUtility, q: float) -> Tuple[float, OptimalLlp]:
    """Jointly optimal base pay and program: p* = 0, bonus q beyond t*."""
    if q <= 0:
        raise ValueError("renter charge must be positive")
    return 0.0, optimal_llp(u, 0.0, q)


def market_revenue(
    owners: Sequence[OwnerClass], sch: SubsidySchedule, q: float
) -> MonopolyOutcome:
    """Platform revenue (q - p) * S minus subsidies, at owner best responses."""
    sharing = []
    subsidy = 0.0
    for o in owners:
        s, _ = best_response(o.utility, sch)
        sharing.append(s)
        subsidy += sch.cumulative_bonus(s)
    total = sum(sharing)
    income = (q - sch.base_pay) * total
    return MonopolyOutcome(tuple(sharing), income - subsidy, subsidy, income)


def participation_check(
    owners: Sequence[OwnerClass], sch: SubsidySchedule, tol: float = 1e-12
) -> List[bool]:
    """Flag owners sharing strictly above their no-program level.

    With owners ordered by decreasing marginal utility and a non-decreasing
    marginal bonus, participation is monotone: once some owner joins, every
    later (lower-marginal) owner joins too.
    """
    flags = []
    for o in owners:
        s, _ = best_response(o.utility, sch)
        s0 = o.utility.sharing_at_wage(sch.base_pay)
        flags.append(s > s0 + tol)
    return flags
