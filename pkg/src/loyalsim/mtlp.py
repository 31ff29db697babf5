"""Multi-threshold programs for heterogeneous markets.

With n owner classes ordered by decreasing marginal self-use utility, a
ladder of strictly increasing marginal bonuses can screen the classes: each
class crosses exactly the thresholds worth its while.  The hyperbolic-bonus
(HB) construction fixes the marginal bonuses at B_i = q / (n - i + 1) and
chooses the thresholds to make each owner exactly indifferent at the edge of
its band.  Its total over-subsidization (bonus paid beyond opportunity cost)
is bounded by q, independent of n.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .monopoly import best_response
from .programs import SubsidySchedule, validate
from .utilities import OwnerClass, validate_class_ordering

__all__ = [
    "HbProgram",
    "HbConstructionError",
    "build_hb",
    "mtlp_best_response",
    "mtlp_revenue",
    "necessary_condition_slack",
    "oversubsidy_gap",
    "revenue_upper_bound",
    "MarketOutcome",
]

#: Minimum pointwise separation between adjacent marginal curves (in wage
#: units) below which the HB thresholds degenerate to the edge of their
#: admissible interval and construction is refused.
MIN_CLASS_SEPARATION = 1e-6


class HbConstructionError(RuntimeError):
    """Raised when the HB thresholds leave their admissible intervals."""


@dataclass(frozen=True)
class HbProgram:
    schedule: SubsidySchedule
    anchors: Tuple[float, ...]  # s_i: owner i's target sharing at wage B_i
    crossings: Tuple[float, ...]  # s_{i,i-1}: where f'_i meets B_{i-1}


@dataclass(frozen=True)
class MarketOutcome:
    sharing: Tuple[float, ...]
    revenue: float
    total_subsidy: float


def build_hb(owners: Sequence[OwnerClass], q: float) -> HbProgram:
    """Construct the hyperbolic-bonus program at base pay zero.

    Marginal bonuses are B_i = q / (n - i + 1).  Owner i's band target is
    s_i with f'_i(1 - s_i) = B_i; the band floor is the crossing s_{i,i-1}
    of f'_i with the previous bonus level.  Each threshold t_i is pinned by
    the owner's indifference between stopping at the band floor and climbing
    to s_i, which is linear in t_i and solved in closed form.  The residual
    of that indifference identity is re-checked by callers via
    ``necessary_condition_slack``.
    """
    if q <= 0:
        raise ValueError("renter charge must be positive")
    validate_class_ordering(owners)
    _check_separation(owners)

    n = len(owners)
    bonuses = [q / (n - i) for i in range(n)]  # B_i = q / (n - i + 1), i 1-based
    anchors: List[float] = []
    crossings: List[float] = []
    thresholds: List[float] = []
    for i, owner in enumerate(owners):
        u = owner.utility
        b_i = bonuses[i]
        s_i = u.sharing_at_wage(b_i)
        if i == 0:
            s_cross = 0.0
            t_i = s_i - u.marginal_integral(1.0 - s_i, 1.0) / b_i
        else:
            b_prev = bonuses[i - 1]
            s_cross = u.sharing_at_wage(b_prev)
            gain = u.marginal_integral(1.0 - s_i, 1.0 - s_cross)
            t_i = (b_i * s_i - b_prev * s_cross - gain) / (b_i - b_prev)
        if not s_cross < t_i < s_i:
            raise HbConstructionError(
                f"threshold t_{i + 1}={t_i:.6g} outside ({s_cross:.6g}, {s_i:.6g}); "
                "market violates the construction's assumptions"
            )
        anchors.append(s_i)
        crossings.append(s_cross)
        thresholds.append(t_i)

    sch = SubsidySchedule(0.0, tuple(thresholds), tuple(bonuses))
    problems = validate(sch)
    if problems:
        raise HbConstructionError("; ".join(problems))
    return HbProgram(sch, tuple(anchors), tuple(crossings))


def _check_separation(owners: Sequence[OwnerClass]) -> None:
    xs = np.linspace(0.05, 1.0, 40)
    for hi, lo in zip(owners, owners[1:]):
        gap = min(hi.utility.marginal(float(x)) - lo.utility.marginal(float(x)) for x in xs[:-1])
        if gap < MIN_CLASS_SEPARATION:
            raise HbConstructionError(
                f"owner classes {hi.id} and {lo.id} are separated by less than "
                f"{MIN_CLASS_SEPARATION} in wage space"
            )


def mtlp_best_response(u, sch: SubsidySchedule) -> float:
    """Owner's optimal sharing under a multi-threshold schedule."""
    s, _ = best_response(u, sch)
    return s


def mtlp_revenue(owners: Sequence[OwnerClass], sch: SubsidySchedule, q: float) -> MarketOutcome:
    """R = q * sum(s_i) - sum(W(s_i)) at owner best responses (base pay 0)."""
    if sch.base_pay != 0:
        raise ValueError("multi-threshold revenue accounting assumes base pay 0")
    sharing = tuple(mtlp_best_response(o.utility, sch) for o in owners)
    subsidy = sum(sch.cumulative_bonus(s) for s in sharing)
    return MarketOutcome(sharing, q * sum(sharing) - subsidy, subsidy)


def necessary_condition_slack(owners: Sequence[OwnerClass], sch: SubsidySchedule) -> List[float]:
    """Per-owner slack of the threshold bound any revenue-optimal ladder obeys.

    For owner i responding inside band i, the bonus collected between the
    band floor and the response cannot fall short of the forgone self-use
    value: B_i (s_i - t_i) + B_{i-1} (t_i - s_{i,i-1}) >= integral of f'_i.
    Returns LHS - RHS per owner (>= 0 up to float noise for valid programs;
    0 for HB, which is built from the equality case).
    """
    if len(owners) != sch.levels:
        raise ValueError("need one schedule level per owner class")
    slacks = []
    for i, owner in enumerate(owners):
        u = owner.utility
        b_i = sch.bonuses[i]
        t_i = sch.thresholds[i]
        s_i = mtlp_best_response(u, sch)
        if i == 0:
            b_prev, s_cross = 0.0, 0.0
        else:
            b_prev = sch.bonuses[i - 1]
            s_cross = u.sharing_at_wage(b_prev)
        lhs = b_i * (s_i - t_i) + b_prev * (t_i - s_cross)
        rhs = u.marginal_integral(1.0 - s_i, 1.0 - s_cross)
        slacks.append(lhs - rhs)
    return slacks


def oversubsidy_gap(owners: Sequence[OwnerClass], sch: SubsidySchedule, q: float) -> float:
    """Total bonus paid minus total opportunity cost covered.

    For an HB program this lies in [0, q] regardless of the number of
    classes: only the top band over-pays, by at most the full commission.
    """
    gap = 0.0
    for o in owners:
        s = mtlp_best_response(o.utility, sch)
        gap += sch.cumulative_bonus(s) - o.utility.marginal_integral(1.0 - s, 1.0)
    return gap


def revenue_upper_bound(owners: Sequence[OwnerClass], q: float, sharing: Sequence[float]) -> float:
    """Upper bound on any program's revenue at the given sharing profile.

    No program can extract more than q per shared unit minus the owners'
    opportunity cost: sum_i (q s_i - integral of f'_i over the shared span).
    """
    total = 0.0
    for o, s in zip(owners, sharing):
        if not 0.0 <= s <= 1.0:
            raise ValueError(f"sharing level {s} outside [0, 1]")
        total += q * s - o.utility.marginal_integral(1.0 - s, 1.0)
    return total
