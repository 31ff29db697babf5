"""Two-platform competition.

Platform a (the lower-paying one, unless symmetric) may deploy a one-time
sign-up bonus or a linear loyalty program against platform b.  Owners end up
exclusive whenever a program is in play, so the analysis reduces to closed
forms for the bonus that makes each owner class indifferent, plus a 1-D
search for the loyalty bonus when both classes are targeted.

All operations take wages and utilities at face value; market construction
(including the case-study utility scale) lives in :mod:`loyalsim.markets`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

from . import markets
from .monopoly import best_response
from .programs import llp as make_llp, no_program
from .utilities import OwnerClass, SelfUseUtility

__all__ = [
    "NoProgram",
    "SignUp",
    "Llp",
    "DuopolyMarket",
    "DuopolyOutcome",
    "OwnerPlan",
    "SignupPlan",
    "LlpPlan",
    "CounterAttack",
    "SqueezeOut",
    "ViabilityError",
    "CertificationError",
    "owner_choice",
    "no_program_equilibrium",
    "optimal_signup",
    "optimal_llp_duopoly",
    "signup_counter",
    "squeeze_out",
    "critical_k",
]


# --------------------------------------------------------------------------
# Strategies and market description
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class NoProgram:
    pass


@dataclass(frozen=True)
class SignUp:
    bonus: float


@dataclass(frozen=True)
class Llp:
    bonus: float
    threshold: float


Strategy = Union[NoProgram, SignUp, Llp]


class ViabilityError(ValueError):
    """The weaker platform cannot outbid the stronger one's renter charge."""


class CertificationError(RuntimeError):
    """Squeeze-out could not certify a zero-revenue best response for b."""


@dataclass(frozen=True)
class DuopolyMarket:
    """Two owner classes and two platforms sharing a commission rate.

    Platform j pays p_j per shared unit and charges renters
    q_j = (1 + beta) p_j.  Class 1 has the higher marginal self-use utility
    (shares less); class 2 shares more at any wage.
    """

    owner1: OwnerClass
    owner2: OwnerClass
    p_a: float
    p_b: float
    beta: float

    def __post_init__(self) -> None:
        if self.p_a <= 0 or self.p_b <= 0:
            raise ValueError("platform pays must be positive")
        if self.beta <= 0:
            raise ValueError("commission rate must be positive")

    @property
    def q_a(self) -> float:
        return (1.0 + self.beta) * self.p_a

    @property
    def q_b(self) -> float:
        return (1.0 + self.beta) * self.p_b

    def require_viable(self) -> None:
        if self.p_a < self.p_b and self.p_b >= self.q_a:
            raise ViabilityError(
                f"p_b={self.p_b} >= q_a={self.q_a}: platform a cannot compete"
            )


@dataclass(frozen=True)
class OwnerPlan:
    s_a: float
    s_b: float
    utility: float
    platform: Optional[str]  # 'a', 'b', 'both' or None


@dataclass(frozen=True)
class DuopolyOutcome:
    plans: Tuple[OwnerPlan, ...]
    revenue_a: float
    revenue_b: float


# --------------------------------------------------------------------------
# Owner platform choice
# --------------------------------------------------------------------------

def _llp_response(u: SelfUseUtility, p: float, bonus: float, t: float) -> Tuple[float, float]:
    """Owner's best response to a loyalty program, tolerating edge thresholds.

    A threshold at (or below) 0 makes the bonus unconditional, i.e. a flat
    wage p + B; at (or above) 1 it is unreachable.  Interior thresholds go
    through the general schedule machinery.
    """
    if bonus <= 0.0 or t >= 1.0:
        return best_response(u, no_program(p))
    if t <= 0.0:
        s = u.sharing_at_wage(p + bonus)
        return s, u.value(1.0 - s) + (p + bonus) * s
    return best_response(u, make_llp(p, bonus, t))


def owner_choice(
    u: SelfUseUtility,
    a: Tuple[float, Strategy],
    b: Tuple[float, Strategy],
) -> OwnerPlan:
    """Owner's optimal allocation across two platforms.

    Supported pairings: no programs on either side, a program (loyalty or
    sign-up) against no program, and loyalty against sign-up — plus mirror
    images.  Whenever a program with effective wage above the rival's pay is
    in play the optimum is exclusive, so candidates are enumerated per
    platform; indifference resolves toward the program side (for loyalty
    versus sign-up, toward the loyalty side).
    """
    p_a, strat_a = a
    p_b, strat_b = b

    if isinstance(strat_b, (SignUp, Llp)) and isinstance(strat_a, NoProgram):
        plan = owner_choice(u, b, a)
        swapped = {"a": "b", "b": "a", "both": "both", None: None}[plan.platform]
        return OwnerPlan(plan.s_b, plan.s_a, plan.utility, swapped)

    if isinstance(strat_a, NoProgram) and isinstance(strat_b, NoProgram):
        if p_a == p_b:
            s = u.sharing_at_wage(p_a)
            util = u.value(1.0 - s) + p_a * s
            return OwnerPlan(s / 2.0, s / 2.0, util, "both" if s > 0 else None)
        p_hi, side = (p_a, "a") if p_a > p_b else (p_b, "b")
        s = u.sharing_at_wage(p_hi)
        util = u.value(1.0 - s) + p_hi * s
        if side == "a":
            return OwnerPlan(s, 0.0, util, "a" if s > 0 else None)
        return OwnerPlan(0.0, s, util, "b" if s > 0 else None)

    # Platform a runs a program; b runs nothing or a sign-up bonus.
    if isinstance(strat_a, Llp):
        s_a, u_a = _llp_response(u, p_a, strat_a.bonus, strat_a.threshold)
    elif isinstance(strat_a, SignUp):
        s_a = u.sharing_at_wage(p_a)
        u_a = u.value(1.0 - s_a) + p_a * s_a + strat_a.bonus
    else:
        raise ValueError(f"unsupported strategy combination: {strat_a} vs {strat_b}")

    if isinstance(strat_b, NoProgram):
        bonus_b = 0.0
    elif isinstance(strat_b, SignUp) and isinstance(strat_a, Llp):
        bonus_b = strat_b.bonus
    else:
        raise ValueError(f"unsupported strategy combination: {strat_a} vs {strat_b}")

    s_b = u.sharing_at_wage(p_b)
    u_b = u.value(1.0 - s_b) + p_b * s_b + bonus_b

    # Ties (up to float noise around exact indifference constructions) go to
    # the (loyalty-)program platform a.
    if u_a >= u_b - 1e-9 * max(1.0, abs(u_b)):
        return OwnerPlan(s_a, 0.0, u_a, "a" if s_a > 0 else None)
    return OwnerPlan(0.0, s_b, u_b, "b" if s_b > 0 else None)


def no_program_equilibrium(m: DuopolyMarket) -> DuopolyOutcome:
    """Winner-take-all (or equal-split) outcome when nobody runs a program."""
    plans = tuple(
        owner_choice(o.utility, (m.p_a, NoProgram()), (m.p_b, NoProgram()))
        for o in (m.owner1, m.owner2)
    )
    r_a = (m.q_a - m.p_a) * sum(pl.s_a for pl in plans)
    r_b = (m.q_b - m.p_b) * sum(pl.s_b for pl in plans)
    return DuopolyOutcome(plans, r_a, r_b)


# --------------------------------------------------------------------------
# Optimal sign-up bonus for the weaker platform
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SignupPlan:
    bonus: float
    target: str  # 'both', 'owner1' or 'none'
    revenue: float
    feasible: bool  # sufficient condition p_b < p_a (1 + lambda * beta)
    revenue_owner1: float
    revenue_both: float


def _signup_indifference_bonus(u: SelfUseUtility, p_a: float, p_b: float) -> float:
    """Minimal lump sum making exclusive sharing on a match sharing on b."""
    s_ia = u.sharing_at_wage(p_a)
    s_ib = u.sharing_at_wage(p_b)
    lost = u.marginal_integral(1.0 - s_ib, 1.0 - s_ia) - p_a * (s_ib - s_ia)
    return (p_b - p_a) * s_ib - lost


def optimal_signup(m: DuopolyMarket) -> SignupPlan:
    """Platform a's best one-time bonus when b runs nothing.

    Paying owner 1's indifference bonus B1 retains only the low-sharing
    class; paying owner 2's (larger) bonus B2 to everyone retains both.
    Whichever candidate revenue is larger wins, and a stays out when both
    are non-positive.
    """
    if m.p_a > m.p_b:
        raise ValueError("sign-up analysis assumes platform a is the weaker side")
    m.require_viable()
    u1, u2 = m.owner1.utility, m.owner2.utility
    margin = m.q_a - m.p_a

    b1 = max(0.0, _signup_indifference_bonus(u1, m.p_a, m.p_b))
    b2 = max(0.0, _signup_indifference_bonus(u2, m.p_a, m.p_b))
    s_1a = u1.sharing_at_wage(m.p_a)
    s_2a = u2.sharing_at_wage(m.p_a)
    r_one = margin * s_1a - b1
    r_both = margin * (s_1a + s_2a) - 2.0 * b2

    s_1b = u1.sharing_at_wage(m.p_b)
    lam = s_1a / s_1b if s_1b > 0 else 1.0
    feasible = m.p_b < m.p_a * (1.0 + lam * m.beta)

    if max(r_one, r_both) <= 0.0:
        return SignupPlan(0.0, "none", 0.0, feasible, r_one, r_both)
    if r_both >= r_one:
        return SignupPlan(b2, "both", r_both, feasible, r_one, r_both)
    return SignupPlan(b1, "owner1", r_one, feasible, r_one, r_both)


# --------------------------------------------------------------------------
# Optimal loyalty program for the weaker platform
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class LlpPlan:
    bonus: float
    threshold: float
    target: str  # 'both' or 'owner2'
    revenue: float
    revenue_owner2: float
    revenue_both: float
    bonus_both: float


def _golden_section_max(
    fn: Callable[[float], float], lo: float, hi: float, tol: float = 1e-8
) -> Tuple[float, float]:
    """Golden-section maximization on [lo, hi]; endpoints included."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = fn(d)
    x = 0.5 * (a + b)
    candidates = [(fn(x), x), (fn(lo), lo), (fn(hi), hi)]
    best_val, best_x = max(candidates, key=lambda pair: pair[0])
    return best_x, best_val


def _llp_threshold_one_owner(
    u: SelfUseUtility, p_a: float, bonus: float, p_b: float
) -> float:
    """Threshold making the owner indifferent between a's program and b.

    Solves  f(1-s_a) + p_a s_a + B (s_a - t) = f(1-s_b) + p_b s_b  for t,
    with s_a the owner's sharing at wage p_a + B and s_b at wage p_b.
    """
    s_a = u.sharing_at_wage(p_a + bonus)
    s_b = u.sharing_at_wage(p_b)
    gain = u.marginal_integral(1.0 - s_a, 1.0 - s_b)  # f(1-s_b) - f(1-s_a)
    return s_a - (gain + p_b * s_b - p_a * s_a) / bonus


def optimal_llp_duopoly(m: DuopolyMarket) -> LlpPlan:
    """Platform a's best loyalty program when b runs nothing.

    Candidate 1 rebates the full commission (B = q_a - p_a) with the
    threshold pinned by owner 2's indifference, conceding owner 1 to b.
    Candidate 2 attracts both classes: for each bonus B the threshold is
    pinned by the tighter owner-1 constraint and the revenue is maximized
    over B by golden-section search on [max(0, p_b - p_a), q_a - p_a].
    """
    if m.p_a > m.p_b:
        raise ValueError("loyalty-program analysis assumes platform a is the weaker side")
    m.require_viable()
    u1, u2 = m.owner1.utility, m.owner2.utility
    margin = m.q_a - m.p_a

    b_full = margin
    t_two = _llp_threshold_one_owner(u2, m.p_a, b_full, m.p_b)
    r_two = b_full * t_two

    lo = max(0.0, m.p_b - m.p_a)

    def r_both_at(bonus: float) -> float:
        if bonus <= 0.0:
            # Zero bonus degenerates to no program: both owners sit on b.
            return 0.0
        t = max(0.0, _llp_threshold_one_owner(u1, m.p_a, bonus, m.p_b))
        s_1a = u1.sharing_at_wage(m.p_a + bonus)
        s_2a = u2.sharing_at_wage(m.p_a + bonus)
        return (margin - bonus) * (s_1a + s_2a) + 2.0 * bonus * t

    b_both, r_both = _golden_section_max(r_both_at, lo, b_full)
    t_both = max(0.0, _llp_threshold_one_owner(u1, m.p_a, b_both, m.p_b)) if b_both > 0 else 0.0

    if r_both >= r_two:
        return LlpPlan(b_both, t_both, "both", r_both, r_two, r_both, b_both)
    return LlpPlan(b_full, t_two, "owner2", r_two, r_two, r_both, b_both)


# --------------------------------------------------------------------------
# Sign-up counterattack and the squeeze-out program
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CounterAttack:
    bonus: float
    target: str  # 'both', 'owner1', 'owner2' or 'none'
    revenue: float  # realized (0 when staying out)
    attack_revenue: float  # best achievable by entering, possibly negative


def signup_counter(m: DuopolyMarket, a_llp: Llp) -> CounterAttack:
    """Platform b's best sign-up response to a's loyalty program.

    For each owner the minimal winning lump sum is the utility gap between
    the owner's best response to a's program and exclusive sharing on b.
    Candidate bonuses are those two gaps; each attracts every owner whose
    gap it covers.  b stays out when no candidate nets positive revenue.
    """
    owners = (m.owner1, m.owner2)
    gaps: List[float] = []
    shares_b: List[float] = []
    for o in owners:
        _, u_a = _llp_response(o.utility, m.p_a, a_llp.bonus, a_llp.threshold)
        s_b = o.utility.sharing_at_wage(m.p_b)
        u_b0 = o.utility.value(1.0 - s_b) + m.p_b * s_b
        gaps.append(max(0.0, u_a - u_b0))
        shares_b.append(s_b)

    margin_b = m.q_b - m.p_b
    best = CounterAttack(0.0, "none", 0.0, -float("inf"))
    for bonus in sorted(set(gaps)):
        won = [i for i, g in enumerate(gaps) if g <= bonus]
        revenue = margin_b * sum(shares_b[i] for i in won) - bonus * len(won)
        if revenue > best.attack_revenue:
            target = {(0,): "owner1", (1,): "owner2", (0, 1): "both"}[tuple(won)]
            best = CounterAttack(bonus, target, revenue, revenue)
    if best.attack_revenue <= 0.0:
        return CounterAttack(0.0, "none", 0.0, best.attack_revenue)
    return best


@dataclass(frozen=True)
class SqueezeOut:
    strategy: Llp
    revenue_a: float
    psi: float
    branch: str  # 'both-attack' or 'one-attack' worst case
    counter: CounterAttack
    certified: bool
    degenerate: bool = False


def _squeeze_candidates(
    u1: SelfUseUtility, u2: SelfUseUtility, p: float, q: float
) -> Tuple[float, float]:
    """The two worst-case thresholds for the symmetric squeeze-out program.

    Both are derived from owner indifference against b's most aggressive
    profitable counterbonus: the first assumes b would target both owners
    (bonus (q - p)(s_1b + s_2b) / 2), the second that b would target only
    owner 1 (bonus (q - p) s_1b).
    """
    b_a = q - p
    s_1a, s_1b = u1.sharing_at_wage(q), u1.sharing_at_wage(p)
    s_2a, s_2b = u2.sharing_at_wage(q), u2.sharing_at_wage(p)
    cost1 = u1.marginal_integral(1.0 - s_1a, 1.0 - s_1b) - p * (s_1a - s_1b)
    cost2 = u2.marginal_integral(1.0 - s_2a, 1.0 - s_2b) - p * (s_2a - s_2b)
    t_both = s_2a - ((q - p) * (s_1b + s_2b) / 2.0 + cost2) / b_a
    t_one = s_1a - ((q - p) * s_1b + cost1) / b_a
    return t_both, t_one


def _psi(u1, u2, p: float, q: float, t_a: float) -> float:
    """b's revenue advantage of attacking both owners over only owner 2."""
    b_a = q - p
    s_1a, s_1b = u1.sharing_at_wage(q), u1.sharing_at_wage(p)
    s_2a, s_2b = u2.sharing_at_wage(q), u2.sharing_at_wage(p)
    cost1 = u1.marginal_integral(1.0 - s_1a, 1.0 - s_1b) - p * (s_1a - s_1b)
    cost2 = u2.marginal_integral(1.0 - s_2a, 1.0 - s_2b) - p * (s_2a - s_2b)
    win2 = b_a * (s_2a - t_a) - cost2
    win1 = max(0.0, b_a * (s_1a - t_a)) - cost1
    return (q - p) * s_2b - 2.0 * win2 + win1


def squeeze_out(m: DuopolyMarket) -> SqueezeOut:
    """Symmetric-price loyalty program leaving b no profitable sign-up.

    Rebates the full commission (B_a = q - p) and sets the threshold low
    enough that even b's best counterbonus nets non-positive revenue.  Two
    candidate thresholds cover the two worst cases for b's attack; the
    candidate consistent with the sign of the attack-comparison function psi
    is selected (falling back to whichever certifies with higher revenue).
    """
    if m.p_a != m.p_b:
        raise ValueError("squeeze-out analysis assumes symmetric base pay")
    p, q = m.p_a, m.q_a
    if q == p:
        strat = Llp(0.0, 0.0)
        counter = CounterAttack(0.0, "none", 0.0, 0.0)
        return SqueezeOut(strat, 0.0, 0.0, "degenerate", counter, True, degenerate=True)
    u1, u2 = m.owner1.utility, m.owner2.utility
    t_both, t_one = _squeeze_candidates(u1, u2, p, q)

    options = []
    if _psi(u1, u2, p, q, t_both) >= 0.0:
        options.append(("both-attack", t_both))
    if _psi(u1, u2, p, q, t_one) < 0.0:
        options.append(("one-attack", t_one))
    if not options:
        options = [("both-attack", t_both), ("one-attack", t_one)]

    certified: List[SqueezeOut] = []
    for branch, t_a in options:
        t_a = max(0.0, t_a)
        strat = Llp(q - p, t_a)
        counter = signup_counter(m, strat)
        r_a = _realized_llp_revenue(m, strat)
        ok = counter.attack_revenue <= 1e-9 and r_a > 0.0
        certified.append(
            SqueezeOut(strat, r_a, _psi(u1, u2, p, q, t_a), branch, counter, ok)
        )
    winners = [c for c in certified if c.certified]
    if not winners:
        raise CertificationError(
            "no squeeze-out candidate leaves b with non-positive revenue"
        )
    return max(winners, key=lambda c: c.revenue_a)


def _realized_llp_revenue(m: DuopolyMarket, strat: Llp) -> float:
    """a's revenue from owner best responses when b stays out."""
    total = 0.0
    for o in (m.owner1, m.owner2):
        plan = owner_choice(o.utility, (m.p_a, strat), (m.p_b, NoProgram()))
        total += (m.q_a - m.p_a) * plan.s_a
        total -= strat.bonus * max(0.0, plan.s_a - strat.threshold)
    return total


# --------------------------------------------------------------------------
# Critical heterogeneity
# --------------------------------------------------------------------------

def critical_k(
    p_a: float,
    p_b: float,
    beta: float,
    program: str,
    k_range: Tuple[float, float] = (1.05, 1000.0),
    gamma: float = markets.GAMMA,
    base_scale: float = markets.BASE_SCALE,
    tol: float = 1e-3,
) -> float:
    """Heterogeneity level at which a's optimal target stops being 'both'.

    Sweeps the two-class market f_1 = k f, f_2 = f.  The indicator
    "optimal program targets both classes" must be monotone (non-increasing)
    in k over the range; it is checked on a coarse grid before bisecting.
    Returns +inf when the target is 'both' across the whole range.
    """
    if program not in ("signup", "llp"):
        raise ValueError("program must be 'signup' or 'llp'")

    def targets_both(k: float) -> bool:
        o1, o2 = markets.two_class_market(k, gamma=gamma, base_scale=base_scale)
        m = DuopolyMarket(o1, o2, p_a, p_b, beta)
        if program == "signup":
            return optimal_signup(m).target == "both"
        return optimal_llp_duopoly(m).target == "both"

    lo, hi = k_range
    if not 1.0 < lo < hi:
        raise ValueError("k range must satisfy 1 < lo < hi")
    grid = [lo * (hi / lo) ** (i / 16.0) for i in range(17)]
    flags = [targets_both(k) for k in grid]
    if any(late and not early for early, late in zip(flags, flags[1:])):
        raise RuntimeError(
            "target indicator is not monotone in k; refusing to bisect"
        )
    if all(flags):
        return float("inf")
    if not flags[0]:
        return lo  # already switched at (or below) the range floor
    k_lo = max(k for k, f in zip(grid, flags) if f)
    k_hi = min(k for k, f in zip(grid, flags) if not f)
    while k_hi - k_lo > tol:
        mid = 0.5 * (k_lo + k_hi)
        if targets_both(mid):
            k_lo = mid
        else:
            k_hi = mid
    return 0.5 * (k_lo + k_hi)
