"""Acceptance suite: one test (and one printed verdict line) per criterion.

Run with ``pytest -s tests/test_acceptance.py`` to see the verdict lines.
Random instances use fixed seeds so every run exercises the same cases.
"""

import math
import time

import numpy as np

from loyalsim.duopoly import (
    DuopolyMarket,
    Llp,
    SignUp,
    NoProgram,
    critical_k,
    no_program_equilibrium,
    optimal_llp_duopoly,
    optimal_signup,
    owner_choice,
    squeeze_out,
)
from loyalsim.markets import ladder_market, two_class_market
from loyalsim.monopoly import optimal_llp, participation_check
from loyalsim.mtlp import build_hb, mtlp_revenue, oversubsidy_gap, revenue_upper_bound
from loyalsim.oracle import GridSpec, grid_optimal_llp, grid_split_search
from loyalsim.programs import SubsidySchedule, validate
from loyalsim.utilities import OwnerClass, ScaledLog

U = ScaledLog(1.0, 0.832)
Q = 12.0


def verdict(name: str, ok: bool, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def test_criterion_01_llp_oracle_equivalence():
    t0 = time.monotonic()
    worst = 0.0
    for p in (0.0, 3.0, 6.0):
        plan = optimal_llp(U, p, Q)
        assert plan.bonus == Q - p  # closed form rebates the full commission
        _, _, r_oracle = grid_optimal_llp(U, p, Q, GridSpec(resolution=200))
        worst = max(worst, abs(r_oracle - plan.revenue))
    elapsed = time.monotonic() - t0
    verdict(
        "criterion-01 oracle equivalence",
        worst <= 1e-2 and elapsed < 10.0,
        f"max |dR|={worst:.2e} (<=1e-2), elapsed={elapsed:.1f}s (<10s)",
    )


def test_criterion_02_revenue_decreases_in_base_pay():
    ps = [0.25 * i for i in range(25)]
    revenues = [optimal_llp(U, p, Q).revenue for p in ps]
    ok = all(a > b for a, b in zip(revenues, revenues[1:]))
    verdict(
        "criterion-02 revenue monotone",
        ok,
        f"revenue strictly decreasing over p in [0, 6] ({revenues[0]:.4f} -> {revenues[-1]:.4f})",
    )


def test_criterion_03_hb_gap_bounded():
    worst_gap, worst_loss = -math.inf, -math.inf
    ok = True
    for n in range(1, 21):
        owners = ladder_market(n)
        hb = build_hb(owners, Q)
        out = mtlp_revenue(owners, hb.schedule, Q)
        gap = oversubsidy_gap(owners, hb.schedule, Q)
        loss = revenue_upper_bound(owners, Q, out.sharing) - out.revenue
        worst_gap, worst_loss = max(worst_gap, gap), max(worst_loss, loss)
        ok = ok and -1e-9 <= gap <= Q and loss < Q
    verdict(
        "criterion-03 bounded over-subsidy",
        ok,
        f"n=1..20: max gap={worst_gap:.4f} (in [0, 12]), max bound loss={worst_loss:.4f} (<12)",
    )


def test_criterion_04_single_class_collapse():
    owners = ladder_market(1)
    hb = build_hb(owners, Q)
    plan = optimal_llp(owners[0].utility, 0.0, Q)
    dt = abs(hb.schedule.thresholds[0] - plan.threshold)
    dr = abs(mtlp_revenue(owners, hb.schedule, Q).revenue - plan.revenue)
    ok = hb.schedule.bonuses == (Q,) and dt <= 1e-9 and dr <= 1e-9
    verdict(
        "criterion-04 n=1 collapse",
        ok,
        f"|dt|={dt:.1e}, |dR|={dr:.1e} (both <=1e-9)",
    )


def _signup_target(ratio: float, k: float = 6.0) -> str:
    o1, o2 = two_class_market(k)
    return optimal_signup(DuopolyMarket(o1, o2, 10.0, 10.0 * ratio, 1.0)).target


def _switch(lo: float, hi: float, low_regime: str) -> float:
    while hi - lo > 1e-6:
        mid = 0.5 * (lo + hi)
        if _signup_target(mid) == low_regime:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_criterion_05_signup_regime_switches():
    s1 = _switch(1.40, 1.60, "both")
    s2 = _switch(1.70, 1.90, "owner1")
    ok1 = abs(s1 - 1.5) <= 0.05
    ok2 = abs(s2 - 1.8) <= 0.05
    verdict(
        "criterion-05 sign-up switches",
        ok1 and ok2,
        f"both->owner1 at {s1:.4f} (1.5±0.05), owner1->none at {s2:.4f} (1.8±0.05)",
    )


def test_criterion_06_critical_k_llp():
    kc = critical_k(10.0, 11.0, 1.0, "llp")
    verdict(
        "criterion-06 critical k (loyalty)",
        abs(kc - 7.2) <= 0.2,
        f"k'={kc:.4f} (7.2±0.2)",
    )


def test_criterion_07_critical_k_signup_and_sentinel():
    kc = critical_k(10.0, 15.0, 1.0, "signup")
    sentinel = critical_k(10.0, 13.5, 1.0, "signup")
    ok = abs(kc - 6.1) <= 0.3 and math.isinf(sentinel)
    verdict(
        "criterion-07 critical k (sign-up)",
        ok,
        f"k'={kc:.4f} (6.1±0.3), ratio 1.35 -> {sentinel}",
    )


def test_criterion_08_llp_dominates_signup():
    margins = []
    for i in range(17):
        ratio = 1.0 + 0.05 * i
        o1, o2 = two_class_market(6.0)
        m = DuopolyMarket(o1, o2, 10.0, 10.0 * ratio, 1.0)
        margins.append(optimal_llp_duopoly(m).revenue - optimal_signup(m).revenue)
    worst = min(margins)
    verdict(
        "criterion-08 loyalty dominates sign-up",
        worst >= 0.0,
        f"min margin over ratio in [1.0, 1.8] = {worst:.4f} (>=0)",
    )


def test_criterion_09_squeeze_out_grid():
    ok = True
    worst_attack = -math.inf
    for p in (8.0, 10.0, 12.0):
        for k in (2.0, 6.0, 10.0):
            o1, o2 = two_class_market(k)
            sq = squeeze_out(DuopolyMarket(o1, o2, p, p, 1.0))
            worst_attack = max(worst_attack, sq.counter.attack_revenue)
            ok = ok and sq.certified and sq.counter.revenue <= 1e-9 and sq.revenue_a > 0
    verdict(
        "criterion-09 squeeze-out certification",
        ok,
        f"p in {{8,10,12}} x k in {{2,6,10}}: all certified, "
        f"max attack revenue={worst_attack:.1e} (<=1e-9)",
    )


def test_criterion_10_exclusivity_against_split_oracle():
    rng = np.random.default_rng(20260825)
    t0 = time.monotonic()
    worst = -math.inf
    for _ in range(50):
        scale = float(rng.uniform(1.0, 60.0))
        u = ScaledLog(scale, 0.832)
        p_a = float(rng.uniform(5.0, 15.0))
        p_b = float(rng.uniform(5.0, 15.0))
        if rng.random() < 0.5:
            strat = Llp(float(rng.uniform(1.0, 15.0)), float(rng.uniform(0.05, 0.95)))
        else:
            strat = SignUp(float(rng.uniform(0.5, 10.0)))
        plan = owner_choice(u, (p_a, strat), (p_b, NoProgram()))
        _, _, grid_val = grid_split_search(u, (p_a, strat), (p_b, NoProgram()),
                                           resolution=200)
        worst = max(worst, grid_val - plan.utility)
    elapsed = time.monotonic() - t0
    verdict(
        "criterion-10 exclusivity",
        worst <= 1e-6 and elapsed < 30.0,
        f"50 random instances: max split advantage={worst:.2e} (<=1e-6), "
        f"elapsed={elapsed:.1f}s (<30s)",
    )


def test_criterion_11_no_program_equilibrium():
    o1, o2 = two_class_market(6.0)
    sym = no_program_equilibrium(DuopolyMarket(o1, o2, 10.0, 10.0, 1.0))
    sym_ok = all(p.s_a == p.s_b for p in sym.plans)
    asym = no_program_equilibrium(DuopolyMarket(o1, o2, 10.0, 11.0, 1.0))
    asym_ok = asym.revenue_a == 0.0 and asym.revenue_b > 0.0
    verdict(
        "criterion-11 no-program equilibrium",
        sym_ok and asym_ok,
        f"symmetric split exact ({sym_ok}), asymmetric R_a=0 exact ({asym_ok})",
    )


def test_criterion_12_participation_monotone():
    rng = np.random.default_rng(42)
    checked = 0
    ok = True
    while checked < 50:
        scales = np.sort(rng.uniform(1.0, 10.0, size=5))[::-1]
        if np.min(-np.diff(scales)) < 1e-3:
            continue  # keep classes clearly separated
        owners = [OwnerClass(i + 1, ScaledLog(float(s), 0.832)) for i, s in enumerate(scales)]
        ts = np.sort(rng.uniform(0.05, 0.95, size=5))
        bs = np.sort(rng.uniform(0.5, 12.0, size=5))
        sch = SubsidySchedule(0.0, tuple(ts), tuple(bs))
        if validate(sch) or np.min(np.diff(ts)) < 1e-3 or np.min(np.diff(bs)) < 1e-3:
            continue
        flags = participation_check(owners, sch)
        # classes are ordered by decreasing marginal utility: once a class
        # joins, every cheaper-to-attract class after it joins too
        ok = ok and all(b or not a for a, b in zip(flags, flags[1:]))
        checked += 1
    verdict(
        "criterion-12 participation monotone",
        ok,
        "50 random 5-class markets x multi-threshold programs: joiners form a suffix",
    )
