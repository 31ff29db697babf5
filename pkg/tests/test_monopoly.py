"""Tests for single-platform best responses and optimal programs.

Expected numbers marked as frozen were generated by the brute-force grid
oracles in loyalsim.oracle and pinned here.
"""

import pytest

from loyalsim.monopoly import (
    best_response,
    market_revenue,
    optimal_llp,
    optimal_monopoly_program,
    participation_check,
)
from loyalsim.oracle import grid_best_response
from loyalsim.programs import SubsidySchedule, llp, no_program
from loyalsim.utilities import OwnerClass, ScaledLog

U = ScaledLog(1.0, 0.832)


def test_best_response_no_program_is_wage_sharing():
    for p in (0.0, 1.0, 4.0):
        s, _ = best_response(U, no_program(p))
        assert s == pytest.approx(U.sharing_at_wage(p), abs=1e-12)


def test_best_response_two_threshold_frozen():
    sch = SubsidySchedule(0.5, (0.3, 0.7), (2.0, 5.0))
    s, val = best_response(U, sch)
    assert s == pytest.approx(0.989704001969745, abs=1e-12)  # frozen
    assert val == pytest.approx(2.812374997632518, abs=1e-12)  # frozen


def test_best_response_matches_grid_oracle():
    cases = [
        no_program(0.8),
        llp(0.0, 3.0, 0.5),
        llp(1.0, 6.0, 0.95),
        SubsidySchedule(0.2, (0.4, 0.8), (1.0, 4.0)),
    ]
    for sch in cases:
        s_ref, _ = grid_best_response(U, lambda s: sch.base_pay * s + sch.cumulative_bonus(s))
        s, _ = best_response(U, sch)
        assert s == pytest.approx(s_ref, abs=2e-4)


def test_best_response_rejects_invalid_schedule():
    with pytest.raises(ValueError):
        best_response(U, SubsidySchedule(0.0, (0.7, 0.3), (1.0, 2.0)))


def test_unreachable_threshold_changes_nothing():
    # a threshold above the wage-q sharing level never pays out
    base_s, _ = best_response(U, no_program(1.0))
    s, _ = best_response(U, llp(1.0, 0.5, 0.9999))
    assert s == pytest.approx(base_s, abs=1e-12)


def test_optimal_llp_case_study():
    plan = optimal_llp(U, 0.0, 12.0)
    assert plan.bonus == 12.0  # exact: full renter charge rebated
    assert plan.threshold == pytest.approx(0.8998443641998144, abs=1e-12)  # frozen
    assert plan.revenue == pytest.approx(10.798132370397774, abs=1e-12)  # frozen
    assert not plan.degenerate


@pytest.mark.parametrize(
    "p, revenue",
    [
        (3.0, 8.901000163456867),  # frozen
        (6.0, 5.991891905535387),  # frozen
    ],
)
def test_optimal_llp_at_positive_base_pay(p, revenue):
    plan = optimal_llp(U, p, 12.0)
    assert plan.bonus == 12.0 - p  # exact
    assert plan.revenue == pytest.approx(revenue, abs=1e-12)


def test_optimal_llp_owner_is_indifferent():
    plan = optimal_llp(U, 2.0, 12.0)
    s, val = best_response(U, plan.schedule)
    assert s == pytest.approx(U.sharing_at_wage(12.0), abs=1e-9)
    s0 = U.sharing_at_wage(2.0)
    outside = U.value(1.0 - s0) + 2.0 * s0
    assert val == pytest.approx(outside, abs=1e-9)


def test_optimal_llp_degenerate_and_invalid():
    plan = optimal_llp(U, 5.0, 5.0)
    assert plan.degenerate and plan.revenue == 0.0
    with pytest.raises(ValueError):
        optimal_llp(U, 6.0, 5.0)
    with pytest.raises(ValueError):
        optimal_llp(U, -1.0, 5.0)


def test_optimal_monopoly_program_sets_base_pay_zero():
    p_star, plan = optimal_monopoly_program(U, 12.0)
    assert p_star == 0.0
    reference = optimal_llp(U, 0.0, 12.0)
    assert plan.revenue == reference.revenue
    # zero base pay strictly dominates any p > 0 at the same q
    for p in (1.0, 3.0, 6.0):
        assert plan.revenue > optimal_llp(U, p, 12.0).revenue
    with pytest.raises(ValueError):
        optimal_monopoly_program(U, 0.0)


def test_market_revenue_aggregates_owner_responses():
    owners = [OwnerClass(1, ScaledLog(2.0)), OwnerClass(2, U)]
    plan = optimal_llp(U, 0.0, 12.0)
    out = market_revenue(owners, plan.schedule, 12.0)
    assert len(out.sharing) == 2
    assert out.revenue == pytest.approx(out.income - out.total_subsidy)
    assert out.income == pytest.approx(12.0 * sum(out.sharing))


def test_participation_check():
    owners = [OwnerClass(1, ScaledLog(8.0)), OwnerClass(2, U)]
    plan = optimal_llp(U, 0.0, 12.0)
    flags = participation_check(owners, plan.schedule)
    # the low-marginal class joins the program built for it; the high-marginal
    # class finds the threshold too costly and stays at its no-program level
    assert flags == [False, True]
