"""Tests for the subsidy-program data model."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from loyalsim.programs import (
    PlatformConfig,
    SignUpBonus,
    SubsidySchedule,
    llp,
    no_program,
    schedule_from_dict,
    schedule_to_dict,
    validate,
)


def test_no_program_pays_nothing():
    sch = no_program(2.0)
    assert sch.levels == 0
    assert sch.marginal_bonus(0.5) == 0.0
    assert sch.cumulative_bonus(1.0) == 0.0
    assert sch.wage_at(0.9) == 2.0


def test_llp_cumulative_is_hinge():
    sch = llp(1.0, 4.0, 0.6)
    assert sch.cumulative_bonus(0.5) == 0.0
    assert sch.cumulative_bonus(0.6) == 0.0
    assert sch.cumulative_bonus(0.85) == pytest.approx(4.0 * 0.25)
    assert sch.wage_at(0.59) == 1.0
    assert sch.wage_at(0.61) == 5.0


def test_multi_level_cumulative_bonus():
    sch = SubsidySchedule(0.5, (0.3, 0.7), (2.0, 5.0))
    # below first threshold: nothing
    assert sch.cumulative_bonus(0.2) == 0.0
    # inside first band
    assert sch.cumulative_bonus(0.5) == pytest.approx(2.0 * 0.2)
    # crossing into the second band
    assert sch.cumulative_bonus(0.9) == pytest.approx(2.0 * 0.4 + 5.0 * 0.2)
    assert sch.marginal_bonus(0.9) == 5.0


@pytest.mark.parametrize(
    "sch, fragment",
    [
        (SubsidySchedule(-1.0), "base pay"),
        (SubsidySchedule(0.0, (0.5,), ()), "equal length"),
        (SubsidySchedule(0.0, (0.0,), (1.0,)), "outside (0, 1)"),
        (SubsidySchedule(0.0, (0.7, 0.3), (1.0, 2.0)), "thresholds not increasing"),
        (SubsidySchedule(0.0, (0.3, 0.7), (2.0, 2.0)), "bonuses not strictly increasing"),
        (SubsidySchedule(0.0, (0.5,), (-1.0,)), "must be positive"),
    ],
)
def test_validate_flags_malformed_schedules(sch, fragment):
    problems = validate(sch)
    assert any(fragment in p for p in problems)


def test_llp_constructor_rejects_bad_input():
    with pytest.raises(ValueError):
        llp(0.0, -1.0, 0.5)
    with pytest.raises(ValueError):
        llp(0.0, 1.0, 1.5)


def test_cumulative_bonus_rejects_invalid_schedule_or_level():
    with pytest.raises(ValueError):
        SubsidySchedule(0.0, (0.7, 0.3), (1.0, 2.0)).cumulative_bonus(0.5)
    with pytest.raises(ValueError):
        no_program().cumulative_bonus(1.2)


def test_signup_bonus_non_negative():
    assert SignUpBonus(3.0).amount == 3.0
    with pytest.raises(ValueError):
        SignUpBonus(-0.1)


def test_platform_config_commission():
    cfg = PlatformConfig(10.0, 20.0)
    assert cfg.commission == pytest.approx(1.0)
    assert PlatformConfig(0.0, 12.0).commission is None
    with pytest.raises(ValueError):
        PlatformConfig(5.0, 4.0)
    with pytest.raises(ValueError):
        PlatformConfig(1.0, 0.0)


def test_serialization_keys_are_stable():
    sch = llp(3.0, 9.0, 0.9)
    d = schedule_to_dict(sch, signup=1.5)
    assert d == {"p": 3.0, "thresholds": [0.9], "bonuses": [9.0], "signup": 1.5}
    assert schedule_from_dict(d) == sch


def test_deserialization_validates():
    with pytest.raises(ValueError):
        schedule_from_dict({"p": 0.0, "thresholds": [0.7, 0.3], "bonuses": [1.0, 2.0]})


@st.composite
def schedules(draw):
    p = draw(st.floats(min_value=0.0, max_value=10.0))
    n = draw(st.integers(min_value=0, max_value=4))
    ts = sorted(
        draw(
            st.lists(
                st.floats(min_value=0.01, max_value=0.99),
                min_size=n, max_size=n, unique=True,
            )
        )
    )
    bs = sorted(
        draw(
            st.lists(
                st.floats(min_value=0.1, max_value=20.0),
                min_size=n, max_size=n, unique=True,
            )
        )
    )
    return SubsidySchedule(p, tuple(ts), tuple(bs))


@given(schedules())
def test_dict_roundtrip(sch):
    assert schedule_from_dict(schedule_to_dict(sch)) == sch


@given(schedules(), st.floats(min_value=0.0, max_value=1.0))
def test_cumulative_bonus_is_monotone_and_convex_increments(sch, s):
    # W is non-decreasing; the marginal below s never exceeds the one at s
    w = sch.cumulative_bonus(s)
    assert w >= 0.0
    if s >= 0.01:
        assert sch.cumulative_bonus(s - 0.01) <= w + 1e-12
