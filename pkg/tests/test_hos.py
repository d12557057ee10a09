import pytest
from hypothesis import given, strategies as st

from longhaul.hos import (
    DriverState, EU_RULES, HosViolation, StopType, apply_rest, binding_rule, drive, remaining_drive, required_tier,
)


@pytest.mark.parametrize("s,want", [((4.5, 4.5, 28), 4.5), ((4.5, 9, 9), 4.5), ((2, 9, 56), 2)])
def test_remaining_drive(s, want):
    assert remaining_drive(DriverState(*s)) == want


def test_drive_examples():
    assert drive(DriverState(4.5, 9, 56), 4.5).as_tuple() == (0, 4.5, 51.5)
    s = DriverState(3.2, 7.1, 40)
    assert drive(s, 0) == s


def test_drive_violation_names_rule():
    with pytest.raises(HosViolation) as exc:
        drive(DriverState(1, 9, 56), 2)
    assert exc.value.rule == "continuous"
    with pytest.raises(HosViolation) as exc:
        drive(DriverState(4.5, 2, 56), 3)
    assert exc.value.rule == "daily"


@pytest.mark.parametrize("s,t,want,dur", [
    ((0, 3, 40), StopType.B, (4.5, 3, 40), 0.75),
    ((0, 0, 40), StopType.D, (4.5, 9, 40), 11.0),
    ((0, 0, 0), StopType.W, (4.5, 9, 56), 45.0),
])
def test_apply_rest(s, t, want, dur):
    got, h = apply_rest(DriverState(*s), t)
    assert got.as_tuple() == want and h == dur


def test_apply_rest_rejects_fuel():
    with pytest.raises(ValueError):
        apply_rest(DriverState(1, 1, 1), StopType.F)


def test_state_validation():
    with pytest.raises(ValueError):
        DriverState(5, 9, 56)
    with pytest.raises(ValueError):
        DriverState(1, -0.5, 56)


def test_binding_rule_and_tier():
    assert required_tier(DriverState(1, 9, 56)) is StopType.B
    assert required_tier(DriverState(4.5, 2, 56)) is StopType.D
    assert required_tier(DriverState(4.5, 9, 3)) is StopType.W
    # a tie goes to the longer rest, which resets both budgets
    assert binding_rule(DriverState(4.5, 4.5, 28)) == "daily"


budget = st.tuples(st.floats(0, 4.5), st.floats(0, 9), st.floats(0, 56))


@given(budget, st.floats(0, 1))
def test_drive_never_negative_and_subtracts_evenly(b, frac):
    s = DriverState(*b)
    h = frac * remaining_drive(s)
    t = drive(s, h)
    for before, after in zip(s.as_tuple(), t.as_tuple()):
        assert after >= 0
        assert after == pytest.approx(before - h, abs=1e-9)


@given(budget, st.sampled_from([StopType.B, StopType.D, StopType.W]))
def test_rest_monotone(b, t):
    s = DriverState(*b)
    after, h = apply_rest(s, t)
    assert all(x >= y for x, y in zip(after.as_tuple(), s.as_tuple()))
    assert after.cont_h == EU_RULES.cont_max
    assert h == EU_RULES.rest_duration(t)
    assert remaining_drive(after) >= remaining_drive(s)


@given(budget, st.floats(0, 20))
def test_drive_within_remaining_or_raises(b, h):
    s = DriverState(*b)
    if h <= remaining_drive(s):
        drive(s, h)
    elif h > remaining_drive(s) + 1e-6:
        with pytest.raises(HosViolation):
            drive(s, h)


@given(budget, st.floats(0, 1), st.floats(0, 1))
def test_drive_composes(b, fa, fb):
    s = DriverState(*b)
    a = fa * remaining_drive(s)
    c = fb * (remaining_drive(s) - a)
    two = drive(drive(s, a), c).as_tuple()
    assert two == pytest.approx(drive(s, a + c).as_tuple(), abs=1e-9)


@given(budget)
def test_weekly_rest_is_full_reset(b):
    assert remaining_drive(apply_rest(DriverState(*b), StopType.W)[0]) == 4.5


@given(budget, st.lists(st.tuples(st.floats(0, 1), st.sampled_from([None, StopType.B, StopType.D, StopType.W])),
                        max_size=20))
def test_random_sequences_stay_valid(b, steps):
    s = DriverState(*b)
    for frac, rest in steps:
        s = drive(s, frac * remaining_drive(s))
        if rest is not None:
            s, _ = apply_rest(s, rest)
        s.validate(EU_RULES)
