import dataclasses
import random
from decimal import Decimal
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from flourish.errors import DegenerateFamily, IntervalOutOfRange, NoComparisonWorld, UnboundActivity
from flourish.group_calculus import (GroupCalcConfig, GroupLife, activity_value, diabridge_check,
                                     diachronic_aggregate, group_life_value, group_welfare,
                                     group_wellbeing_at, sync_aggregate, synchronic_series)
from flourish.groups import Activity, Group, GroupFunction, RoleBinding
from flourish.scenario import Scenario
from flourish.world import Agent, Interval, PropertyAssertion, World

from oracles import random_group_family, rank_correlation, regression_slope, shared_count

FULL = Interval(0, 40)
LEAGUE = "equality-league"


def jessica(load):
    doc = load("jessica")
    return doc, doc.group(LEAGUE), doc.world("W_ACTUAL")


def activity(degree, attempted=True, time=4, agent="jessica", role="activist", group=LEAGUE):
    return Activity("x", agent, role, group, time, attempted, Decimal(degree))


def test_activity_values(load):
    _, league, _ = jessica(load)
    assert activity_value(activity("0.1"), league) == Fraction(1, 10)
    assert activity_value(activity("0", attempted=False), league) == 0
    assert activity_value(activity("0"), league) == Fraction(1, 100)
    assert activity_value(activity("0"), league, GroupCalcConfig(epsilon=Fraction(1, 4))) == Fraction(1, 4)
    assert activity_value(activity("1"), league) == 1


@pytest.mark.parametrize("bad", [
    activity("0.5", time=15),
    activity("0.5", role="treasurer"),
    activity("0.5", agent="alice", time=4),
    activity("0.5", group="other"),
])
def test_unbound_activity(load, bad):
    _, league, _ = jessica(load)
    with pytest.raises(UnboundActivity):
        activity_value(bad, league)


def test_sync_values(load):
    doc, league, w = jessica(load)
    assert sync_aggregate(doc, league, 4, w) == Fraction(1, 10)
    assert sync_aggregate(doc, league, 25, w) == Fraction(12, 5)
    assert sync_aggregate(doc, league, 6, w) == Fraction(1, 100)
    assert sync_aggregate(doc, league, 15, w) == 0
    assert sync_aggregate(doc, league, 25, w, GroupCalcConfig(sync_aggregator="mean")) == Fraction(4, 5)
    assert group_wellbeing_at(doc, league, 4, w) == Fraction(1, 10)


def test_wellbeing_is_sync_aggregate(load):
    doc, league, _ = jessica(load)
    for w in doc.worlds:
        for t in range(41):
            for config in (GroupCalcConfig(), GroupCalcConfig(sync_aggregator="mean")):
                assert group_wellbeing_at(doc, league, t, w, config) == sync_aggregate(doc, league, t, w, config)


def test_later_era_beats_jessica_era(load):
    doc, league, w = jessica(load)
    early = [sync_aggregate(doc, league, t, w) for t in range(0, 11)]
    late = [sync_aggregate(doc, league, t, w) for t in (25, 30, 35)]
    assert min(late) > max(early)


def test_diachronic(load):
    doc, league, w = jessica(load)
    series = synchronic_series(doc, league, w, FULL)
    total = diachronic_aggregate(doc, league, w, FULL)
    assert total == sum(series) == Fraction(761, 100)
    assert sum(series[20:]) > sum(series[:20])
    assert diachronic_aggregate(doc, league, w, Interval(11, 19)) == 0
    assert diachronic_aggregate(doc, league, w, Interval(25, 25)) == sync_aggregate(doc, league, 25, w)
    with pytest.raises(IntervalOutOfRange):
        diachronic_aggregate(doc, league, w, Interval(0, 41))


def test_group_welfare(load):
    doc, league, w = jessica(load)
    series = synchronic_series(doc, league, w, FULL)
    total = sum(series)
    assert group_welfare(doc, league, w, FULL, GroupCalcConfig(shape_weight=0)) == total
    value = group_welfare(doc, league, w, FULL)
    assert value > total
    assert float(value - total) == pytest.approx(regression_slope(series), abs=1e-9)
    # the silent gap has a flat series, so shape adds nothing
    assert group_welfare(doc, league, w, Interval(11, 19), GroupCalcConfig(shape_weight=7)) == 0


def test_jessica_group_life_is_positive(load):
    doc, league, w = jessica(load)
    report = group_life_value(doc, league, w, FULL, baseline="W_NOLEAGUE")
    assert report.comparison_welfare == 0
    assert report.life_value == report.welfare > 0
    assert report.diachronic == sum(report.synchronic) == Fraction(761, 100)
    assert report.comparison_worlds == ("W_NOLEAGUE",)
    assert float(report.life_value) == pytest.approx(7.6215, abs=1e-4)


def test_hiring_group_life_is_negative(load):
    doc = load("hiring")
    committee = doc.group("hiring-committee")
    report = group_life_value(doc, committee, doc.world("W_STALLED"), Interval(0, 6), baseline="W_LIST")
    assert report.synchronic == (0, 0, Fraction(3, 10), 0, Fraction(11, 100), 0, 0)
    assert report.life_value < 0
    assert float(report.life_value) == pytest.approx(-6.4146, abs=1e-4)


def test_group_life_against_itself_is_zero(load):
    doc, league, w = jessica(load)
    assert group_life_value(doc, league, w, FULL, baseline=w.id).life_value == 0


def test_group_life_defaults_to_most_similar(load):
    doc, league, w = jessica(load)
    report = group_life_value(doc, league, w, FULL)
    nearest = max((x for x in doc.worlds if x.id != w.id), key=lambda x: shared_count(w, x))
    assert report.comparison_worlds == (nearest.id,) == ("W_NOLEAGUE",)
    with pytest.raises(NoComparisonWorld):
        group_life_value(doc, league, w, FULL, baseline="W_MISSING")


def test_outputs_ignore_member_wellbeing(load):
    # replace everything a well-being theory reads; the group report must not move
    doc, league, w = jessica(load)
    numb = [World(x.id, tuple(PropertyAssertion(a.subject, a.key, Decimal(0), a.time)
                              for a in x.assertions if a.key in ("pain", "pleasure")) +
                  tuple(a for a in x.assertions if a.key not in ("pain", "pleasure")))
            for x in doc.worlds]
    stripped = dataclasses.replace(doc, worlds=tuple(numb), desires=(), objective_items=())
    a = group_life_value(doc, league, w, FULL, baseline="W_NOLEAGUE")
    b = group_life_value(stripped, league, stripped.world("W_ACTUAL"), FULL, baseline="W_NOLEAGUE")
    assert a == b


def test_activity_value_range_law():
    rng = random.Random(7)
    span = Interval(0, 9)
    group = Group("g", GroupFunction("f", "designed"), (RoleBinding("m", "r", "g", span, True),))
    for _ in range(1000):
        attempted = rng.random() < 0.6
        degree = Decimal(rng.randint(0, 1000)) / 1000 if attempted else Decimal(0)
        eps = Fraction(rng.randint(1, 99), 100)
        config = GroupCalcConfig(epsilon=eps)
        v = activity_value(Activity("a", "m", "r", "g", rng.randint(0, 9), attempted, degree), group, config)
        if attempted:
            assert eps <= v <= 1
        else:
            assert v == 0


def small_group_scenario(extra=()):
    span = Interval(0, 5)
    group = Group("g", GroupFunction("f", "evolved"),
                  tuple(RoleBinding(m, "r", "g", span, True) for m in ("a", "b")))
    base = (Activity("a1", "a", "r", "g", 1, True, Decimal("0.5")),
            Activity("b3", "b", "r", "g", 3, False, Decimal(0)))
    world = World("W", (PropertyAssertion("g", "size", Decimal(2), 5),))
    doc = Scenario("small", (world,), (Agent("a"), Agent("b")), groups=(group,),
                   activities=base + tuple(extra))
    return doc, group, world, span


@given(st.lists(st.tuples(st.sampled_from("ab"), st.integers(0, 5), st.integers(0, 100)), max_size=6))
def test_adding_attempted_activity_never_lowers_totals(additions):
    extra = tuple(Activity(f"n{i}", m, "r", "g", t, True, Decimal(d) / 100)
                  for i, (m, t, d) in enumerate(additions))
    before, group, w, span = small_group_scenario()
    after, _, _, _ = small_group_scenario(extra)
    for t in span:
        assert sync_aggregate(after, group, t, w) >= sync_aggregate(before, group, t, w)
    grown = diachronic_aggregate(after, group, w, span)
    assert grown >= diachronic_aggregate(before, group, w, span)
    if extra:
        assert grown > diachronic_aggregate(before, group, w, span)


def test_diabridge_random_family():
    doc, group, span = random_group_family()
    family = [GroupLife(doc, group, w, span) for w in doc.worlds]
    report = diabridge_check(family, GroupCalcConfig(shape_weight=1))
    series = [synchronic_series(doc, group, w, span) for w in doc.worlds]
    aggregates = [sum(s) for s in series]
    welfares = [float(sum(s)) + regression_slope(s) for s in series]
    expected = rank_correlation(aggregates, welfares)
    assert expected == pytest.approx(0.9977736978695555, abs=1e-12)
    assert report.rho == pytest.approx(expected, abs=1e-12)
    assert report.rho > 0.9


def test_diabridge_equal_slopes():
    doc, group, w, span = small_group_scenario()
    family = []
    for k in range(3):
        acts = tuple(Activity(f"c{k}{t}", "a", "r", "g", t, True, Decimal(k + 1) / 4) for t in span)
        scen = dataclasses.replace(doc, activities=acts)
        family.append(GroupLife(scen, group, w, span))
    report = diabridge_check(family)
    assert report.equal_slope_pairs == 3 and report.ordering_preserved
    assert report.rho == pytest.approx(1.0)


def test_diabridge_degenerate():
    doc, group, w, span = small_group_scenario()
    with pytest.raises(DegenerateFamily):
        diabridge_check([GroupLife(doc, group, w, span)])


def test_config_validation():
    for bad in ({"epsilon": 0}, {"epsilon": 1}, {"shape_weight": -1}, {"sync_aggregator": "max"}):
        with pytest.raises(ValueError):
            GroupCalcConfig(**bad)
