from decimal import Decimal
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flourish.counterfactual import NearestPolicy, event_value, nearest_worlds, similarity
from flourish.errors import EventNotOccurring, NoCounterfactualWorld
from flourish.theories import make_theory
from flourish.world import Event, PropertyAssertion, World, derive_events

from conftest import FIXTURE_NAMES
from oracles import brute_event_value, shared_count

D = Decimal
E_HIT = Event("jack", "pain", D(5), 3)


def world(wid, *triples):
    return World(wid, tuple(PropertyAssertion(s, k, v, t) for s, k, t, v in triples))


def test_self_similarity(load):
    w = load("jack_hill").world("W_HIT")
    assert similarity(w, w) == len(w)


def test_jack_hill_worlds_share_all_but_the_fall(load):
    doc = load("jack_hill")
    hit, safe = doc.world("W_HIT"), doc.world("W_SAFE")
    # the fall changes jack's pain and health at tick 3 and nothing else
    assert similarity(hit, safe) == shared_count(hit, safe) == len(hit) - 2


def test_disjoint_subjects():
    assert similarity(world("a", ("x", "k", 0, D(1))), world("b", ("y", "k", 0, D(1)))) == 0


def tie_scenario():
    ref = world("W_R", ("a", "k", 0, D(0)), ("a", "k", 1, D(1)), ("b", "k", 0, D(2)), ("c", "k", 0, D(3)))
    wb = world("W_B", ("a", "k", 0, D(0)), ("a", "k", 1, D(0)), ("b", "k", 0, D(2)))
    wa = world("W_A", ("a", "k", 0, D(0)), ("a", "k", 1, D(0)), ("c", "k", 0, D(3)))
    wc = world("W_C", ("a", "k", 0, D(0)), ("a", "k", 1, D(0)))
    return [ref, wb, wa, wc], ref, Event("a", "k", D(1), 1)


def test_nearest_unique_breaks_ties_by_id():
    worlds, ref, e = tie_scenario()
    assert [w.id for w in nearest_worlds(worlds, ref, e, NearestPolicy.UNIQUE_MIN)] == ["W_A"]


def test_nearest_ties_returns_all_maximizers():
    worlds, ref, e = tie_scenario()
    assert [w.id for w in nearest_worlds(worlds, ref, e, NearestPolicy.AVERAGE_OVER_TIES)] == ["W_A", "W_B"]


def test_nearest_on_jack_hill(load):
    doc = load("jack_hill")
    assert [w.id for w in nearest_worlds(doc, doc.world("W_HIT"), E_HIT)] == ["W_SAFE"]


def test_no_counterfactual_world():
    a = world("W1", ("a", "k", 0, D(0)), ("a", "k", 1, D(1)))
    b = world("W2", ("a", "k", 0, D(2)), ("a", "k", 1, D(1)))
    with pytest.raises(NoCounterfactualWorld):
        nearest_worlds([a, b], a, Event("a", "k", D(1), 1))


def test_event_value_jack_hill(load):
    doc = load("jack_hill")
    hit = doc.world("W_HIT")
    result = event_value(doc, hit, E_HIT, "jack", 3, make_theory("hedonic", doc))
    expected, chosen = brute_event_value(doc.worlds, hit, "jack", "pain", D(5), 3, "jack", 3)
    assert expected == -5
    assert result.value == expected
    assert result.comparison_worlds == ("W_SAFE",) and chosen == ["W_SAFE"]
    assert result.theory == "hedonic" and result.actual_world == "W_HIT"
    assert result.notes == ()


def test_event_value_requires_occurrence(load):
    doc = load("jack_hill")
    with pytest.raises(EventNotOccurring):
        event_value(doc, doc.world("W_SAFE"), E_HIT, "jack", 3, make_theory("hedonic"))


def test_equal_wellbeing_gives_zero(load):
    doc = load("jack_hill")
    # before the fall both worlds agree on jack's state
    assert event_value(doc, doc.world("W_HIT"), E_HIT, "jack", 2, make_theory("hedonic")).value == 0


def test_gift_case_is_harm(load):
    doc = load("jill_gift")
    e = Event("jack", "intends_gift", False, 2)
    for kind in ("hedonic", "desire", "objective"):
        v = event_value(doc, doc.world("W_CHANGE"), e, "jill", 3, make_theory(kind, doc))
        assert v.value < 0


def test_no_counterpart_data_note():
    ref = world("W1", ("a", "k", 0, D(0)), ("a", "k", 1, D(1)), ("s", "pain", 1, D(2)))
    other = world("W2", ("a", "k", 0, D(0)), ("a", "k", 1, D(0)))
    v = event_value([ref, other], ref, Event("a", "k", D(1), 1), "s", 1, make_theory("hedonic"))
    assert v.value == -2 and v.notes == ("no-counterpart-data",)


def test_policy_parsing():
    assert NearestPolicy.parse("unique") is NearestPolicy.UNIQUE_MIN
    assert NearestPolicy.parse("ties") is NearestPolicy.AVERAGE_OVER_TIES
    assert NearestPolicy.parse("average_over_ties") is NearestPolicy.AVERAGE_OVER_TIES


@pytest.mark.parametrize("name", FIXTURE_NAMES)
@pytest.mark.parametrize("policy", list(NearestPolicy))
def test_event_values_match_brute_force(load, name, policy):
    doc = load(name)
    theory = make_theory("hedonic", doc)
    checked = 0
    for ref in doc.worlds:
        for e in derive_events(ref):
            for agent in sorted(doc.agent_ids):
                try:
                    got = event_value(doc, ref, e, agent, e.time, theory, policy)
                except NoCounterfactualWorld:
                    continue
                want, chosen = brute_event_value(doc.worlds, ref, e.subject, e.key, e.to_value,
                                                 e.time, agent, e.time,
                                                 ties=policy is NearestPolicy.AVERAGE_OVER_TIES)
                assert got.value == want
                assert list(got.comparison_worlds) == chosen
                checked += 1
    assert checked > 0 or name == "hiring"


# -- properties ---------------------------------------------------------------

small_values = st.one_of(st.booleans(), st.integers(0, 2).map(Decimal))


@st.composite
def multiverses(draw):
    n = draw(st.integers(2, 5))
    worlds = []
    for i in range(n):
        slots = draw(st.lists(st.tuples(st.sampled_from("ab"), st.sampled_from(["k", "pain"]),
                                        st.integers(0, 3)), unique=True, max_size=10))
        worlds.append(World(f"W{i}", tuple(
            PropertyAssertion(s, k, Decimal(draw(st.integers(0, 3))) if k == "pain" else draw(small_values), t)
            for s, k, t in slots)))
    return worlds


@given(multiverses())
def test_similarity_symmetric_and_bounded(worlds):
    a, b = worlds[0], worlds[1]
    assert similarity(a, b) == similarity(b, a) == shared_count(a, b)
    assert similarity(a, b) <= min(len(a), len(b))


@settings(max_examples=60)
@given(multiverses(), st.sampled_from(list(NearestPolicy)))
def test_nearest_excludes_reference_and_occurrences(worlds, policy):
    for ref in worlds:
        for e in derive_events(ref):
            try:
                chosen = nearest_worlds(worlds, ref, e, policy)
            except NoCounterfactualWorld:
                continue
            assert ref.id not in {w.id for w in chosen}
            assert all(w.id != ref.id for w in chosen)
            from flourish.world import occurs
            assert not any(occurs(w, e) for w in chosen)
            again = nearest_worlds(list(reversed(worlds)), ref, e, policy)
            assert [w.id for w in again] == [w.id for w in chosen]


@given(st.fractions(min_value=Fraction(1, 4), max_value=8))
def test_event_value_scales_with_magnitudes(load, k):
    doc = load("jack_hill")
    kd = Decimal(k.numerator) / Decimal(k.denominator)
    if Fraction(kd) != k:
        return

    def scale(w):
        return World(w.id, tuple(
            PropertyAssertion(a.subject, a.key, a.value * kd, a.time)
            if a.key in ("pleasure", "pain") else a for a in w.assertions))

    scaled = [scale(w) for w in doc.worlds]
    hit = next(w for w in scaled if w.id == "W_HIT")
    e = Event("jack", "pain", D(5) * kd, 3)
    theory = make_theory("hedonic")
    assert event_value(scaled, hit, e, "jack", 3, theory).value == k * -5
