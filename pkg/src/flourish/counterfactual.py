"""Similarity between worlds, nearest-world selection, and event values."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .errors import EventNotOccurring, NoCounterfactualWorld
from .world import Event, World, assertion_lookup, occurs, same_value


class NearestPolicy(str, enum.Enum):
    # single most similar world, ties broken by lexicographic id
    UNIQUE_MIN = "unique_min"
    # every maximally similar world; values are averaged over them
    AVERAGE_OVER_TIES = "average_over_ties"

    @classmethod
    def parse(cls, text: "str | NearestPolicy") -> "NearestPolicy":
        if isinstance(text, cls):
            return text
        aliases = {"unique": cls.UNIQUE_MIN, "ties": cls.AVERAGE_OVER_TIES}
        if text in aliases:
            return aliases[text]
        return cls(text)


def worlds_of(multiverse) -> tuple[World, ...]:
    return tuple(getattr(multiverse, "worlds", multiverse))


def similarity(w: World, w2: World) -> int:
    """Number of assertions (subject, key, tick, value) the two worlds share."""
    small, large = (w, w2) if len(w) <= len(w2) else (w2, w)
    return sum(1 for a in small.assertions
               if same_value(assertion_lookup(large, a.subject, a.key, a.time), a.value))


def most_similar(candidates: Iterable[World], reference: World,
                 policy: NearestPolicy = NearestPolicy.UNIQUE_MIN) -> list[World]:
    """Maximally similar candidates, sorted by id; a single one under ``UNIQUE_MIN``."""
    scored = [(similarity(reference, c), c) for c in candidates]
    if not scored:
        return []
    best = max(score for score, _ in scored)
    winners = sorted((c for score, c in scored if score == best), key=lambda c: c.id)
    if NearestPolicy.parse(policy) is NearestPolicy.UNIQUE_MIN:
        return winners[:1]
    return winners


def nearest_worlds(multiverse, reference: World, absent_event: Event,
                   policy: NearestPolicy = NearestPolicy.UNIQUE_MIN) -> list[World]:
    candidates = [w for w in worlds_of(multiverse)
                  if w.id != reference.id and not occurs(w, absent_event)]
    if not candidates:
        raise NoCounterfactualWorld(
            f"no world other than {reference.id} lacks the event {absent_event}")
    return most_similar(candidates, reference, policy)


@dataclass(frozen=True)
class EventValue:
    value: Fraction
    actual_world: str
    comparison_worlds: tuple[str, ...]
    theory: str
    notes: tuple[str, ...] = field(default=())


def has_counterpart_data(agent: str, t: int, world: World) -> bool:
    return any(a.subject == agent and a.time == t for a in world.assertions)


def mean_over(worlds: list[World], fn: Callable[[World], Fraction]) -> Fraction:
    return sum((fn(w) for w in worlds), Fraction(0)) / len(worlds)


def event_value(multiverse, world: World, event: Event, agent: str, t: int, theory,
                policy: NearestPolicy = NearestPolicy.UNIQUE_MIN) -> EventValue:
    """Well-being of ``agent`` at ``t`` in ``world`` minus that of its counterpart
    in the nearest world(s) where ``event`` does not occur."""
    if not occurs(world, event):
        raise EventNotOccurring(f"event {event} does not occur in world {world.id}")
    nearest = nearest_worlds(multiverse, world, event, policy)
    actual = theory.wellbeing(agent, t, world)
    counterpart = mean_over(nearest, lambda w: theory.wellbeing(agent, t, w))
    notes = ()
    if not all(has_counterpart_data(agent, t, w) for w in nearest):
        notes = ("no-counterpart-data",)
    return EventValue(actual - counterpart, world.id, tuple(w.id for w in nearest),
                      theory.name, notes)
