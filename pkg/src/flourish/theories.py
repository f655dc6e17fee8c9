"""Theories of individual well-being at a time.

Every theory maps ``(agent, tick, world)`` to an exact rational number:

* hedonic: asserted ``pleasure`` minus asserted ``pain``;
* desire: summed weight of the agent's satisfied desires, zeroed after
  death unless posthumous satisfaction is allowed;
* objective: summed weight of list items whose numeric value meets its
  threshold.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .scenario import THEORY_KINDS, Desire, ObjectiveItem, Scenario
from .world import World, as_fraction, assertion_lookup, is_number, same_value

ZERO = Fraction(0)


def wellbeing_hedonic(agent: str, t: int, world: World) -> Fraction:
    total = ZERO
    pleasure = assertion_lookup(world, agent, "pleasure", t)
    if is_number(pleasure):
        total += as_fraction(pleasure)
    pain = assertion_lookup(world, agent, "pain", t)
    if is_number(pain):
        total -= as_fraction(pain)
    return total


def is_dead(agent: str, t: int, world: World) -> bool:
    """Death reading of the reserved ``alive`` key.

    The most recent ``alive`` assertion at or before ``t`` decides. If it sits
    at ``t`` its value is used; if it is older the agent is dead, since
    either it recorded a death or life was not asserted again. Agents with
    no ``alive`` assertions at all are treated as living.
    """
    latest = None
    for a in world.assertions:
        if a.subject == agent and a.key == "alive" and a.time <= t:
            if latest is None or a.time > latest.time:
                latest = a
    if latest is None:
        return False
    if latest.time == t:
        return latest.value is False
    return True


def desire_satisfied(desire: Desire, t: int, world: World) -> bool:
    if desire.mode == "concurrent":
        if desire.time is not None and desire.time != t:
            return False
        return same_value(assertion_lookup(world, desire.subject, desire.key, t), desire.value)
    # achievement: the target held at some tick no later than t
    if desire.time is not None:
        return desire.time <= t and same_value(
            assertion_lookup(world, desire.subject, desire.key, desire.time), desire.value)
    return any(a.subject == desire.subject and a.key == desire.key and a.time <= t
               and same_value(a.value, desire.value) for a in world.assertions)


def wellbeing_desire(agent: str, t: int, world: World, desires: Iterable[Desire],
                     allow_posthumous: bool = False) -> Fraction:
    mine = [d for d in desires if d.agent == agent]
    if not mine:
        return ZERO
    if not allow_posthumous and is_dead(agent, t, world):
        return ZERO
    return sum((as_fraction(d.weight) for d in mine if desire_satisfied(d, t, world)), ZERO)


def wellbeing_objective(agent: str, t: int, world: World,
                        items: Sequence[ObjectiveItem]) -> Fraction:
    total = ZERO
    for item in items:
        value = assertion_lookup(world, agent, item.key, t)
        if is_number(value) and value >= item.threshold:
            total += as_fraction(item.weight)
    return total


@dataclass(frozen=True)
class TheoryConfig:
    kind: str = "hedonic"
    allow_posthumous: bool = False

    def __post_init__(self):
        if self.kind not in THEORY_KINDS:
            raise ValueError(f"unknown theory {self.kind!r}; expected one of {', '.join(THEORY_KINDS)}")


class Theory:
    """A configured evaluator bound to a scenario's desires and list items."""

    def __init__(self, config: TheoryConfig, desires: Sequence[Desire] = (),
                 items: Sequence[ObjectiveItem] = ()):
        self.config = config
        self.desires = tuple(desires)
        self.items = tuple(items)

    @property
    def name(self) -> str:
        return self.config.kind

    def wellbeing(self, agent: str, t: int, world: World) -> Fraction:
        kind = self.config.kind
        if kind == "hedonic":
            return wellbeing_hedonic(agent, t, world)
        if kind == "desire":
            return wellbeing_desire(agent, t, world, self.desires, self.config.allow_posthumous)
        return wellbeing_objective(agent, t, world, self.items)

    def __repr__(self) -> str:
        return f"Theory({self.config.kind!r}, allow_posthumous={self.config.allow_posthumous})"


def make_theory(kind: str, scenario: Scenario | None = None,
                allow_posthumous: bool = False) -> Theory:
    config = TheoryConfig(kind, allow_posthumous)
    if scenario is None:
        return Theory(config)
    return Theory(config, scenario.desires, scenario.objective_items)
