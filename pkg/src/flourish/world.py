"""Worlds, timed property assertions, and events derived from them.

A world is a closed set of assertions ``subject.key@tick = value``. Nothing
is carried forward between ticks: an unasserted triple is simply absent.
An event is a witnessed change in an asserted value between two
consecutive ticks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Iterator, Union

from .errors import InvalidEvent

Value = Union[Decimal, bool, str]

RESERVED_NUMERIC = ("pleasure", "pain")
RESERVED_BOOLEAN = ("alive",)


def value_key(value: Value) -> tuple:
    """Type-tagged key so that ``True``, ``Decimal(1)`` and ``"1"`` never compare equal."""
    if isinstance(value, bool):
        return ("b", value)
    if isinstance(value, Decimal):
        return ("n", value)
    return ("s", value)


def same_value(a: Value | None, b: Value | None) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return value_key(a) == value_key(b)


def is_number(value) -> bool:
    return isinstance(value, Decimal)


def as_fraction(value) -> Fraction:
    """Exact rational for a numeric scenario value or user-supplied parameter."""
    if isinstance(value, bool):
        raise TypeError("booleans are not numeric values")
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


def format_value(value: Value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Decimal):
        text = format(value.normalize(), "f")
        return "0" if text in ("-0", "0") else text
    return value


@dataclass(frozen=True, order=True)
class Interval:
    start: int
    end: int

    def __post_init__(self):
        if self.start < 0 or self.end < 0:
            raise ValueError(f"interval ticks must be non-negative: {self}")
        if self.start > self.end:
            raise ValueError(f"interval start {self.start} exceeds end {self.end}")

    def __contains__(self, tick: int) -> bool:
        return self.start <= tick <= self.end

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.start, self.end + 1))

    def __len__(self) -> int:
        return self.end - self.start + 1

    def __str__(self) -> str:
        return f"{self.start}..{self.end}"


class _TypedEquality:
    # dataclass equality would let False == Decimal(0); compare type-tagged identities

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.identity() == other.identity()

    def __hash__(self):
        return hash(self.identity())


@dataclass(frozen=True, eq=False)
class PropertyAssertion(_TypedEquality):
    subject: str
    key: str
    value: Value
    time: int

    bfo_category = "quality"

    @property
    def slot(self) -> tuple[str, str, int]:
        return (self.subject, self.key, self.time)

    def identity(self) -> tuple:
        return (self.subject, self.key, self.time, value_key(self.value))

    def __str__(self) -> str:
        return f"{self.subject}.{self.key}@{self.time} = {format_value(self.value)}"


@dataclass(frozen=True, eq=False)
class Event(_TypedEquality):
    subject: str
    key: str
    to_value: Value
    time: int

    bfo_category = "process"

    def __str__(self) -> str:
        return f"{self.subject}.{self.key}@{self.time}={format_value(self.to_value)}"

    def identity(self) -> tuple:
        return (self.subject, self.key, self.time, value_key(self.to_value))


@dataclass(frozen=True)
class Agent:
    id: str

    bfo_category = "object"


@dataclass(frozen=True)
class World:
    id: str
    assertions: tuple[PropertyAssertion, ...] = ()
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        index = {}
        for a in self.assertions:
            if a.slot in index:
                raise ValueError(f"duplicate assertion for {a.subject}.{a.key}@{a.time} in world {self.id}")
            index[a.slot] = a.value
        object.__setattr__(self, "assertions", tuple(self.assertions))
        object.__setattr__(self, "_index", index)

    @property
    def horizon(self) -> int:
        return max((a.time for a in self.assertions), default=0)

    def __len__(self) -> int:
        return len(self.assertions)


def assertion_lookup(world: World, subject: str, key: str, time: int) -> Value | None:
    """Return the asserted value at ``(subject, key, time)``, or ``None`` when absent."""
    return world._index.get((subject, key, time))


def occurs(world: World, event: Event) -> bool:
    if event.time < 1:
        raise InvalidEvent(f"event {event} needs a predecessor tick (time >= 1)")
    now = assertion_lookup(world, event.subject, event.key, event.time)
    if now is None or not same_value(now, event.to_value):
        return False
    before = assertion_lookup(world, event.subject, event.key, event.time - 1)
    return before is not None and not same_value(before, event.to_value)


def derive_events(world: World) -> list[Event]:
    """All property changes witnessed in ``world``, sorted by (subject, key, time)."""
    events = []
    for a in world.assertions:
        if a.time < 1:
            continue
        before = assertion_lookup(world, a.subject, a.key, a.time - 1)
        if before is not None and not same_value(before, a.value):
            events.append(Event(a.subject, a.key, a.value, a.time))
    events.sort(key=Event.identity)
    return events
