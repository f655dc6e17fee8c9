"""The scenario document and whole-scenario validation."""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal

from .groups import (
    Activity,
    Group,
    covering_binding,
    members_at,
    validate_function,
    validate_role_binding,
)
from .world import Agent, Value, World, value_key

MODES = ("concurrent", "achievement")
SIGNS = ("positive", "negative", "zero")
THEORY_KINDS = ("hedonic", "desire", "objective")


@dataclass(frozen=True)
class Desire:
    """``agent`` wants ``subject.key`` to hold ``value`` at ``time`` (``None`` = any tick)."""

    agent: str
    subject: str
    key: str
    time: int | None
    value: Value
    weight: Decimal = Decimal(1)
    mode: str = "concurrent"

    def sort_key(self) -> tuple:
        return (self.agent, self.subject, self.key, self.time is not None, self.time or 0,
                value_key(self.value), self.weight, self.mode)


@dataclass(frozen=True)
class ObjectiveItem:
    key: str
    threshold: Decimal
    weight: Decimal = Decimal(1)

    def sort_key(self) -> tuple:
        return (self.key, self.threshold, self.weight)


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    line: int
    column: int
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.severity}: {self.code}: {self.message}"


@dataclass(eq=False)
class Scenario:
    name: str
    worlds: tuple[World, ...] = ()
    agents: tuple[Agent, ...] = ()
    desires: tuple[Desire, ...] = ()
    objective_items: tuple[ObjectiveItem, ...] = ()
    groups: tuple[Group, ...] = ()
    activities: tuple[Activity, ...] = ()
    config: dict[str, Value] = field(default_factory=dict)
    # source positions of declarations, keyed by e.g. ("group", id); not part of equality
    positions: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._worlds = {w.id: w for w in self.worlds}
        self._groups = {g.id: g for g in self.groups}

    @property
    def agent_ids(self) -> set[str]:
        return {a.id for a in self.agents}

    @property
    def group_ids(self) -> set[str]:
        return set(self._groups)

    @property
    def world_ids(self) -> list[str]:
        return [w.id for w in self.worlds]

    @property
    def horizon(self) -> int:
        return max((w.horizon for w in self.worlds), default=0)

    def world(self, world_id: str) -> World:
        try:
            return self._worlds[world_id]
        except KeyError:
            raise KeyError(f"unknown world {world_id!r}") from None

    def group(self, group_id: str) -> Group:
        try:
            return self._groups[group_id]
        except KeyError:
            raise KeyError(f"unknown group {group_id!r}") from None

    def desires_of(self, agent: str) -> list[Desire]:
        return [d for d in self.desires if d.agent == agent]

    def activities_of(self, group_id: str, time: int, world_id: str) -> list[Activity]:
        return [a for a in self.activities
                if a.group == group_id and a.time == time and a.in_world(world_id)]

    def position(self, *key) -> tuple[int, int]:
        return self.positions.get(key, (0, 0))

    def canonical(self) -> tuple:
        """Order-free value of the document; two scenarios are equal iff these match."""
        worlds = tuple(sorted((w.id, tuple(sorted(a.identity() for a in w.assertions)))
                              for w in self.worlds))
        groups = tuple(sorted(
            (g.id, g.function.id, g.function.provenance, g.function.description,
             tuple(sorted((b.agent, b.role, b.group, b.span.start, b.span.end, b.optional_context)
                          for b in g.bindings)))
            for g in self.groups))
        activities = tuple(sorted(
            (a.id, a.agent, a.role, a.group, a.world or "", a.time, a.attempted, a.realization_degree)
            for a in self.activities))
        return (
            self.name,
            worlds,
            tuple(sorted(a.id for a in self.agents)),
            tuple(sorted(d.sort_key() for d in self.desires)),
            tuple(sorted(o.sort_key() for o in self.objective_items)),
            groups,
            activities,
            tuple(sorted((k, value_key(v)) for k, v in self.config.items())),
        )

    def __eq__(self, other):
        if not isinstance(other, Scenario):
            return NotImplemented
        return self.canonical() == other.canonical()

    __hash__ = None


# config keys naming other declarations, checked by validate_scenario
WORLD_REF_KEYS = ("actual", "baseline", "group_baseline")
AGENT_REF_KEYS = ("event_agent", "life_agent")
GROUP_REF_KEYS = ("eval_group",)


def config_flag(scenario: Scenario, key: str, default: bool) -> bool:
    value = scenario.config.get(key, default)
    return value if isinstance(value, bool) else default


def validate_scenario(doc: Scenario) -> list[Diagnostic]:
    """Diagnostics that would stop some calculus from evaluating ``doc``.

    An empty list means every operation can run. ``span-beyond-horizon`` is
    reported as a warning; everything else is an error.
    """
    out: list[Diagnostic] = []

    def emit(severity, pos, code, message):
        out.append(Diagnostic(severity, pos[0], pos[1], code, message))

    for group in doc.groups:
        gpos = doc.position("group", group.id)
        for reason in validate_function(group).failures:
            emit("error", gpos, reason,
                 f"group {group.id}: function provenance {group.function.provenance!r} "
                 "is not 'designed' or 'evolved'" if reason == "illegal-provenance"
                 else f"group {group.id} declares no function")
        for i, binding in enumerate(group.bindings):
            bpos = doc.position("member", group.id, i)
            for reason in validate_role_binding(binding, doc).failures:
                severity = "warning" if reason == "span-beyond-horizon" else "error"
                emit(severity, bpos, reason,
                     f"member {binding.agent} as {binding.role} in {group.id} [{binding.span}]: {reason}")
        if not config_flag(doc, "allow_memberless_groups", True):
            empty = [t for t in range(doc.horizon + 1) if not members_at(group, t)]
            if empty:
                emit("error", gpos, "memberless-group",
                     f"group {group.id} has no members at tick(s) {_ticks(empty)}")

    for act in doc.activities:
        apos = doc.position("activity", act.id)
        if act.world is not None and act.world not in doc._worlds:
            emit("error", apos, "unresolved", f"activity {act.id}: unknown world {act.world}")
        if act.group not in doc._groups:
            continue
        if covering_binding(doc.group(act.group), act.agent, act.role, act.time) is None:
            emit("error", apos, "unbound-activity",
                 f"activity {act.id}: no binding of {act.agent} as {act.role} "
                 f"in {act.group} covers tick {act.time}")

    for key, value in doc.config.items():
        cpos = doc.position("config", key)
        if key.startswith("expect_sign_") and value not in SIGNS:
            emit("error", cpos, "bad-value", f"config {key}: expected one of {', '.join(SIGNS)}")
        elif key in WORLD_REF_KEYS and value not in doc._worlds:
            emit("error", cpos, "unresolved", f"config {key}: unknown world {value!r}")
        elif key in AGENT_REF_KEYS and value not in doc.agent_ids:
            emit("error", cpos, "unresolved", f"config {key}: unknown agent {value!r}")
        elif key in GROUP_REF_KEYS and value not in doc._groups:
            emit("error", cpos, "unresolved", f"config {key}: unknown group {value!r}")
        elif key in ("interval_from", "interval_to"):
            if not isinstance(value, Decimal) or value != int(value) or not 0 <= value <= doc.horizon:
                emit("error", cpos, "interval-out-of-range",
                     f"config {key}: must be an integer tick within 0..{doc.horizon}")
    return out


def _ticks(ticks: list[int]) -> str:
    if len(ticks) > 6:
        return ", ".join(map(str, ticks[:6])) + ", ..."
    return ", ".join(map(str, ticks))
