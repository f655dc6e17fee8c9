"""Groups, their functions, role bindings, and member activities.

Each type carries a ``bfo_category`` tag naming the Basic Formal Ontology
category it stands in for.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal

from .world import Interval

PROVENANCES = ("designed", "evolved")


@dataclass(frozen=True)
class GroupFunction:
    id: str
    provenance: str
    description: str = ""

    bfo_category = "function"


@dataclass(frozen=True)
class RoleBinding:
    agent: str
    role: str
    group: str
    span: Interval
    optional_context: bool = True

    bfo_category = "role"


@dataclass(frozen=True)
class Group:
    id: str
    function: GroupFunction
    bindings: tuple[RoleBinding, ...] = ()

    bfo_category = "object aggregate"


@dataclass(frozen=True)
class Activity:
    id: str
    agent: str
    role: str
    group: str
    time: int
    attempted: bool
    realization_degree: Decimal
    # None means the activity takes place in every world of the scenario
    world: str | None = None

    bfo_category = "process"

    def __post_init__(self):
        if not 0 <= self.realization_degree <= 1:
            raise ValueError(f"activity {self.id}: realization degree must lie in [0, 1]")
        if not self.attempted and self.realization_degree != 0:
            raise ValueError(f"activity {self.id}: unattempted activities have degree 0")

    def in_world(self, world_id: str) -> bool:
        return self.world is None or self.world == world_id


@dataclass
class ValidationReport:
    subject: str
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.ok


def validate_function(group: Group) -> ValidationReport:
    report = ValidationReport(group.id)
    fn = group.function
    if fn is None or not fn.id:
        report.failures.append("missing-function")
    elif fn.provenance not in PROVENANCES:
        report.failures.append("illegal-provenance")
    return report


def validate_role_binding(binding: RoleBinding, scenario) -> ValidationReport:
    """Check a binding against the ROLE conditions and the scenario it lives in.

    Failure reasons: ``unknown-agent``, ``unknown-group``,
    ``span-beyond-horizon`` and ``context-not-optional``.
    """
    report = ValidationReport(f"{binding.group}/{binding.agent}/{binding.role}")
    if binding.agent not in scenario.agent_ids:
        report.failures.append("unknown-agent")
    if binding.group not in scenario.group_ids:
        report.failures.append("unknown-group")
    if binding.span.end > scenario.horizon:
        report.failures.append("span-beyond-horizon")
    if not binding.optional_context:
        report.failures.append("context-not-optional")
    return report


def members_at(group: Group, time: int) -> set[tuple[str, str]]:
    return {(b.agent, b.role) for b in group.bindings if time in b.span}


def covering_binding(group: Group, agent: str, role: str, time: int) -> RoleBinding | None:
    for b in group.bindings:
        if b.agent == agent and b.role == role and time in b.span:
            return b
    return None
