"""Full-scan cross-check for nearest-world selection.

Shares no code with :mod:`flourish.counterfactual`: similarity is a set
intersection over assertion identities, and event occurrence is read off a
linear scan of the raw assertion list.
"""

from __future__ import annotations

from dataclasses import dataclass

from .world import Event, World, value_key


@dataclass(frozen=True)
class ScanRow:
    world: str
    is_reference: bool
    similarity: int
    event_occurs: bool

    @property
    def candidate(self) -> bool:
        return not self.is_reference and not self.event_occurs


@dataclass(frozen=True)
class ScanResult:
    reference: str
    event: Event
    rows: tuple[ScanRow, ...]
    maximizers: tuple[str, ...]

    @property
    def unique(self) -> tuple[str, ...]:
        return self.maximizers[:1]


def _facts(world: World) -> set[tuple]:
    return {(a.subject, a.key, a.time, value_key(a.value)) for a in world.assertions}


def _value_at(world: World, subject: str, key: str, time: int):
    found = [a.value for a in world.assertions
             if a.subject == subject and a.key == key and a.time == time]
    return value_key(found[0]) if found else None


def _event_occurs(world: World, event: Event) -> bool:
    target = value_key(event.to_value)
    now = _value_at(world, event.subject, event.key, event.time)
    before = _value_at(world, event.subject, event.key, event.time - 1)
    return now == target and before is not None and before != target


def full_scan(worlds, reference: World, event: Event) -> ScanResult:
    ref_facts = _facts(reference)
    rows = []
    for w in sorted(worlds, key=lambda w: w.id):
        rows.append(ScanRow(w.id, w.id == reference.id, len(ref_facts & _facts(w)),
                            _event_occurs(w, event)))
    candidates = [r for r in rows if r.candidate]
    best = max((r.similarity for r in candidates), default=None)
    maximizers = tuple(r.world for r in candidates if r.similarity == best)
    return ScanResult(reference.id, event, tuple(rows), maximizers)
