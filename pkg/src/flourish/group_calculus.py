"""Group flourishing computed from role-bound member activities.

Nothing here reads member well-being: a group's well-being at a tick is an
aggregate of the values of its members' activities, so every result is the
same whichever individual theory is in force.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .counterfactual import NearestPolicy, mean_over
from .errors import UnboundActivity
from .groups import Activity, Group, covering_binding
from .individual import aggregate, check_interval, comparison_worlds
from .scenario import Scenario
from .stats import CorrelationReport, correlation_report, ols_slope, shaped
from .world import Interval, World, as_fraction


@dataclass(frozen=True)
class GroupCalcConfig:
    epsilon: Fraction = Fraction(1, 100)
    sync_aggregator: str = "sum"
    shape_weight: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "epsilon", as_fraction(self.epsilon))
        object.__setattr__(self, "shape_weight", as_fraction(self.shape_weight))
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie strictly between 0 and 1")
        if self.shape_weight < 0:
            raise ValueError("shape_weight must be non-negative")
        if self.sync_aggregator not in ("sum", "mean"):
            raise ValueError("sync_aggregator must be 'sum' or 'mean'")


@dataclass(frozen=True)
class GroupFlourishingReport:
    group: str
    world: str
    interval: Interval
    synchronic: tuple[Fraction, ...]
    diachronic: Fraction
    welfare: Fraction
    comparison_welfare: Fraction
    life_value: Fraction
    comparison_worlds: tuple[str, ...]


def activity_value(activity: Activity, group: Group,
                   config: GroupCalcConfig = GroupCalcConfig()) -> Fraction:
    """Zero when not attempted; otherwise the realization degree, floored at epsilon."""
    if activity.group != group.id:
        raise UnboundActivity(f"activity {activity.id} belongs to {activity.group}, not {group.id}")
    if covering_binding(group, activity.agent, activity.role, activity.time) is None:
        raise UnboundActivity(
            f"activity {activity.id}: {activity.agent} holds no {activity.role} role "
            f"in {group.id} at tick {activity.time}")
    if not activity.attempted:
        return Fraction(0)
    return max(config.epsilon, min(Fraction(1), as_fraction(activity.realization_degree)))


def sync_aggregate(scenario: Scenario, group: Group, t: int, world: World,
                   config: GroupCalcConfig = GroupCalcConfig()) -> Fraction:
    values = [activity_value(a, group, config)
              for a in scenario.activities_of(group.id, t, world.id)]
    return aggregate(values, config.sync_aggregator)


def group_wellbeing_at(scenario: Scenario, group: Group, t: int, world: World,
                       config: GroupCalcConfig = GroupCalcConfig()) -> Fraction:
    return sync_aggregate(scenario, group, t, world, config)


def synchronic_series(scenario: Scenario, group: Group, world: World, interval: Interval,
                      config: GroupCalcConfig = GroupCalcConfig()) -> list[Fraction]:
    check_interval(world, interval)
    return [group_wellbeing_at(scenario, group, t, world, config) for t in interval]


def diachronic_aggregate(scenario: Scenario, group: Group, world: World, interval: Interval,
                         config: GroupCalcConfig = GroupCalcConfig()) -> Fraction:
    return sum(synchronic_series(scenario, group, world, interval, config), Fraction(0))


def group_welfare(scenario: Scenario, group: Group, world: World, interval: Interval,
                  config: GroupCalcConfig = GroupCalcConfig()) -> Fraction:
    series = synchronic_series(scenario, group, world, interval, config)
    return shaped(series, interval.start, config.shape_weight, sum(series, Fraction(0)))


def group_life_value(scenario: Scenario, group: Group, world: World, interval: Interval,
                     config: GroupCalcConfig = GroupCalcConfig(),
                     policy: NearestPolicy = NearestPolicy.UNIQUE_MIN,
                     baseline: str | None = None) -> GroupFlourishingReport:
    others = comparison_worlds(scenario, world, policy, baseline)
    series = synchronic_series(scenario, group, world, interval, config)
    diachronic = sum(series, Fraction(0))
    own = shaped(series, interval.start, config.shape_weight, diachronic)
    theirs = mean_over(others, lambda w: group_welfare(scenario, group, w, interval, config))
    return GroupFlourishingReport(group.id, world.id, interval, tuple(series), diachronic,
                                  own, theirs, own - theirs, tuple(w.id for w in others))


class GroupLife(NamedTuple):
    scenario: Scenario
    group: Group
    world: World
    interval: Interval


def diabridge_check(family: Sequence[GroupLife],
                    config: GroupCalcConfig = GroupCalcConfig()) -> CorrelationReport:
    aggregates, slopes, welfares = [], [], []
    for life in family:
        series = synchronic_series(life.scenario, life.group, life.world, life.interval, config)
        agg = sum(series, Fraction(0))
        aggregates.append(agg)
        slopes.append(ols_slope(series, life.interval.start))
        welfares.append(shaped(series, life.interval.start, config.shape_weight, agg))
    return correlation_report(aggregates, slopes, welfares)
