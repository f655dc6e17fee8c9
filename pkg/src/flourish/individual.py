"""Aggregate well-being, welfare, and the comparative value of a life."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .counterfactual import NearestPolicy, mean_over, most_similar, worlds_of
from .errors import IntervalOutOfRange, NoComparisonWorld
from .stats import CorrelationReport, correlation_report, ols_slope, shaped
from .world import Interval, World, as_fraction

AGGREGATORS = ("sum", "mean")


@dataclass(frozen=True)
class WelfareConfig:
    """``shape_weight`` scales the least-squares slope added to aggregate well-being."""

    shape_weight: Fraction = Fraction(1)
    aggregator: str = "sum"

    def __post_init__(self):
        object.__setattr__(self, "shape_weight", as_fraction(self.shape_weight))
        if self.shape_weight < 0:
            raise ValueError("shape_weight must be non-negative")
        if self.aggregator not in AGGREGATORS:
            raise ValueError(f"aggregator must be one of {AGGREGATORS}")


@dataclass(frozen=True)
class LifeValue:
    value: Fraction
    subject_welfare: Fraction
    comparison_welfare: Fraction
    comparison_worlds: tuple[str, ...]


def check_interval(world: World, interval: Interval) -> None:
    if interval.end > world.horizon:
        raise IntervalOutOfRange(
            f"interval {interval} exceeds the horizon {world.horizon} of world {world.id}")


def wellbeing_series(agent: str, world: World, interval: Interval, theory) -> list[Fraction]:
    check_interval(world, interval)
    return [theory.wellbeing(agent, t, world) for t in interval]


def aggregate(values: Sequence[Fraction], how: str = "sum") -> Fraction:
    total = sum(values, Fraction(0))
    if how == "mean":
        return total / len(values) if values else Fraction(0)
    return total


def aggregate_wellbeing(agent: str, world: World, interval: Interval, theory,
                        aggregator: str = "sum") -> Fraction:
    return aggregate(wellbeing_series(agent, world, interval, theory), aggregator)


def welfare(agent: str, world: World, interval: Interval, theory,
            config: WelfareConfig = WelfareConfig()) -> Fraction:
    series = wellbeing_series(agent, world, interval, theory)
    return shaped(series, interval.start, config.shape_weight, aggregate(series, config.aggregator))


def comparison_worlds(multiverse, world: World, policy, baseline: str | None) -> list[World]:
    worlds = worlds_of(multiverse)
    if baseline is not None:
        for w in worlds:
            if w.id == baseline:
                return [w]
        raise NoComparisonWorld(f"baseline world {baseline!r} is not in the scenario")
    chosen = most_similar([w for w in worlds if w.id != world.id], world, policy)
    if not chosen:
        raise NoComparisonWorld(f"no world other than {world.id} to compare against")
    return chosen


def life_value(multiverse, agent: str, world: World, interval: Interval, theory,
               config: WelfareConfig = WelfareConfig(),
               policy: NearestPolicy = NearestPolicy.UNIQUE_MIN,
               baseline: str | None = None) -> LifeValue:
    """Welfare of ``agent`` in ``world`` minus its mean over the comparison worlds.

    Without a ``baseline`` the comparison worlds are the most similar worlds
    distinct from ``world``.
    """
    others = comparison_worlds(multiverse, world, policy, baseline)
    own = welfare(agent, world, interval, theory, config)
    theirs = mean_over(others, lambda w: welfare(agent, w, interval, theory, config))
    return LifeValue(own - theirs, own, theirs, tuple(w.id for w in others))


class Life(NamedTuple):
    agent: str
    world: World
    interval: Interval


def bridge_check(family: Sequence[Life], theory,
                 config: WelfareConfig = WelfareConfig()) -> CorrelationReport:
    aggregates, slopes, welfares = [], [], []
    for life in family:
        series = wellbeing_series(life.agent, life.world, life.interval, theory)
        agg = aggregate(series, config.aggregator)
        aggregates.append(agg)
        slopes.append(ols_slope(series, life.interval.start))
        welfares.append(shaped(series, life.interval.start, config.shape_weight, agg))
    return correlation_report(aggregates, slopes, welfares)
