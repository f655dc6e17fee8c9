"""Counterfactual well-being, welfare and group flourishing over finite scenarios."""

from .counterfactual import NearestPolicy, event_value, nearest_worlds, similarity
from .dsl import parse, parse_file, serialize
from .group_calculus import GroupCalcConfig, group_life_value
from .individual import WelfareConfig, life_value, welfare
from .scenario import Scenario, validate_scenario
from .theories import make_theory
from .world import Event, Interval, World

__all__ = [
    "Event", "GroupCalcConfig", "Interval", "NearestPolicy", "Scenario", "WelfareConfig",
    "World", "event_value", "group_life_value", "life_value", "make_theory",
    "nearest_worlds", "parse", "parse_file", "serialize", "similarity",
    "validate_scenario", "welfare",
]
