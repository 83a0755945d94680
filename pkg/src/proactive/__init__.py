"""Proactive agent engine: intention-based and prediction-based robot
initiative over symbolic world models."""

from .model import (
    Atom,
    DesirabilityMap,
    DynamicSystem,
    Goal,
    GroundAction,
    GroundActionScheme,
    WorldState,
)
from .scenario import Scenario, load_scenario

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "DesirabilityMap",
    "DynamicSystem",
    "Goal",
    "GroundAction",
    "GroundActionScheme",
    "Scenario",
    "WorldState",
    "load_scenario",
    "__version__",
]
