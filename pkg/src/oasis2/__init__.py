"""Toolkit for OASIS 2 agent ontologies: typed graphs for templates,
behaviours, plans, executions and entrustments, with Turtle I/O, a
conformance validator, capability matching and a protocol simulator."""

from __future__ import annotations

from oasis2.builder import (
    build_behaviour,
    build_entrustment,
    build_plan,
    build_template,
    link_entrustment_execution,
    record_execution,
)
from oasis2.graph import Triple, TypedGraph
from oasis2.harness import PlanRequest, World, run_scenario, trace
from oasis2.matcher import compatible, discover
from oasis2.spec import BehaviourSpec, GoalSpec, TaskSpec, load_spec
from oasis2.structure import AsNew, Exactly
from oasis2.turtle import parse, serialize
from oasis2.validator import Violation, validate
from oasis2.vocab import Element, Layer, Prop

__all__ = [
    "AsNew", "BehaviourSpec", "Element", "Exactly", "GoalSpec", "Layer", "PlanRequest",
    "Prop", "TaskSpec", "Triple", "TypedGraph", "Violation", "World",
    "build_behaviour", "build_entrustment", "build_plan", "build_template",
    "compatible", "discover", "link_entrustment_execution", "load_spec", "parse",
    "record_execution", "run_scenario", "serialize", "trace", "validate",
]
