"""Exact colored Tverberg search and the lift/pull-back reduction for general colorings."""

from .kernel import LinearSystem, common_point, general_position_check, lp_feasible
from .model import (
    Classification,
    Coloring,
    ColoringKind,
    Instance,
    TverbergWitness,
    canonical_family,
    rainbow_check,
    validate_coloring,
)
from .reduction import (
    AssertionBreach,
    LiftPlan,
    Transform,
    lift_instance,
    named_transform,
    plan_lift,
    pullback,
    round_trip,
    verify_reduction,
)
from .solver import SearchConfig, enumerate_rainbow_families, solve, solve_all

__version__ = "0.1.0"

__all__ = [
    "LinearSystem",
    "common_point",
    "general_position_check",
    "lp_feasible",
    "Classification",
    "Coloring",
    "ColoringKind",
    "Instance",
    "TverbergWitness",
    "canonical_family",
    "rainbow_check",
    "validate_coloring",
    "AssertionBreach",
    "LiftPlan",
    "Transform",
    "lift_instance",
    "named_transform",
    "plan_lift",
    "pullback",
    "round_trip",
    "verify_reduction",
    "SearchConfig",
    "enumerate_rainbow_families",
    "solve",
    "solve_all",
]
