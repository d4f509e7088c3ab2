"""Uniform labelled transition systems for CSP, PCSP and PEPA."""

from .domain import (
    Distribution,
    DomainKind,
    KindMismatchError,
    UltrasGraph,
    dist_join,
    dist_mass,
    dist_scale,
    empty,
    point,
)
from .equivalence import (
    MeasureSpec,
    Partition,
    Verdict,
    bisim_check_bounded,
    bisim_equiv,
    bisim_refine,
    measure,
    trace_equiv,
    validate_partition,
)
from .semantics import Semantics, next_csp, next_pcsp, next_pepa
from .statespace import ExplorationConfig, StateBudgetExceeded, explore, export_graph
from .syntax import Calculus, DefinitionEnv, ModelError, alphabet_of, parse_model, parse_term, pretty
from .testing import (
    DeltaFn,
    ObservationSystem,
    build_interaction,
    generate_battery,
    load_observer,
    observer_from_term,
    testing_equiv,
    testing_measure,
)

__all__ = [
    "Calculus",
    "DefinitionEnv",
    "DeltaFn",
    "Distribution",
    "DomainKind",
    "ExplorationConfig",
    "KindMismatchError",
    "MeasureSpec",
    "ModelError",
    "ObservationSystem",
    "Partition",
    "Semantics",
    "StateBudgetExceeded",
    "UltrasGraph",
    "Verdict",
    "alphabet_of",
    "bisim_check_bounded",
    "bisim_equiv",
    "bisim_refine",
    "build_interaction",
    "dist_join",
    "dist_mass",
    "dist_scale",
    "empty",
    "explore",
    "export_graph",
    "generate_battery",
    "load_observer",
    "measure",
    "next_csp",
    "next_pcsp",
    "next_pepa",
    "observer_from_term",
    "parse_model",
    "parse_term",
    "point",
    "pretty",
    "testing_equiv",
    "testing_measure",
    "trace_equiv",
    "validate_partition",
]
