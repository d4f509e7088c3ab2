"""Observation systems, interaction systems and testing equivalence.

A test is an ULTraS with an inert success state. It runs in lock-step with
the system under test, synchronising on every action; target values of the
two sides are combined by a bottom-preserving function ``delta``. Two states
are testing equivalent relative to a battery of observers when, for every
observer and every trace up to a depth, the measure into the successful
configurations agrees.
"""

from __future__ import annotations

import enum
import itertools
from fractions import Fraction
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

from .domain import (
    Distribution,
    DomainKind,
    DomainValue,
    KindMismatchError,
    UltrasGraph,
    dist_combine,
    empty,
)
from .equivalence import DEFAULT_DEPTH, Verdict, compare_traces, measure
from .statespace import ExplorationConfig, bfs, explore
from .syntax import (
    OMEGA,
    Calculus,
    Choice,
    Const,
    PChoice,
    Prefix,
    RatedPrefix,
    Term,
    make_env,
    parse_model,
    pretty,
)

OMEGA_TERM = Const(OMEGA)


class ObserverError(ValueError):
    pass


class DeltaFn(enum.Enum):
    CONJUNCTION = "conj"
    PRODUCT = "prod"
    MINIMUM = "min"

    def supports(self, kind: DomainKind) -> bool:
        if self is DeltaFn.CONJUNCTION:
            return kind is DomainKind.BOOLEAN
        return kind.numeric

    def __call__(self, x: DomainValue, y: DomainValue) -> DomainValue:
        if self is DeltaFn.CONJUNCTION:
            return x and y
        if self is DeltaFn.PRODUCT:
            return x * y
        return min(x, y)

    @classmethod
    def default_for(cls, kind: DomainKind) -> "DeltaFn":
        return cls.CONJUNCTION if kind is DomainKind.BOOLEAN else cls.PRODUCT


@dataclass(frozen=True)
class ObservationSystem:
    graph: UltrasGraph
    omega: int
    initial: int
    name: str = "observer"

    def __post_init__(self):
        for a in self.graph.alphabet:
            if self.graph.dist(self.omega, a):
                raise ObserverError(f"success state of {self.name} has an {a}-transition")

    @property
    def kind(self) -> DomainKind:
        return self.graph.kind


def observer_from_env(env, name: str = "observer", cfg: ExplorationConfig | None = None) -> ObservationSystem:
    """Explore an observer model; ``OMEGA`` is always a state, even if unreachable."""
    g = explore(env, cfg, roots=(env.init, OMEGA_TERM))
    return ObservationSystem(g, g.state_id(OMEGA_TERM), g.roots[0], name)


def observer_from_term(term: Term, calculus: Calculus, name: str | None = None) -> ObservationSystem:
    env = make_env(calculus, {}, term, observer=True)
    return observer_from_env(env, name or pretty(term))


def load_observer(path: str | Path) -> ObservationSystem:
    path = Path(path)
    env = parse_model(path.read_text(encoding="utf-8"), observer=True)
    return observer_from_env(env, path.stem)


class Configuration(NamedTuple):
    system: int
    observer: int

    def __str__(self):
        return f"({self.system},{self.observer})"


@dataclass(frozen=True)
class InteractionSystem:
    """Explored product graph; state labels are :class:`Configuration` pairs."""

    graph: UltrasGraph
    omega: int

    @property
    def successful(self) -> frozenset[int]:
        return frozenset(i for i, c in enumerate(self.graph.states) if c.observer == self.omega)

    def config_id(self, system: int, observer: int) -> int:
        return self.graph.state_id(Configuration(system, observer))


def build_interaction(
    g: UltrasGraph,
    obs: ObservationSystem,
    delta: DeltaFn | None = None,
    cfg: ExplorationConfig | None = None,
    systems: Sequence[int] | None = None,
) -> InteractionSystem:
    """Synchronised product of ``g`` and ``obs`` explored from ``(s, obs.initial)``.

    ``systems`` lists the system states to start from (default: ``g.roots``).
    A configuration moves on ``a`` only when both sides reach some state on
    ``a``; actions known to just one side leave the configuration stuck.
    """
    if obs.kind is not g.kind:
        raise KindMismatchError(f"{g.kind.value} system tested by a {obs.kind.value} observer")
    delta = delta or DeltaFn.default_for(g.kind)
    if not delta.supports(g.kind):
        raise KindMismatchError(f"delta {delta.value} is not defined on the {g.kind.value} domain")
    cfg = cfg or ExplorationConfig()
    og = obs.graph
    alphabet = tuple(dict.fromkeys((*g.alphabet, *og.alphabet)))
    none = empty(g.kind)
    sys_actions, obs_actions = set(g.alphabet), set(og.alphabet)

    def step(c: Configuration, a: str) -> Distribution:
        if a not in sys_actions or a not in obs_actions:
            return none
        d1, d2 = g.dist(c.system, a), og.dist(c.observer, a)
        if not d1 or not d2:
            return none
        return dist_combine(d1, d2, Configuration, delta, g.kind)

    starts = tuple(systems) if systems is not None else g.roots
    roots = tuple(dict.fromkeys(Configuration(s, obs.initial) for s in starts))
    ig = bfs(g.kind, roots, alphabet, step, cfg.max_states, lambda c: c)
    return InteractionSystem(ig, obs.omega)


def testing_measure(ig: InteractionSystem, c0: int, trace: Sequence[str]) -> DomainValue:
    return measure(ig.graph, c0, trace, ig.successful)


def testing_equiv(
    g: UltrasGraph,
    s1: int,
    s2: int,
    battery: Sequence[ObservationSystem],
    delta: DeltaFn | None = None,
    depth: int = DEFAULT_DEPTH,
    cfg: ExplorationConfig | None = None,
) -> Verdict:
    """Testing equivalence of ``s1`` and ``s2`` relative to ``battery``.

    The first observer (in battery order) that separates the states is
    reported together with the shortest, alphabet-least trace doing so.
    """
    if not battery:
        raise ValueError("the observer battery is empty")
    for obs in battery:
        ig = build_interaction(g, obs, delta, cfg, systems=(s1, s2))
        c1 = ig.config_id(s1, obs.initial)
        c2 = ig.config_id(s2, obs.initial)
        found = compare_traces(ig.graph, c1, c2, depth, [ig.successful])
        if found is not None:
            trace, _, m1, m2 = found
            return Verdict(False, depth, trace, m1, m2, observer=obs.name)
    return Verdict(True, depth)


# ----------------------------------------------------------- battery generation

MAX_GENERATED_DEPTH = 4
_HALF = Fraction(1, 2)


def _prefix(calculus: Calculus, a: str, body: Term) -> Term:
    if calculus is Calculus.PEPA:
        return RatedPrefix(a, Fraction(1), body)
    return Prefix(a, body)


def _choice(calculus: Calculus, left: Term, right: Term) -> Term:
    if calculus is Calculus.PCSP:
        return PChoice(_HALF, left, right)
    return Choice(left, right)


def battery_terms(alphabet: Sequence[str], max_depth: int, calculus: Calculus) -> list[Term]:
    """Observer terms: every linear ``a1...an.OMEGA`` with ``1 <= n <= max_depth``,
    then (for ``max_depth >= 2``) every ``a.(b.OMEGA + c.OMEGA)`` with ``b``
    before ``c`` in ``alphabet``.

    Numeric observers use rate 1 and branching probability 1/2.
    """
    if not 1 <= max_depth <= MAX_GENERATED_DEPTH:
        raise ValueError(f"battery depth must lie in 1..{MAX_GENERATED_DEPTH}, got {max_depth}")
    alphabet = tuple(dict.fromkeys(alphabet))
    terms: list[Term] = []
    for n in range(1, max_depth + 1):
        for seq in itertools.product(alphabet, repeat=n):
            t: Term = OMEGA_TERM
            for a in reversed(seq):
                t = _prefix(calculus, a, t)
            terms.append(t)
    if max_depth >= 2:
        for a in alphabet:
            for b, c in itertools.combinations(alphabet, 2):
                branch = _choice(
                    calculus, _prefix(calculus, b, OMEGA_TERM), _prefix(calculus, c, OMEGA_TERM)
                )
                terms.append(_prefix(calculus, a, branch))
    return terms


def generate_battery(alphabet: Sequence[str], max_depth: int, calculus: Calculus = Calculus.CSP) -> list[ObservationSystem]:
    return [observer_from_term(t, calculus) for t in battery_terms(alphabet, max_depth, calculus)]
