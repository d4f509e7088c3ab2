"""Breadth-first exploration of reachable terms and graph export."""

from __future__ import annotations

import os
from collections import deque
from collections.abc import Callable, Hashable, Iterable, Sequence
from dataclasses import dataclass

from .domain import Distribution, DomainKind, UltrasGraph, format_value
from .semantics import Semantics
from .syntax import DefinitionEnv, Term, alphabet_of, pretty

DEFAULT_MAX_STATES = 10_000


class StateBudgetExceeded(RuntimeError):
    def __init__(self, max_states: int, frontier: int):
        self.max_states = max_states
        self.frontier = frontier
        super().__init__(
            f"state budget of {max_states} exceeded with {frontier} states still on the frontier"
        )


@dataclass(frozen=True)
class ExplorationConfig:
    max_states: int = DEFAULT_MAX_STATES
    alphabet: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.max_states < 1:
            raise ValueError("max_states must be at least 1")

    @classmethod
    def from_environ(cls, **kw) -> "ExplorationConfig":
        """Config whose default budget is overridden by ``ULTRAS_MAX_STATES``."""
        if "max_states" not in kw and os.environ.get("ULTRAS_MAX_STATES"):
            kw["max_states"] = int(os.environ["ULTRAS_MAX_STATES"])
        return cls(**kw)


def bfs(
    kind: DomainKind,
    roots: Sequence[Hashable],
    alphabet: Sequence[str],
    step: Callable[[Hashable, str], Distribution],
    max_states: int,
    order_key: Callable[[Hashable], object],
) -> UltrasGraph:
    """Generic breadth-first closure of ``roots`` under ``step``.

    States are numbered in discovery order; targets newly discovered by the
    same (state, action) pair are numbered by ``order_key``.
    """
    index: dict = {}
    states: list = []

    def add(label):
        if label not in index:
            if len(states) >= max_states:
                raise StateBudgetExceeded(max_states, len(states) - current)
            index[label] = len(states)
            states.append(label)

    current = 0
    for r in roots:
        add(r)
    root_ids = tuple(index[r] for r in roots)
    table: dict[tuple[int, str], Distribution] = {}
    queue = deque(range(len(states)))
    while queue:
        s = queue.popleft()
        current = s
        label = states[s]
        for a in alphabet:
            d = step(label, a)
            fresh = sorted((t for t in d if t not in index), key=order_key)
            for t in fresh:
                add(t)
                queue.append(index[t])
            table[(s, a)] = d.map_targets(index.__getitem__)
    return UltrasGraph(kind, tuple(states), tuple(alphabet), table, root_ids)


def explore(
    env: DefinitionEnv,
    cfg: ExplorationConfig | None = None,
    roots: Iterable[Term] | None = None,
) -> UltrasGraph:
    """Materialise the ULTraS reachable from ``roots`` (default: the initial term).

    The alphabet is ``cfg.alphabet`` when given, else every action occurring
    syntactically in ``env`` and ``roots``.
    """
    cfg = cfg or ExplorationConfig()
    roots = tuple(roots) if roots is not None else (env.init,)
    alphabet = cfg.alphabet if cfg.alphabet is not None else alphabet_of(env, *roots)
    sem = Semantics(env)
    # roots may repeat (e.g. comparing a term with itself)
    unique = tuple(dict.fromkeys(roots))
    g = bfs(env.calculus.kind, unique, alphabet, sem.next, cfg.max_states, pretty)
    if len(unique) != len(roots):
        g = UltrasGraph(g.kind, g.states, g.alphabet, g.transitions, tuple(g.index[r] for r in roots))
    return g


def state_name(g: UltrasGraph, s: int) -> str:
    label = g.states[s]
    return label if isinstance(label, str) else str(label)


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def to_dot(g: UltrasGraph, name: str = "ultras") -> str:
    lines = [f"digraph {name} {{", "  node [shape=ellipse];"]
    for r in g.roots:
        lines.append(f"  init{r} [shape=point];")
        lines.append(f"  init{r} -> {r};")
    for s in range(len(g)):
        lines.append(f'  {s} [label="{_dot_escape(state_name(g, s))}"];')
    for s, a, t, v in g.edges():
        label = a if g.kind is DomainKind.BOOLEAN else f"{a}/{format_value(v)}"
        lines.append(f'  {s} -> {t} [label="{_dot_escape(label)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_tra(g: UltrasGraph) -> str:
    """Explicit transition list; Boolean top is written as ``1``."""
    edges = sorted(g.edges(), key=lambda e: (e[0], e[1], e[2]))
    lines = [f"STATES {len(g)}", f"TRANSITIONS {len(edges)}"]
    for s, a, t, v in edges:
        value = "1" if v is True else format_value(v)
        lines.append(f"{s} {a} {t} {value}")
    return "\n".join(lines) + "\n"


def export_graph(g: UltrasGraph, format: str) -> str:
    if format == "dot":
        return to_dot(g)
    if format == "tra":
        return to_tra(g)
    raise ValueError(f"unknown export format {format!r} (dot or tra)")
