"""Measure functions and trace / bisimulation equivalence checking.

The measure of a trace is defined inductively over the graph's own domain::

    M(s, eps, T)  = unit if s in T else bottom
    M(s, a.w, T)  = JOIN_{s'} D_{s,a}(s') (x) M(s', w, T)

with (JOIN, (x)) = (or, and) for Boolean graphs and (+, *) otherwise, so a
probability graph yields the probability of the a.w-labelled computations
ending in T, and a rate graph the sum over such paths of the product of
their rates.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .domain import DomainKind, DomainValue, UltrasGraph, UnknownActionError, format_value

DEFAULT_DEPTH = 6


@dataclass(frozen=True)
class MeasureSpec:
    """The (join, product) pair a measure uses; fixed by the domain kind."""

    kind: DomainKind

    @property
    def bottom(self) -> DomainValue:
        return self.kind.bottom

    @property
    def unit(self) -> DomainValue:
        return self.kind.unit

    def join(self, x, y):
        return self.kind.join(x, y)

    def product(self, x, y):
        return self.kind.product(x, y)


# --------------------------------------------------------------------- measure


def _step(g: UltrasGraph, vec: dict[int, DomainValue], a: str) -> dict[int, DomainValue]:
    """Push a weight vector over states through one ``a``-step."""
    kind = g.kind
    out: dict[int, DomainValue] = {}
    for s, w in vec.items():
        for t, v in g.dist(s, a).items():
            x = kind.product(w, v)
            if kind.is_bottom(x):
                continue
            out[t] = kind.join(out[t], x) if t in out else x
    return out


def _total(g: UltrasGraph, vec: dict[int, DomainValue], targets: Iterable[int] | None) -> DomainValue:
    kind = g.kind
    acc = kind.bottom
    if targets is None:
        values = vec.values()
    else:
        values = (vec[t] for t in targets if t in vec)
    for v in values:
        acc = kind.join(acc, v)
    return acc


def _check_trace(g: UltrasGraph, trace: Sequence[str]) -> None:
    for a in trace:
        if a not in g.alphabet:
            raise UnknownActionError(a)


def measure(g: UltrasGraph, s: int, trace: Sequence[str], targets: Iterable[int]) -> DomainValue:
    """Degree to which ``targets`` are reached from ``s`` along ``trace``."""
    _check_trace(g, trace)
    vec = {s: g.kind.unit}
    for a in trace:
        vec = _step(g, vec, a)
        if not vec:
            return g.kind.bottom
    return _total(g, vec, frozenset(targets))


def measure_vector(g: UltrasGraph, trace: Sequence[str], targets: Iterable[int]) -> list[DomainValue]:
    """``measure(g, s, trace, targets)`` for every state ``s`` at once (backward pass)."""
    _check_trace(g, trace)
    kind = g.kind
    tset = frozenset(targets)
    vals = [kind.unit if s in tset else kind.bottom for s in range(len(g))]
    for a in reversed(trace):
        new = []
        for s in range(len(g)):
            acc = kind.bottom
            for t, v in g.dist(s, a).items():
                acc = kind.join(acc, kind.product(v, vals[t]))
            new.append(acc)
        vals = new
    return vals


# --------------------------------------------------------------------- verdicts


def format_trace(trace: Sequence[str]) -> str:
    """Actions concatenated when all are single letters, dot-separated otherwise."""
    if all(len(a) == 1 for a in trace):
        return "".join(trace)
    return ".".join(trace)


@dataclass(frozen=True)
class Verdict:
    equivalent: bool
    depth: int
    trace: tuple[str, ...] | None = None
    lhs: DomainValue | None = None
    rhs: DomainValue | None = None
    observer: str | None = None
    block: int | None = None

    def __bool__(self):
        return self.equivalent

    def __str__(self):
        if self.equivalent:
            out = f"EQUIVALENT depth={self.depth}"
        else:
            out = (
                f"DISTINGUISHED trace={format_trace(self.trace)} "
                f"lhs={format_value(self.lhs)} rhs={format_value(self.rhs)}"
            )
            if self.block is not None:
                out += f" class={self.block}"
        if self.observer is not None:
            out += f" observer={self.observer}"
        return out


def compare_traces(
    g: UltrasGraph,
    s1: int,
    s2: int,
    depth: int,
    target_sets: Sequence[frozenset[int] | None],
    min_length: int = 0,
) -> tuple[tuple[str, ...], int, DomainValue, DomainValue] | None:
    """Find the shortest, then alphabet-least, trace telling ``s1`` and ``s2`` apart.

    For every trace up to ``depth`` the measures from both states into each
    entry of ``target_sets`` (``None`` is the whole state set) are compared.
    Returns ``(trace, target_index, lhs, rhs)`` or ``None``. Traces whose
    weight vectors are empty on both sides are not extended: every extension
    has bottom measure on both sides.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    unit = g.kind.unit
    layer = [((), {s1: unit}, {s2: unit})]
    for length in range(depth + 1):
        if length >= min_length:
            for trace, v1, v2 in layer:
                for i, T in enumerate(target_sets):
                    m1, m2 = _total(g, v1, T), _total(g, v2, T)
                    if m1 != m2:
                        return trace, i, m1, m2
        if length == depth:
            break
        nxt = []
        # traces reaching identical vector pairs have identical futures; the
        # first one (alphabet order) is kept so witnesses stay least
        seen = set()
        for trace, v1, v2 in layer:
            for a in g.alphabet:
                w1, w2 = _step(g, v1, a), _step(g, v2, a)
                if not (w1 or w2):
                    continue
                key = (frozenset(w1.items()), frozenset(w2.items()))
                if key in seen:
                    continue
                seen.add(key)
                nxt.append((trace + (a,), w1, w2))
        if not nxt:
            break
        layer = nxt
    return None


def trace_equiv(g: UltrasGraph, s1: int, s2: int, depth: int = DEFAULT_DEPTH) -> Verdict:
    """Compare measures into the full state set for all traces of length <= ``depth``."""
    found = compare_traces(g, s1, s2, depth, [None])
    if found is None:
        return Verdict(True, depth)
    trace, _, m1, m2 = found
    return Verdict(False, depth, trace, m1, m2)


# ------------------------------------------------------------------ partitions


@dataclass(frozen=True)
class Partition:
    """Disjoint, exhaustive, non-empty blocks of state ids, ordered by least member."""

    blocks: tuple[frozenset[int], ...]

    def __post_init__(self):
        blocks = tuple(frozenset(b) for b in self.blocks)
        if not all(blocks):
            raise ValueError("partition blocks must be non-empty")
        blocks = tuple(sorted(blocks, key=min))
        object.__setattr__(self, "blocks", blocks)
        seen: set[int] = set()
        for b in blocks:
            if seen & b:
                raise ValueError("partition blocks must be disjoint")
            seen |= b
        if seen != set(range(len(seen))):
            raise ValueError("partition must cover states 0..n-1")
        object.__setattr__(self, "_where", {s: i for i, b in enumerate(blocks) for s in b})

    @classmethod
    def of(cls, *blocks: Iterable[int]) -> "Partition":
        return cls(tuple(frozenset(b) for b in blocks))

    def block_of(self, s: int) -> int:
        return self._where[s]

    def same_block(self, s1: int, s2: int) -> bool:
        return self._where[s1] == self._where[s2]

    def __len__(self):
        return len(self.blocks)


def _class_measure(g: UltrasGraph, s: int, a: str, block: frozenset[int]) -> DomainValue:
    kind = g.kind
    acc = kind.bottom
    for t, v in g.dist(s, a).items():
        if t in block:
            acc = kind.join(acc, v)
    return acc


def bisim_refine(g: UltrasGraph) -> Partition:
    """Coarsest partition stable under one-step class measures.

    Splitter-based refinement: every current block, for every action, is used
    as a splitter; each block is split by the value its states send into the
    splitter. Stops when a full pass causes no split.
    """
    blocks: list[frozenset[int]] = [frozenset(range(len(g)))] if len(g) else []
    changed = True
    while changed:
        changed = False
        for splitter in list(blocks):
            for a in g.alphabet:
                refined: list[frozenset[int]] = []
                for b in blocks:
                    if len(b) == 1:
                        refined.append(b)
                        continue
                    groups: dict = {}
                    for s in sorted(b):
                        groups.setdefault(_class_measure(g, s, a, splitter), []).append(s)
                    if len(groups) > 1:
                        changed = True
                    refined.extend(frozenset(grp) for grp in groups.values())
                blocks = refined
    return Partition(tuple(blocks))


def bisim_check_bounded(
    g: UltrasGraph,
    s1: int,
    s2: int,
    partition: Partition,
    depth: int = DEFAULT_DEPTH,
) -> Verdict:
    """Check ``M(s1, w, C) == M(s2, w, C)`` for every class ``C`` and ``1 <= |w| <= depth``.

    The empty trace is skipped: its measure only restates whether each state
    lies in ``C``.
    """
    found = compare_traces(g, s1, s2, depth, partition.blocks, min_length=1)
    if found is None:
        return Verdict(True, depth)
    trace, block, m1, m2 = found
    return Verdict(False, depth, trace, m1, m2, block=block)


def validate_partition(g: UltrasGraph, partition: Partition, depth: int = DEFAULT_DEPTH) -> Verdict:
    """Check every block member against its block's least member (bounded)."""
    for b in partition.blocks:
        rep = min(b)
        for s in sorted(b):
            if s != rep:
                v = bisim_check_bounded(g, rep, s, partition, depth)
                if not v:
                    return v
    return Verdict(True, depth)


class RefinementDisagreement(AssertionError):
    """The refined partition fails the trace-indexed bisimulation condition."""


def bisim_equiv(g: UltrasGraph, s1: int, s2: int, depth: int = DEFAULT_DEPTH) -> Verdict:
    """Refine, then validate the verdict for ``s1`` and ``s2`` up to ``depth``.

    States in one block must pass :func:`bisim_check_bounded`; states in
    different blocks come back with a witness trace and class.
    """
    p = bisim_refine(g)
    checked = bisim_check_bounded(g, s1, s2, p, max(depth, 1))
    if p.same_block(s1, s2):
        if not checked:
            raise RefinementDisagreement(str(checked))
        return Verdict(True, depth)
    if checked:
        # blocks only split on one-step differences, so a length-1 witness exists
        raise RefinementDisagreement("states in different blocks but no witness found")
    return checked
