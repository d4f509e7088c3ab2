"""Reachability domains, finitely supported distributions and the ULTraS graph.

Values are plain Python objects tagged by the kind of the container that
holds them: ``bool`` for the Boolean domain and :class:`fractions.Fraction`
for the probability and rate domains. The bottom element is never stored;
absence from a distribution's support *is* bottom.
"""

from __future__ import annotations

import enum
from collections.abc import Callable, Hashable, Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

DomainValue = Union[bool, Fraction]


class KindMismatchError(ValueError):
    """Two objects of different reachability domains were combined."""


class DomainValueError(ValueError):
    """A value lies outside its domain (e.g. a probability above one)."""


class DomainKind(enum.Enum):
    BOOLEAN = "boolean"
    PROBABILITY = "probability"
    RATE = "rate"

    @property
    def numeric(self) -> bool:
        return self is not DomainKind.BOOLEAN

    @property
    def bottom(self) -> DomainValue:
        return False if self is DomainKind.BOOLEAN else Fraction(0)

    @property
    def unit(self) -> DomainValue:
        """Neutral element of :meth:`product` (top for Boolean, one otherwise)."""
        return True if self is DomainKind.BOOLEAN else Fraction(1)

    def is_bottom(self, v: DomainValue) -> bool:
        return not v

    def join(self, x: DomainValue, y: DomainValue) -> DomainValue:
        if self is DomainKind.BOOLEAN:
            return x or y
        return x + y

    def product(self, x: DomainValue, y: DomainValue) -> DomainValue:
        if self is DomainKind.BOOLEAN:
            return x and y
        return x * y

    def leq(self, x: DomainValue, y: DomainValue) -> bool:
        if self is DomainKind.BOOLEAN:
            return (not x) or bool(y)
        return x <= y

    def coerce(self, v) -> DomainValue:
        """Validate ``v`` and return it in this domain's canonical representation."""
        if self is DomainKind.BOOLEAN:
            if not isinstance(v, bool):
                raise DomainValueError(f"boolean domain expects a bool, got {v!r}")
            return v
        if isinstance(v, bool) or not isinstance(v, (int, Fraction)):
            raise DomainValueError(f"{self.value} domain expects an exact rational, got {v!r}")
        v = Fraction(v)
        if v < 0:
            raise DomainValueError(f"{self.value} value must be non-negative, got {v}")
        if self is DomainKind.PROBABILITY and v > 1:
            raise DomainValueError(f"probability must not exceed 1, got {v}")
        return v

    def format(self, v: DomainValue) -> str:
        return format_value(v)


def format_value(v: DomainValue) -> str:
    """Render a domain value: ``true``/``false``, an integer, or ``n/d``."""
    if isinstance(v, bool):
        return "true" if v else "false"
    v = Fraction(v)
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


def _kind_of(*ds: "Distribution") -> DomainKind:
    kind = ds[0].kind
    for d in ds[1:]:
        if d.kind is not kind:
            raise KindMismatchError(f"cannot combine {kind.value} and {d.kind.value} distributions")
    return kind


class Distribution(Mapping):
    """Immutable, finitely supported map from targets to non-bottom domain values.

    ``d[q]`` follows the mapping protocol and raises ``KeyError`` outside the
    support; ``d(q)`` is the total function and returns bottom there.
    """

    __slots__ = ("kind", "_support", "_hash")

    def __init__(self, kind: DomainKind, support: Mapping | Iterable = ()):
        items = support.items() if isinstance(support, Mapping) else support
        data = {}
        for target, value in items:
            value = kind.coerce(value)
            if not kind.is_bottom(value):
                data[target] = value
        self.kind = kind
        self._support = data
        self._hash = None

    @classmethod
    def _trusted(cls, kind: DomainKind, data: dict) -> "Distribution":
        d = cls.__new__(cls)
        d.kind = kind
        d._support = data
        d._hash = None
        return d

    def __getitem__(self, target):
        return self._support[target]

    def __iter__(self) -> Iterator:
        return iter(self._support)

    def __len__(self) -> int:
        return len(self._support)

    def __call__(self, target) -> DomainValue:
        return self._support.get(target, self.kind.bottom)

    def __eq__(self, other):
        if not isinstance(other, Distribution):
            return NotImplemented
        return self.kind is other.kind and self._support == other._support

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.kind, frozenset(self._support.items())))
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{t!s} -> {format_value(v)}" for t, v in self._support.items())
        return f"Distribution({self.kind.value}, [{body}])"

    @property
    def support(self) -> frozenset:
        return frozenset(self._support)

    def map_targets(self, f: Callable[[Hashable], Hashable]) -> "Distribution":
        """Rename every target through ``f``; colliding targets are joined."""
        out: dict = {}
        join = self.kind.join
        for t, v in self._support.items():
            t2 = f(t)
            out[t2] = join(out[t2], v) if t2 in out else v
        return Distribution._trusted(self.kind, out)


def empty(kind: DomainKind) -> Distribution:
    return Distribution._trusted(kind, {})


def point(kind: DomainKind, target, value: DomainValue | None = None) -> Distribution:
    """The distribution ``[target -> value]`` (``value`` defaults to the unit)."""
    return Distribution(kind, [(target, kind.unit if value is None else value)])


def dist_join(d1: Distribution, d2: Distribution) -> Distribution:
    """Pointwise join: disjunction for Boolean, addition for numeric kinds."""
    kind = _kind_of(d1, d2)
    out = dict(d1._support)
    for t, v in d2._support.items():
        out[t] = kind.join(out[t], v) if t in out else v
    if kind is DomainKind.PROBABILITY:
        return Distribution(kind, out)
    return Distribution._trusted(kind, out)


def dist_scale(x, y, d: Distribution) -> Distribution:
    """Multiply every value by ``x/y``; the empty distribution when ``y == 0``."""
    if not d.kind.numeric:
        raise KindMismatchError("scaling is only defined for numeric domains")
    x, y = Fraction(x), Fraction(y)
    if x < 0 or y < 0:
        raise DomainValueError("scaling factors must be non-negative")
    if y == 0:
        return empty(d.kind)
    factor = x / y
    return Distribution(d.kind, {t: v * factor for t, v in d._support.items()})


def dist_mass(d: Distribution) -> DomainValue:
    """Total join of the distribution's values (bottom when empty)."""
    if d.kind is DomainKind.BOOLEAN:
        return bool(d._support)
    return sum(d._support.values(), Fraction(0))


def dist_combine(
    d1: Distribution,
    d2: Distribution,
    pair: Callable[[Hashable, Hashable], Hashable],
    combine: Callable[[DomainValue, DomainValue], DomainValue] | None = None,
    kind: DomainKind | None = None,
) -> Distribution:
    """Pointwise product over pairs of targets.

    The result maps ``pair(q1, q2)`` to ``combine(d1(q1), d2(q2))`` for every
    ``q1`` in the support of ``d1`` and ``q2`` in the support of ``d2``.
    ``combine`` defaults to the domain product, which is bottom-preserving, so
    pairs outside both supports never contribute.
    """
    if kind is None:
        kind = _kind_of(d1, d2)
    if combine is None:
        combine = kind.product
    out: dict = {}
    for q1, v1 in d1._support.items():
        for q2, v2 in d2._support.items():
            v = combine(v1, v2)
            if kind.is_bottom(v):
                continue
            t = pair(q1, q2)
            out[t] = kind.join(out[t], v) if t in out else v
    return Distribution(kind, out)


class GraphError(ValueError):
    """An UltrasGraph violates functionality or closure."""


class UnknownActionError(KeyError):
    """An action outside a graph's alphabet was requested."""


@dataclass(frozen=True)
class UltrasGraph:
    """An explicit functional ULTraS.

    ``states[i]`` is the label of state ``i`` (a process term, a
    configuration, ...). ``transitions`` holds exactly one distribution over
    state ids for each ``(state, action)`` pair of the alphabet.
    """

    kind: DomainKind
    states: tuple
    alphabet: tuple[str, ...]
    transitions: Mapping[tuple[int, str], Distribution]
    roots: tuple[int, ...] = (0,)
    index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {label: i for i, label in enumerate(self.states)})
        if len(self.index) != len(self.states):
            raise GraphError("state labels must be distinct")
        n = len(self.states)
        for r in self.roots:
            if not 0 <= r < n:
                raise GraphError(f"root {r} is not a state")
        expected = n * len(self.alphabet)
        if len(self.transitions) != expected:
            raise GraphError(
                f"expected {expected} (state, action) distributions, got {len(self.transitions)}"
            )
        for s in range(n):
            for a in self.alphabet:
                d = self.transitions.get((s, a))
                if d is None:
                    raise GraphError(f"missing distribution for state {s}, action {a!r}")
                if d.kind is not self.kind:
                    raise KindMismatchError(f"distribution of ({s}, {a}) has kind {d.kind.value}")
                for t in d:
                    if not (isinstance(t, int) and 0 <= t < n):
                        raise GraphError(f"target {t!r} of ({s}, {a}) is not a registered state")

    @classmethod
    def build(cls, kind, states, alphabet, transitions, roots=(0,)) -> "UltrasGraph":
        """Construct a graph, filling absent ``(state, action)`` pairs with ``[ ]``."""
        table = dict(transitions)
        none = empty(kind)
        for s in range(len(states)):
            for a in alphabet:
                table.setdefault((s, a), none)
        return cls(kind, tuple(states), tuple(alphabet), table, tuple(roots))

    def __len__(self) -> int:
        return len(self.states)

    def dist(self, s: int, a: str) -> Distribution:
        try:
            return self.transitions[(s, a)]
        except KeyError:
            if a not in self.alphabet:
                raise UnknownActionError(a) from None
            raise

    def state_id(self, label) -> int:
        return self.index[label]

    def edges(self) -> Iterator[tuple[int, str, int, DomainValue]]:
        """Non-bottom ``(src, action, dst, value)`` triples in state/alphabet order."""
        for s in range(len(self.states)):
            for a in self.alphabet:
                d = self.transitions[(s, a)]
                for t in sorted(d):
                    yield s, a, t, d[t]
