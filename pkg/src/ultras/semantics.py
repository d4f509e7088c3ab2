"""Rule engines computing the target distribution of ``P --a-->``.

One engine covers the three calculi; the calculus of the definition
environment selects the domain and the flavour of each rule:

=========  =================  ==========================  ==========================
rule       CSP (Boolean)      PCSP (probability)          PEPA (rate)
=========  =================  ==========================  ==========================
Act        ``[P -> true]``    ``[P -> 1]``                ``[P -> rate]``
Sum        ``D1 or D2``       mass-normalised by ``p``    ``D1 + D2``
Coop       pairwise ``and``   pairwise product            product, apparent-rate min
Int        wrapped join       wrapped, normalised by p    wrapped sum
=========  =================  ==========================  ==========================

Targets are process terms; no structural congruence is applied.
"""

from __future__ import annotations

from fractions import Fraction

from .domain import (
    Distribution,
    DomainKind,
    dist_combine,
    dist_join,
    dist_mass,
    dist_scale,
    empty,
    point,
)
from .syntax import (
    Calculus,
    Choice,
    Const,
    DefinitionEnv,
    Par,
    PChoice,
    PPar,
    Prefix,
    RatedPrefix,
    Stop,
    Term,
)


class Semantics:
    """Memoised next-distribution function for one definition environment."""

    def __init__(self, env: DefinitionEnv):
        self.env = env
        self.calculus = env.calculus
        self.kind: DomainKind = env.calculus.kind
        self._cache: dict[tuple[Term, str], Distribution] = {}
        self._empty = empty(self.kind)

    def __call__(self, term: Term, action: str) -> Distribution:
        return self.next(term, action)

    def next(self, term: Term, action: str) -> Distribution:
        key = (term, action)
        d = self._cache.get(key)
        if d is None:
            d = self._derive(term, action)
            self._cache[key] = d
        return d

    def _derive(self, t: Term, a: str) -> Distribution:
        kind = self.kind
        if isinstance(t, Stop):
            return self._empty
        if isinstance(t, Prefix):
            return point(kind, t.body) if t.action == a else self._empty
        if isinstance(t, RatedPrefix):
            return point(kind, t.body, t.rate) if t.action == a else self._empty
        if isinstance(t, Const):
            body = self.env.equations.get(t.name)
            # an undefined constant only survives validation as the observer's
            # success state, which is inert
            return self._empty if body is None else self.next(body, a)
        if isinstance(t, Choice):
            return dist_join(self.next(t.left, a), self.next(t.right, a))
        if isinstance(t, PChoice):
            return _weighted(t.p, self.next(t.left, a), self.next(t.right, a))
        if isinstance(t, (Par, PPar)):
            return self._parallel(t, a)
        raise TypeError(f"not a process term: {t!r}")

    def _parallel(self, t: Par | PPar, a: str) -> Distribution:
        d1 = self.next(t.left, a)
        d2 = self.next(t.right, a)
        if isinstance(t, PPar):
            def rebuild(q1, q2, sync=t.sync, p=t.p):
                return PPar(sync, p, q1, q2)
        else:
            def rebuild(q1, q2, sync=t.sync):
                return Par(sync, q1, q2)

        if a in t.sync:
            joint = dist_combine(d1, d2, rebuild)
            if self.calculus is Calculus.PEPA:
                m1, m2 = dist_mass(d1), dist_mass(d2)
                return dist_scale(min(m1, m2), m1 * m2, joint)
            return joint

        left_moves = d1.map_targets(lambda q1: rebuild(q1, t.right))
        right_moves = d2.map_targets(lambda q2: rebuild(t.left, q2))
        if isinstance(t, PPar):
            return _weighted(t.p, left_moves, right_moves, d1, d2)
        return dist_join(left_moves, right_moves)


def _weighted(p: Fraction, x1: Distribution, x2: Distribution,
              d1: Distribution | None = None, d2: Distribution | None = None) -> Distribution:
    """``w1*x1 + w2*x2`` with ``w_i`` the ``p``-weighted share of ``d_i``'s mass.

    ``d_i`` default to ``x_i``; they differ only for interleaving, where
    ``x_i`` are the wrapped versions of ``d_i`` (same mass).
    """
    d1 = x1 if d1 is None else d1
    d2 = x2 if d2 is None else d2
    w1 = p * dist_mass(d1)
    w2 = (1 - p) * dist_mass(d2)
    total = w1 + w2
    return dist_join(dist_scale(w1, total, x1), dist_scale(w2, total, x2))


def _engine(env: DefinitionEnv, calculus: Calculus) -> Semantics:
    if env.calculus is not calculus:
        raise ValueError(f"environment is {env.calculus.value}, not {calculus.value}")
    return Semantics(env)


def next_csp(term: Term, action: str, env: DefinitionEnv) -> Distribution:
    return _engine(env, Calculus.CSP).next(term, action)


def next_pcsp(term: Term, action: str, env: DefinitionEnv) -> Distribution:
    return _engine(env, Calculus.PCSP).next(term, action)


def next_pepa(term: Term, action: str, env: DefinitionEnv) -> Distribution:
    return _engine(env, Calculus.PEPA).next(term, action)
