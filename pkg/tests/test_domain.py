from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ultras.domain import (
    Distribution,
    DomainKind,
    DomainValueError,
    GraphError,
    KindMismatchError,
    UltrasGraph,
    dist_join,
    dist_mass,
    dist_scale,
    empty,
    point,
)

B, P, R = DomainKind.BOOLEAN, DomainKind.PROBABILITY, DomainKind.RATE


def test_kind_structure():
    assert B.bottom is False and B.unit is True
    assert P.bottom == 0 and R.unit == 1
    assert B.join(False, True) is True and B.product(True, False) is False
    assert R.join(F(2), F(3)) == 5 and R.product(F(2), F(3)) == 6
    assert B.leq(False, True) and not B.leq(True, False)
    assert P.leq(F(1, 3), F(1, 2))


@pytest.mark.parametrize(
    "kind, bad",
    [(P, F(3, 2)), (P, F(-1)), (R, F(-1, 2)), (B, 1), (P, 0.5), (R, True)],
)
def test_coerce_rejects_out_of_domain(kind, bad):
    with pytest.raises(DomainValueError):
        Distribution(kind, {"x": bad})


def test_bottom_is_absence():
    d = Distribution(P, {"x": F(0), "y": F(1, 2)})
    assert set(d) == {"y"}
    assert d("x") == 0 and d("nowhere") == 0
    with pytest.raises(KeyError):
        d["x"]


def test_join_boolean():
    assert dist_join(point(B, "P"), point(B, "Q")) == Distribution(B, {"P": True, "Q": True})


def test_join_rates_sum():
    assert dist_join(point(R, "P", F(2)), point(R, "P", F(3))) == point(R, "P", F(5))


def test_join_identity_and_mismatch():
    d = Distribution(R, {"P": F(2), "Q": F(1, 3)})
    assert dist_join(d, empty(R)) == d
    with pytest.raises(KindMismatchError):
        dist_join(d, empty(P))


def test_scale():
    assert dist_scale(1, 2, point(P, "P")) == point(P, "P", F(1, 2))
    assert dist_scale(3, 0, point(P, "P")) == empty(P)
    d = Distribution(R, {"P": F(2), "Q": F(7)})
    assert dist_scale(1, 1, d) == d
    with pytest.raises(KindMismatchError):
        dist_scale(1, 2, point(B, "P"))


def test_mass():
    assert dist_mass(Distribution(P, {"P": F(3, 10), "Q": F(7, 10)})) == 1
    assert dist_mass(empty(P)) == 0
    assert dist_mass(empty(B)) is False
    # direct summation: 2 + 3
    assert dist_mass(Distribution(R, {"P": F(2), "Q": F(3)})) == 5


def test_map_targets_joins_collisions():
    d = Distribution(R, {1: F(1), 2: F(2)})
    assert d.map_targets(lambda t: 0) == point(R, 0, F(3))


def test_distribution_hash_and_eq():
    a = Distribution(R, {"x": F(1), "y": F(2)})
    b = Distribution(R, [("y", F(2)), ("x", F(1))])
    assert a == b and hash(a) == hash(b)
    assert a != Distribution(P, {"x": F(1)})


# ------------------------------------------------------------ properties

targets = st.sampled_from("pqrstu")
rates = st.fractions(min_value=0, max_value=20, max_denominator=12)


@st.composite
def rate_dists(draw):
    return Distribution(R, draw(st.dictionaries(targets, rates, max_size=5)))


@st.composite
def bool_dists(draw):
    return Distribution(B, {t: True for t in draw(st.sets(targets, max_size=5))})


@given(st.one_of(st.tuples(rate_dists(), rate_dists(), rate_dists()), st.tuples(bool_dists(), bool_dists(), bool_dists())))
def test_join_commutative_associative(ds):
    d1, d2, d3 = ds
    assert dist_join(d1, d2) == dist_join(d2, d1)
    assert dist_join(dist_join(d1, d2), d3) == dist_join(d1, dist_join(d2, d3))
    assert dist_join(d1, empty(d1.kind)) == d1
    for t in "pqrstu":
        assert dist_join(d1, d2)(t) == d1.kind.join(d1(t), d2(t))


@given(rate_dists(), rate_dists(), st.fractions(0, 10, max_denominator=10), st.fractions(0, 10, max_denominator=10))
def test_scale_distributes_over_join(d1, d2, x, y):
    assert dist_scale(x, y, dist_join(d1, d2)) == dist_join(dist_scale(x, y, d1), dist_scale(x, y, d2))


# ------------------------------------------------------------ graph


def test_graph_functional_and_closed():
    d = point(B, 1)
    g = UltrasGraph.build(B, ["s", "t"], ["a"], {(0, "a"): d})
    assert g.dist(1, "a") == empty(B)
    assert list(g.edges()) == [(0, "a", 1, True)]
    with pytest.raises(GraphError):
        UltrasGraph(B, ("s", "t"), ("a",), {(0, "a"): d})
    with pytest.raises(GraphError):
        UltrasGraph.build(B, ["s"], ["a"], {(0, "a"): point(B, 7)})
    with pytest.raises(KindMismatchError):
        UltrasGraph.build(B, ["s"], ["a"], {(0, "a"): point(R, 0, F(1))})
