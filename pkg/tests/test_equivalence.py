from fractions import Fraction as F

import pytest

from oracles import (
    brute_measure,
    corpus_files,
    corpus_graph,
    dfa_language_equal,
    enabled_traces,
    naive_bisim_classes,
)
from ultras.domain import UnknownActionError
from ultras.equivalence import (
    MeasureSpec,
    Partition,
    bisim_check_bounded,
    bisim_equiv,
    bisim_refine,
    measure,
    measure_vector,
    trace_equiv,
    validate_partition,
)
from ultras.domain import DomainKind
from ultras.statespace import explore
from ultras.syntax import Const, parse_model


def graph(calculus, consts, init=None):
    """Explore from every constant in definition order (state i = i-th constant)."""
    text = f"calculus {calculus}\n" + "".join(f"const {k} = {v}\n" for k, v in consts.items())
    text += f"init {init or next(iter(consts))}\n"
    env = parse_model(text)
    return explore(env, roots=[Const(k) for k in consts])


def all_states(g):
    return range(len(g))


# ------------------------------------------------------------------- measure


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.stem)
def test_empty_trace_is_membership(path):
    _, g = corpus_graph(path)
    for s in all_states(g):
        assert measure(g, s, (), {s}) == g.kind.unit
        assert measure(g, s, (), set(all_states(g)) - {s}) == g.kind.bottom


def test_measure_csp_branching():
    g = graph("csp", {"P": "a.(b.stop + c.stop)"})
    assert measure(g, 0, "ab", all_states(g)) is True
    assert measure(g, 0, "ba", all_states(g)) is False


def test_measure_pcsp_branching():
    g = graph("pcsp", {"P": "a.b.stop +(0.3) a.c.stop"})
    expected = brute_measure(g, 0, "ab", all_states(g))
    assert expected == F(3, 10)
    assert measure(g, 0, "ab", all_states(g)) == expected


def test_measure_pepa_rate_product():
    g = graph("pepa", {"P": "(a,2).(b,3).stop"})
    expected = brute_measure(g, 0, "ab", all_states(g))
    assert expected == 6
    assert measure(g, 0, "ab", all_states(g)) == expected


def test_measure_unknown_action():
    g = graph("csp", {"P": "a.stop"})
    with pytest.raises(UnknownActionError):
        measure(g, 0, "z", all_states(g))


def test_measure_spec_follows_kind():
    m = MeasureSpec(DomainKind.RATE)
    assert m.join(F(1), F(2)) == 3 and m.product(F(2), F(3)) == 6 and m.unit == 1
    assert MeasureSpec(DomainKind.BOOLEAN).bottom is False


@pytest.mark.parametrize("path", [p for p in corpus_files()], ids=lambda p: p.stem)
def test_measure_vector_matches_pointwise(path):
    _, g = corpus_graph(path)
    for trace in [(), g.alphabet[:1], g.alphabet[:2], g.alphabet[:1] * 3]:
        T = set(range(0, len(g), 2))
        vec = measure_vector(g, trace, T)
        assert vec == [measure(g, s, trace, T) for s in all_states(g)]


# ------------------------------------------------------------------- traces


def test_trace_equiv_reflexive():
    g = graph("pcsp", {"P": "a.b.stop +(0.3) a.c.stop"})
    assert trace_equiv(g, 0, 0, 6)


def test_trace_equiv_csp_branching_pair():
    g = graph("csp", {"P": "a.(b.stop + c.stop)", "Q": "a.b.stop + a.c.stop"})
    p, q = g.roots
    assert enabled_traces(g, p, 4) == enabled_traces(g, q, 4)
    for k in range(5):
        v = trace_equiv(g, p, q, k)
        assert v and str(v) == f"EQUIVALENT depth={k}"


def test_trace_equiv_pepa_rates():
    g = graph("pepa", {"P": "(a,2).stop", "Q": "(a,3).stop"})
    v = trace_equiv(g, *g.roots, 6)
    assert not v
    assert (v.trace, v.lhs, v.rhs) == (("a",), 2, 3)
    assert str(v) == "DISTINGUISHED trace=a lhs=2 rhs=3"


def test_trace_equiv_pcsp_witness_format():
    g = graph("pcsp", {"P": "a.b.stop +(0.3) a.c.stop", "Q": "a.b.stop +(1/2) a.c.stop"})
    v = trace_equiv(g, *g.roots)
    assert str(v) == "DISTINGUISHED trace=ab lhs=3/10 rhs=1/2"


def test_shortest_least_witness():
    g = graph("csp", {"P": "a.b.stop + c.c.stop", "Q": "a.a.stop + c.a.stop"})
    v = trace_equiv(g, *g.roots)
    # length-2 candidates in alphabet order (a, b, c): aa < ab < ...
    assert v.trace == ("a", "a") and (v.lhs, v.rhs) == (False, True)


def test_multi_letter_actions_are_dot_separated():
    g = graph("csp", {"P": "go.left.stop", "Q": "go.right.stop"})
    assert str(trace_equiv(g, *g.roots)) == "DISTINGUISHED trace=go.left lhs=true rhs=false"


def test_negative_depth_rejected():
    g = graph("csp", {"P": "a.stop"})
    with pytest.raises(ValueError):
        trace_equiv(g, 0, 0, -1)


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.stem)
def test_monotonicity(path):
    _, g = corpus_graph(path)
    for s1 in all_states(g):
        for s2 in all_states(g):
            verdicts = [bool(trace_equiv(g, s1, s2, k)) for k in range(5)]
            first_fail = verdicts.index(False) if False in verdicts else len(verdicts)
            assert all(not v for v in verdicts[first_fail:])


@pytest.mark.parametrize("path", [p for p in corpus_files() if p.name.startswith("csp")], ids=lambda p: p.stem)
def test_boolean_trace_equiv_is_language_equality(path):
    _, g = corpus_graph(path)
    for s1 in all_states(g):
        for s2 in all_states(g):
            assert bool(trace_equiv(g, s1, s2, 8)) == dfa_language_equal(g, s1, s2)


# ------------------------------------------------------------------- bisimulation


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition.of({0, 1}, {1, 2})
    with pytest.raises(ValueError):
        Partition.of({0}, {2})
    with pytest.raises(ValueError):
        Partition.of({0}, set())
    p = Partition.of({2, 1}, {0})
    assert p.blocks == (frozenset({0}), frozenset({1, 2}))
    assert p.block_of(2) == 1 and p.same_block(1, 2)


def test_refine_all_deadlocked():
    g = graph("csp", {"P": "stop |[a]| a.stop", "Q": "a.stop |[a]| stop"})
    assert bisim_refine(g) == Partition.of(range(len(g)))


def test_refine_pepa_rates_lump():
    g = graph("pepa", {"S1": "(a,2).stop + (a,3).stop", "S2": "(a,5).stop", "S3": "(a,3).stop"})
    p = bisim_refine(g)
    s1, s2, s3 = g.roots
    assert p.same_block(s1, s2) and not p.same_block(s1, s3)


def test_refine_pcsp_weights_differ():
    g = graph("pcsp", {"P3": "a.b.stop +(0.3) a.c.stop", "P5": "a.b.stop +(0.5) a.c.stop"})
    assert not bisim_refine(g).same_block(*g.roots)


def test_check_identical_and_idempotent_sum():
    g = graph("csp", {"R": "a.stop + a.stop", "S": "a.stop"})
    p = bisim_refine(g)
    assert bisim_check_bounded(g, 0, 0, p, 6)
    assert bisim_check_bounded(g, *g.roots, p, 6)
    assert bisim_equiv(g, *g.roots)


def test_check_csp_branching_pair_fails_with_witness():
    g = graph("csp", {"P": "a.(b.stop + c.stop)", "Q": "a.b.stop + a.c.stop"})
    p = bisim_refine(g)
    assert [sorted(c) for c in p.blocks] == [sorted(c) for c in naive_bisim_classes(g)]
    v = bisim_check_bounded(g, *g.roots, p, 6)
    assert not v
    assert v.trace == ("a",)
    witness_class = p.blocks[v.block]
    bc = g.state_id(parse_model("calculus csp\ninit b.stop + c.stop").init)
    b = g.state_id(parse_model("calculus csp\ninit b.stop").init)
    assert bc in witness_class and b not in witness_class
    assert (v.lhs, v.rhs) == (True, False)
    assert not bisim_equiv(g, *g.roots)
    assert trace_equiv(g, *g.roots)


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.stem)
def test_refine_matches_naive_oracle(path):
    _, g = corpus_graph(path)
    p = bisim_refine(g)
    assert [sorted(c) for c in p.blocks] == [sorted(c) for c in naive_bisim_classes(g)]


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.stem)
def test_refinement_passes_bounded_check(path):
    _, g = corpus_graph(path)
    assert validate_partition(g, bisim_refine(g), 6)


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.stem)
def test_bisimulation_refines_trace_equivalence(path):
    _, g = corpus_graph(path)
    for block in bisim_refine(g).blocks:
        rep = min(block)
        for s in block:
            assert trace_equiv(g, rep, s, 6)


def test_two_cells_bisimilar_to_buffer():
    path = next(p for p in corpus_files() if p.stem == "csp_buffer")
    env, g = corpus_graph(path)
    p = bisim_refine(g)
    assert p.same_block(g.state_id(env.init), g.state_id(Const("B0")))


def test_brute_force_oracles_agree():
    from oracles import brute_measure_product

    g = graph("pcsp", {"P": "a.(b.stop +(1/3) a.stop) +(1/4) a.b.stop"})
    for trace in ["", "a", "ab", "aa", "aab"]:
        for T in [range(len(g)), {0}, {len(g) - 1}]:
            assert brute_measure(g, 0, trace, T) == brute_measure_product(g, 0, trace, T)
