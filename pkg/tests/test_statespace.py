import pytest

from oracles import corpus_files, corpus_graph
from ultras.domain import Distribution, DomainKind, empty
from ultras.statespace import (
    ExplorationConfig,
    StateBudgetExceeded,
    explore,
    export_graph,
)
from ultras.syntax import STOP, Const, parse_model, parse_term


def model(text):
    return parse_model(text)


def test_single_prefix():
    g = explore(model("calculus csp\ninit a.stop"))
    assert g.states == (parse_term("a.stop", "csp"), STOP)
    assert g.alphabet == ("a",)
    assert g.dist(0, "a") == Distribution(DomainKind.BOOLEAN, {1: True})
    assert g.dist(1, "a") == empty(DomainKind.BOOLEAN)


def test_recursion_self_loop():
    g = explore(model("calculus csp\nconst B = a.B\ninit B"))
    assert g.states == (Const("B"),)
    assert g.dist(0, "a") == Distribution(DomainKind.BOOLEAN, {0: True})


def test_state_budget():
    env = model("calculus csp\ninit a.stop |[]| a.stop")
    with pytest.raises(StateBudgetExceeded) as exc:
        explore(env, ExplorationConfig(max_states=2))
    assert exc.value.max_states == 2
    assert len(explore(env)) == 4


def test_config_validation(monkeypatch):
    with pytest.raises(ValueError):
        ExplorationConfig(max_states=0)
    monkeypatch.setenv("ULTRAS_MAX_STATES", "17")
    assert ExplorationConfig.from_environ().max_states == 17
    assert ExplorationConfig.from_environ(max_states=3).max_states == 3


def test_numbering_ties_broken_by_term_text():
    g = explore(model("calculus csp\ninit a.(z.stop) + a.(b.stop) + b.(c.stop)"))
    assert [str(s) for s in g.states] == ["a.z.stop + a.b.stop + b.c.stop", "b.stop", "z.stop", "c.stop", "stop"]


def test_explicit_alphabet_and_roots():
    env = model("calculus csp\nconst P = a.stop\nconst Q = b.stop\ninit P")
    g = explore(env, ExplorationConfig(alphabet=("b",)), roots=(Const("P"), Const("Q")))
    assert g.alphabet == ("b",)
    assert g.roots == (0, 1)
    g = explore(env, roots=(Const("P"), Const("P")))
    assert g.roots == (0, 0)


def test_export_dot_boolean():
    g = explore(model("calculus csp\ninit a.stop"))
    dot = export_graph(g, "dot")
    assert dot.startswith("digraph ultras {")
    assert '0 -> 1 [label="a"]' in dot
    assert '1 [label="stop"]' in dot


def test_export_tra_rate():
    g = explore(model("calculus pepa\ninit (a,2).stop"))
    assert export_graph(g, "tra") == "STATES 2\nTRANSITIONS 1\n0 a 1 2\n"
    assert '0 -> 1 [label="a/2"]' in export_graph(g, "dot")


def test_export_tra_probabilities():
    g = explore(model("calculus pcsp\ninit a.stop +(0.3) a.b.stop"))
    # next_pcsp gives [stop -> 3/10, b.stop -> 7/10]; b.stop (1) sorts before stop (2)
    assert export_graph(g, "tra") == (
        "STATES 3\nTRANSITIONS 3\n0 a 1 7/10\n0 a 2 3/10\n1 b 2 1\n"
    )


def test_export_rejects_unknown_format():
    with pytest.raises(ValueError):
        export_graph(explore(model("calculus csp\ninit stop")), "json")


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.stem)
def test_determinism_and_closure(path):
    env, g = corpus_graph(path)
    _, again = corpus_graph(path)
    assert g == again
    assert export_graph(g, "tra") == export_graph(again, "tra")
    for d in g.transitions.values():
        assert all(0 <= t < len(g) for t in d)


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.stem)
def test_reexploring_gives_subgraph(path):
    env, g = corpus_graph(path)
    for s in range(len(g)):
        sub = explore(env, ExplorationConfig(alphabet=g.alphabet), roots=(g.states[s],))
        for i, label in enumerate(sub.states):
            j = g.state_id(label)
            for a in g.alphabet:
                assert sub.dist(i, a).map_targets(lambda t: g.state_id(sub.states[t])) == g.dist(j, a)
