# # Boolean semantics of CSP
#
# A CSP term is read as a state of a uniform labelled transition system:
# for every action the transition function returns a distribution over
# Booleans, i.e. the set of terms reachable in one step.

from ultras import explore, export_graph, next_csp, parse_model, parse_term

env = parse_model("""
calculus csp
const P = a.(b.stop + c.stop)
const Q = a.b.stop + a.c.stop
init P
""")

# Nondeterministic choice joins the two sides, so both successors appear.
print(next_csp(parse_term("a.stop + a.b.stop", "csp"), "a", env))

# Synchronising on `a` moves both sides together.
print(next_csp(parse_term("a.stop |[a]| a.c.stop", "csp"), "a", env))

# Reachable graph from the initial term, numbered in discovery order
g = explore(env)
for i, term in enumerate(g.states):
    print(i, term)

print(export_graph(g, "dot"))
