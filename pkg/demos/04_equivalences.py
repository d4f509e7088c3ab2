# # Comparing processes
#
# Trace equivalence compares measures against the whole state space,
# bisimulation compares them class by class, and testing equivalence runs
# each process against a battery of observers.

from ultras import (
    bisim_equiv,
    bisim_refine,
    explore,
    generate_battery,
    parse_model,
    testing_equiv,
    trace_equiv,
)
from ultras.syntax import Const

env = parse_model("""
calculus csp
const P = a.(b.stop + c.stop)
const Q = a.b.stop + a.c.stop
init P
""")
g = explore(env, roots=(Const("P"), Const("Q")))
p, q = g.roots

print("trace  ", trace_equiv(g, p, q))
print("bisim  ", bisim_equiv(g, p, q))
print("classes", [sorted(b) for b in bisim_refine(g).blocks])

# With conjunction as the combining function success is a may-property, so
# even the branching observers agree with trace equivalence here.
battery = generate_battery(g.alphabet, 2, env.calculus)
for obs in battery:
    print(f"{obs.name:28} {testing_equiv(g, p, q, [obs])}")

# The same question for rates: a faster server is told apart by the first step
rates = parse_model("""
calculus pepa
const Slow = (a,2).stop
const Fast = (a,3).stop
init Slow
""")
h = explore(rates, roots=(Const("Slow"), Const("Fast")))
print(trace_equiv(h, *h.roots))
