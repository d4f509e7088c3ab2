# # Probabilistic choice
#
# In PCSP the value attached to each successor is a probability. A branch
# that cannot perform the action drops out and the other one is
# renormalised, so every distribution has mass 0 or 1.

from fractions import Fraction

from ultras import dist_mass, explore, export_graph, next_pcsp, parse_model, parse_term

env = parse_model("""
calculus pcsp
const Fair = toss.heads.Fair +(1/2) toss.tails.Fair
const Biased = toss.heads.Biased +(2/3) toss.tails.Biased
init Fair
""")

both = next_pcsp(parse_term("a.stop +(0.3) a.b.stop", "pcsp"), "a", env)
print(both, dist_mass(both))

# only the left branch offers `a`, so it gets the whole mass
one = next_pcsp(parse_term("a.stop +(0.3) c.stop", "pcsp"), "a", env)
print(one, dist_mass(one))
assert dist_mass(one) == Fraction(1)

print(export_graph(explore(env), "tra"))
