# # PEPA and the rate matrix
#
# With rates as values, summing a distribution gives the apparent rate of
# an action. Cooperation proceeds at the pace of the slower partner.

from ultras import dist_mass, explore, export_graph, next_pepa, parse_model, parse_term

env = parse_model("""
calculus pepa
const Client = (req,2).(think,1).Client
const Server = (req,3).(serve,4).Server
init Client |[req]| Server
""")

coop = parse_term("(a,2).stop |[a]| (a,3).stop", "pepa")
print(next_pepa(coop, "a", env), "apparent rate", dist_mass(next_pepa(coop, "a", env)))

g = explore(env)
print(f"{len(g)} states over {', '.join(g.alphabet)}")

# The tra listing is what a CTMC solver would take as its generator
print(export_graph(g, "tra"))
