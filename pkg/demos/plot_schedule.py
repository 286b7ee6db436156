"""
Scheduling parity checks as a Latin rectangle
=============================================

Each 1 in A is a gate; giving it a time step so that no row or column
repeats a step is an edge colouring of a bipartite graph.
"""

import numpy as np

from shuttleqec.gf2codes import build_bch127, build_golay, standard_form
from shuttleqec.schedule import balance, build_network, latin_rectangle, max_degree

A = standard_form(build_golay().H).A

# Konig: the number of steps equals the largest row or column weight.
lr = latin_rectangle(A)
print("max degree", max_degree(A), "alphabet", lr.alphabet)
print(lr.symbols)

# Balancing spreads the gates evenly over the steps.
print("gates per step before", lr.occurrences(), "after", balance(lr).occurrences())

# The verification network adds one coupling step in front.
for code in (build_golay(), build_bch127()):
    net = build_network(code)
    par = net.parallelism()
    print(f"{code.name}: {len(net)} gates, depth {net.depth}, first step {par[0]}, "
          f"then {np.bincount(par[1:]).argmax()} per step")
