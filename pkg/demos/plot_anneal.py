"""
Annealing the Golay network
===========================

The search changes the initial order of the ancilla bits and which bit of
each gate is moved. The budget here is small; the default config is larger.
"""

import numpy as np

from shuttleqec.anneal import AnnealConfig, anneal, default_state, evaluate
from shuttleqec.gf2codes import build_golay
from shuttleqec.schedule import build_network

net = build_network(build_golay())
print("start:", evaluate(net, default_state(net)))

cfg = AnnealConfig(cooling_factor=0.98, steps_per_temperature=2000, temperature_levels=300, reheat_cycles=3, seed=1)
res = anneal(net, cfg)
d = res.stats
print(f"best: mean {d.mean:.2f}, median {d.median}, max {d.maximum}, rms {d.rms:.2f}")
print("proposals", res.counts)

# Temperature and best maximum separation at the end of each cooling run
trace = np.array([(r.cycle, r.temperature, r.best_max) for r in res.trace])
for cyc in range(cfg.reheat_cycles):
    last = trace[trace[:, 0] == cyc][-1]
    print(f"cycle {cyc}: T {last[1]:.3g}, best max {int(last[2])}")

# Histogram of separations in the optimized network
s = res.network.separations()
print(np.bincount(s))
