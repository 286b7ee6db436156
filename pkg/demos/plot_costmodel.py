"""
How much more precise must swaps be?
====================================

Compare moving qubits by nearest-neighbour swaps with physically
transporting them, using the mean separations of the optimized networks.
"""

from shuttleqec.costmodel import (
    ConcatenationParams,
    CostModel,
    concat_analysis,
    format_report,
    gate_noise_factor,
    recovery_time_estimate,
    required_precision,
)

print([gate_noise_factor(s, CostModel()) for s in (0, 5, 19)])
print(gate_noise_factor(20, CostModel(D=40, model="transport")))

rep = required_precision(CostModel(), s_bar=22)
print(format_report(rep.lines()))

# Golay blocks inside a BCH block
for ancillas in (2, 4):
    p = ConcatenationParams.with_ancillas(ancillas)
    print(f"{ancillas} ancillas per block")
    print(format_report(concat_analysis(p, s_bar_inner=6, s_bar_outer=22, D=50).lines()))

print("recovery time", recovery_time_estimate(10, 15, CostModel(), repetitions=2))
