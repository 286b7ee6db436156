"""
Putting the bits on a line
==========================

Gates act on neighbours only, so one bit of each pair is moved next to the
other and the bits in between shift by one place.
"""

from pathlib import Path

from shuttleqec.gf2codes import build_golay
from shuttleqec.schedule import LogicalNetwork, build_network
from shuttleqec.shuttle import COL, Layout, distance_stats, initial_layout, render_svg, shuttle_transform

# A single gate between the two ends of a six-bit line
net = LogicalNetwork(((1, 0, 5),), n=6)
sn = shuttle_transform(net, Layout(tuple(range(6))))
print("separation", sn.gates[0].s, "line afterwards", sn.final.line)

# Moving the other bit instead shifts the middle the other way.
sn = shuttle_transform(net, Layout(tuple(range(6))), [COL])
print("line afterwards", sn.final.line)

# The unoptimized Golay verification network
golay = build_network(build_golay())
sn = shuttle_transform(golay, initial_layout(golay.n, golay.v))
print(distance_stats(sn).as_dict())

out = Path("golay_unoptimized.svg")
out.write_text(render_svg(sn, title="Golay verification, identity layout"))
print("wrote", out)
