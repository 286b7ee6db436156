"""
Building the two CSS codes
==========================

Both codes come from cyclic classical codes that contain their duals.
"""

import numpy as np

from shuttleqec.gf2codes import build_bch127, build_golay, minimum_distance, standard_form

# The Golay check matrix has 11 rows of length 23, and H H^T vanishes mod 2.
golay = build_golay()
print(golay.label, golay.H.shape)
print("H H^T is zero:", (golay.H @ golay.H.T).is_zero())

# 4096 codewords, so the minimum distance can be checked by enumeration.
print("minimum weight:", minimum_distance(golay))

# The BCH code is built over GF(128) with designed distance 15.
bch = build_bch127()
print(bch.label, bch.H.shape, "distance verified:", bch.d_verified)

# Standard form H ~ (I | A): A is what the scheduler sees.
for code in (golay, bch):
    sf = standard_form(code.H)
    A = sf.A.astype(int)
    print(f"{code.name}: A is {A.shape}, {A.sum()} ones, "
          f"row weights {A.sum(1).min()}..{A.sum(1).max()}, "
          f"column weights {A.sum(0).min()}..{A.sum(0).max()}")

# The first few rows of the Golay A as a picture
print("\n".join("".join(".#"[x] for x in row) for row in np.asarray(standard_form(golay.H).A)[:5]))
