"""Delzant polytopes, exact moments and the boundary measure."""
# %%
from fractions import Fraction

import numpy as np

from abreu_kit import (
    DelzantPolytope, NonDelzantVertex, barycentric_translate, moments, preset, shrink,
    standard_simplex, validate_delzant,
)

# %% The four built-in polytopes, with their vertex determinants
for name in ("interval", "square", "cp2-simplex", "hirzebruch-1"):
    P = preset(name)
    rep = validate_delzant(P)
    print(f"{name:13s} vertices={len(rep.vertices)} dets={list(rep.determinants)} inradius={rep.inradius:.4f}")

# %% A triangle whose corner at (0, 1) is not smooth
bad = DelzantPolytope([(-1, 0), (0, -1), (1, 2)], [0, 0, 2])
try:
    validate_delzant(bad)
except NonDelzantVertex as e:
    print("rejected:", e, "| determinant", e.determinant)

# %% Moments are exact rationals.  The hypotenuse of the simplex has length
# sqrt(2) but boundary density 1/sqrt(2), so it contributes exactly 1.
mt = moments(standard_simplex(2))
print("volume", mt.exact["volume"], "boundary mass", mt.exact["boundary_mass"])

# %% Moving the barycenter to the origin gives equal supports 1/3
Q, offset = barycentric_translate(standard_simplex(2))
print("supports", [str(f.support) for f in Q.facets], "offset", offset)

# %% Shrinking composes exactly on supports
P = preset("square")
a, b = Fraction(1, 10), Fraction(1, 7)
print("shrink(shrink(P, a), b) == shrink(P, a + b):", shrink(shrink(P, a), b) == shrink(P, a + b))
print("covariance of hirzebruch-1:\n", np.round(moments(preset("hirzebruch-1")).covariance, 6))
