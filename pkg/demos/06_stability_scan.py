"""L on simple piecewise-linear functions and the facet margin test."""
# %%
import numpy as np

from abreu_kit import (
    PLFunction, facet_margins, eval_L_pl, moments, preset, scan_creases, solve_extremal_affine,
)

# %% Interval: L(max{x - c, 0}) = (1 - c) - (1 - c)^2 / 2
P = preset("interval")
E = solve_extremal_affine(moments(P))
for c in (-0.9, -0.5, 0.0, 0.5, 0.9):
    print(f"c = {c:+.1f}  L = {eval_L_pl(PLFunction.simple(-c, [1.0]), P, E):.12f}  "
          f"closed form {(1 - c) - (1 - c) ** 2 / 2:.12f}")

# %% Grid scans and margins side by side.  A positive scan minimum without
# positive margins is reported as observed; no conclusion is attached.
for name in ("interval", "square", "cp2-simplex", "hirzebruch-1"):
    P = preset(name)
    E = solve_extremal_affine(moments(P))
    rep = scan_creases(P, E)
    print(f"{name:13s} creases={len(rep.creases):4d} min L={rep.minimum:.5f} "
          f"violations={len(rep.violations)} margins={np.round(facet_margins(P, E), 4)}")

# %% Where on the square does L come closest to zero?
P = preset("square")
rep = scan_creases(P, solve_extremal_affine(moments(P)))
k = int(np.argmin(rep.values))
print("closest crease:", rep.creases[k], "L =", rep.values[k])
