"""The functional F, its linear part L and the optimal scaling along rays."""
# %%
import numpy as np

from abreu_kit import (
    GuilleminPotential, ParametrizedPotential, build_scheme, coercivity_probe, eval_F,
    moments, optimal_scaling, preset, solve_extremal_affine,
)

# %% The extremal affine function s on each polytope
for name in ("interval", "square", "cp2-simplex", "hirzebruch-1"):
    E = solve_extremal_affine(moments(preset(name)))
    print(f"{name:13s} s = {E.s.a0:.6f} + {np.round(E.s.a, 6)} . x   Rbar = {E.rbar:.6f}")

# %% F(u_P) on the interval against 2 log 2 - 2
P = preset("interval")
S, E = build_scheme(P, 4), solve_extremal_affine(moments(P))
r = eval_F(GuilleminPotential(P), S, E)
print(r.to_dict(), "\nerror", r.F - (2 * np.log(2) - 2))

# %% Along the ray lam * u, F is convex in log lam with minimum at n Vol / L(u)
P = preset("square")
S, E = build_scheme(P, 2), solve_extremal_affine(moments(P))
u = ParametrizedPotential.from_terms(P, {(2, 0): 0.3, (1, 2): 0.05})
lam_star = optimal_scaling(u, S, E)
for lam in (0.5 * lam_star, lam_star, 2 * lam_star):
    print(f"lam = {lam:.4f}  F = {eval_F(u.scaled(lam), S, E).F:.8f}")

# %% Coercivity probe: F grows with int u along scalings of u_P
rows = coercivity_probe([GuilleminPotential(P).scaled(l) for l in range(1, 6)], S, E)
for mass, F in rows:
    print(f"int u = {mass:9.4f}   F = {F:9.4f}")
