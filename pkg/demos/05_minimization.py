"""Minimizing F over u_P plus polynomials, then certifying with the Abreu residual."""
# %%
import numpy as np

from abreu_kit import (
    GuilleminPotential, MinimizeConfig, ParametrizedPotential, build_scheme, eval_F, minimize,
    moments, preset, residual_report, sample_points, solve_extremal_affine,
)

# %% Interval: from a perturbed start back to u_P
P = preset("interval")
start = ParametrizedPotential.from_terms(P, {(2,): 0.3, (4,): 0.1})
u, trace = minimize(start, MinimizeConfig(degree=6, level=4))
print(f"{trace.n_iter} iterations, F = {trace.F[-1]:.10f}, target {2 * np.log(2) - 2:.10f}")
print("largest leftover coefficient", np.max(np.abs(u.coeffs)))
print(trace.to_csv()[:400])

# %% Square: the product solution u_P is recovered as well
P = preset("square")
S, E = build_scheme(P, 3), solve_extremal_affine(moments(P))
u, trace = minimize(ParametrizedPotential.from_terms(P, {(2, 2): 0.2}), MinimizeConfig(level=3), S, E)
print(f"{trace.n_iter} iterations, F - F(u_P) = {trace.F[-1] - eval_F(GuilleminPotential(P), S, E).F:.2e}")
print("sup residual", residual_report(u, E, sample_points(S)).sup)

# %% Hirzebruch trapezoid: s is not constant, so the minimizer moves away from u_P
P = preset("hirzebruch-1")
S, E = build_scheme(P, 3), solve_extremal_affine(moments(P))
u, trace = minimize(ParametrizedPotential(P, degree=4), MinimizeConfig(degree=4, level=3), S, E)
R = residual_report(u, E, sample_points(S))
print(f"{trace.n_iter} iterations, F {trace.F[0]:.6f} -> {trace.F[-1]:.6f}, sup residual {R.sup:.3e}")
