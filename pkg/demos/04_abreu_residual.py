"""The Abreu operator of u_P against the extremal affine function."""
# %%
import numpy as np

from abreu_kit import (
    GuilleminPotential, ParametrizedPotential, abreu_operator, build_scheme, moments, preset,
    residual_report, sample_points, solve_extremal_affine,
)

# %% On the interval, (u_P'')^-1 = (1 - x^2)/2, whose second derivative is -1
P = preset("interval")
print("A(u_P)(0.3) =", abreu_operator(GuilleminPotential(P), np.array([0.3])))

# %% u_P solves the extremal equation on the interval, square and simplex
# but not on the Hirzebruch trapezoid, where s is not constant
for name in ("interval", "square", "cp2-simplex", "hirzebruch-1"):
    P = preset(name)
    S, E = build_scheme(P, 3), solve_extremal_affine(moments(P))
    R = residual_report(GuilleminPotential(P), E, sample_points(S, max_points=100))
    print(f"{name:13s} sup residual {R.sup:.2e}  rms {R.l2:.2e}")

# %% A perturbation is detected at once
P = preset("interval")
E = solve_extremal_affine(moments(P))
R = residual_report(ParametrizedPotential.from_terms(P, {(2,): 0.1}), E, np.linspace(-0.9, 0.9, 7)[:, None])
print(R.to_csv())
