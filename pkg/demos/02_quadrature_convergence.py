"""Graded quadrature and the log-singular entropy integrand."""
# %%
import numpy as np

from abreu_kit import GuilleminPotential, build_scheme, eval_guillemin, moments, preset

# %% The model singular integral on the interval, exact value 4 - 2 log 2
exact = 4 - 2 * np.log(2)
for level in range(1, 7):
    S = build_scheme(preset("interval"), level)
    val = S.integrate_interior(lambda X: np.log(2 / (1 - X[:, 0] ** 2)))
    print(f"level {level}: nodes={S.n_interior:4d} error={val - exact:+.3e}")

# %% Affine integrands are reproduced to rounding on every polytope
for name in ("square", "cp2-simplex", "hirzebruch-1"):
    P = preset(name)
    S = build_scheme(P, 3)
    mt = moments(P)
    got = S.integrate_interior(lambda X: 1 + X[:, 0] - 2 * X[:, 1])
    ref = mt.volume + mt.first[0] - 2 * mt.first[1]
    print(f"{name:13s} affine error {abs(got - ref):.1e}")

# %% Entropy of u_P: successive differences halve from level to level
for name in ("square", "cp2-simplex"):
    P = preset(name)
    prev = None
    for level in range(1, 6):
        S = build_scheme(P, level)
        H = eval_guillemin(P, S.interior_nodes)[2]
        ent = -S.integrate_interior(lambda X: np.log(np.linalg.det(H)))
        if prev is not None:
            print(f"{name:11s} level {level}: entropy {ent:.10f} delta {ent - prev:+.2e}")
        prev = ent

# %% Boundary values of u_P use the continuous extension 0 log 0 = 0
S = build_scheme(preset("interval"), 2)
print("int_dP u_P dsigma =", S.integrate_boundary(GuilleminPotential(preset("interval"))), "vs 4 log 2 =", 4 * np.log(2))
