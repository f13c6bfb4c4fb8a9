"""Numerical Legendre transforms and mollified potentials."""
# %%
import numpy as np

from abreu_kit import GuilleminPotential, PLFunction, legendre, legendre_roundtrip, mollify, preset

# %% Conjugate of e^y + e^-y is x arcsinh(x/2) - sqrt(x^2 + 4)
y = np.linspace(-2, 2, 201)
x = np.linspace(-3, 3, 7)
_, u = legendre(y, np.exp(y) + np.exp(-y), out_grid=x)
print(np.c_[x, u, x * np.arcsinh(x / 2) - np.sqrt(x**2 + 4)])

# %% Round trip on a quartic
y = np.linspace(-1.5, 1.5, 121)
print("round-trip error", legendre_roundtrip(y, y**2 / 2 + y**4 / 12))

# %% Mollifying |x| smooths the kink only inside the bump radius
P = preset("interval")
uh = mollify(PLFunction([0.0, 0.0], [[1.0], [-1.0]]), 0.1, P)
X = np.array([[-0.2], [-0.05], [0.0], [0.05], [0.2]])
print(np.c_[X[:, 0], uh(X), np.abs(X[:, 0])])

# %% Mollified u_P stays within h times the local Lipschitz constant
uP = GuilleminPotential(P)
uh = mollify(uP, 0.05)
X = np.linspace(-0.8, 0.8, 9)[:, None]
print("max |u_h - u_P| on [-0.8, 0.8]:", np.max(np.abs(uh(X) - uP(X))))
