"""Abreu's operator -sum_ij d^2 u^{ij} / dx_i dx_j and the extremal-equation residual.

The inverse Hessian U = (D^2u)^-1 is evaluated exactly from the
representation; only the outer second derivatives are taken by central
differences with step h0 (default 1e-4 diam P), so the error is O(h0^2) plus
rounding of order eps |U| / h0^2.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateHessian, TooCloseToBoundary

DEFAULT_STEP_FRACTION = 1e-4


def default_step(polytope) -> float:
    return DEFAULT_STEP_FRACTION * polytope.diameter


def _inverse_hessian(u, X):
    H = u.hessian(X)
    d = np.linalg.det(H)
    if np.any(~(d > 0)):
        k = int(np.argmax(~(d > 0)))
        raise DegenerateHessian(f"det D^2u = {d[k]:.6g} at {X[k]}")
    return np.linalg.inv(H)


def abreu_operator(u, x, h0=None):
    """-sum_ij d_i d_j U_ij at x (single point of shape (n,) or batch (N, n))."""
    P = u.polytope
    h0 = default_step(P) if h0 is None else float(h0)
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    X = np.atleast_2d(x)
    N, n = X.shape
    dist = P.facet_distance(X)
    if np.any(dist < 2 * h0):
        k = int(np.argmin(dist))
        raise TooCloseToBoundary(f"point {X[k]} is {dist[k]:.3g} from the boundary; need >= 2 h0 = {2 * h0:.3g}")
    E = np.eye(n) * h0
    # stencil: centre, +-e_i, and +-e_i +-e_j for i < j
    offsets = [np.zeros(n)]
    for i in range(n):
        offsets += [E[i], -E[i]]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for i, j in pairs:
        offsets += [E[i] + E[j], E[i] - E[j], -E[i] + E[j], -E[i] - E[j]]
    offsets = np.array(offsets)
    pts = (X[:, None, :] + offsets[None, :, :]).reshape(-1, n)
    U = _inverse_hessian(u, pts).reshape(N, len(offsets), n, n)
    total = np.zeros(N)
    for i in range(n):
        total += (U[:, 1 + 2 * i, i, i] - 2 * U[:, 0, i, i] + U[:, 2 + 2 * i, i, i]) / h0**2
    base = 1 + 2 * n
    for p, (i, j) in enumerate(pairs):
        q = base + 4 * p
        mixed = (U[:, q, i, j] - U[:, q + 1, i, j] - U[:, q + 2, i, j] + U[:, q + 3, i, j]) / (4 * h0**2)
        total += 2 * mixed  # U_ij and U_ji
    out = -total
    return float(out[0]) if single else out


@dataclass(frozen=True, eq=False)
class AbreuResidual:
    points: np.ndarray
    operator: np.ndarray
    s_values: np.ndarray
    residual: np.ndarray = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "residual", self.operator - self.s_values)

    @property
    def sup(self) -> float:
        return float(np.max(np.abs(self.residual))) if len(self.residual) else 0.0

    @property
    def l2(self) -> float:
        """Root mean square over the sample set."""
        return float(np.sqrt(np.mean(self.residual**2))) if len(self.residual) else 0.0

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        n = self.points.shape[1] if self.points.ndim == 2 else 0
        w.writerow([f"x{j + 1}" for j in range(n)] + ["operator", "s", "residual"])
        for x, a, s, r in zip(self.points, self.operator, self.s_values, self.residual):
            w.writerow([f"{v:.17g}" for v in (*x, a, s, r)])
        return buf.getvalue()


def residual_report(u, extremal, sample, h0=None) -> AbreuResidual:
    """Pointwise -u^{ij}_{ij} - s on the sample points."""
    sample = np.asarray(sample, dtype=float)
    if sample.size == 0:
        n = u.dim
        empty = np.zeros(0)
        return AbreuResidual(np.zeros((0, n)), empty, empty)
    sample = np.atleast_2d(sample)
    A = abreu_operator(u, sample, h0)
    return AbreuResidual(sample, np.atleast_1d(A), extremal.s(sample))


def sample_points(scheme, h0=None, max_points=200, seed=0):
    """Interior quadrature nodes at distance >= 2 h0 from the boundary, subsampled reproducibly."""
    P = scheme.polytope
    h0 = default_step(P) if h0 is None else h0
    X = scheme.interior_nodes
    X = X[P.facet_distance(X) >= 2 * h0 * (1 + 1e-9)]
    if len(X) > max_points:
        idx = np.sort(np.random.default_rng(seed).choice(len(X), max_points, replace=False))
        X = X[idx]
    return X
