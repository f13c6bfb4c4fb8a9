"""Boundary-graded quadrature on Delzant polytopes.

P is split into cones over its faces, recursively: a k-face is the union of
cones from its centroid over its (k-1)-faces.  Along each cone's radial
parameter t in (0, 1) (t = 1 on the base) we place Gauss-Legendre nodes on a
geometric mesh with breakpoints 1 - 2^-j, j = 0..m, m = level + 4.  The
innermost layer [1 - 2^-m, 1] carries the log singularity of the entropy
integrand; there the substitution t = 1 - 2^-m s^2 is applied before the
Gauss rule, which removes the leading log term.

The boundary rule is the same construction applied to each facet, with
weights multiplied by the sigma density 1/|l_i|.  For n = 1 the facets are
points and the boundary rule reduces to unit point masses.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidLevel, NonFiniteIntegrand
from .polytope import DelzantPolytope

logger = logging.getLogger(__name__)

GAUSS_ORDER = 8
GRADING_RATIO = 0.5
EXTRA_LAYERS = 4


@lru_cache(maxsize=None)
def graded_rule(layers: int, order: int = GAUSS_ORDER):
    """Nodes/weights on (0, 1) clustered geometrically toward t = 1."""
    x, w = np.polynomial.legendre.leggauss(order)
    x = (x + 1.0) / 2.0
    w = w / 2.0
    br = 1.0 - GRADING_RATIO ** np.arange(layers + 1)
    T, W = [], []
    for a, b in zip(br[:-1], br[1:]):
        T.append(a + (b - a) * x)
        W.append((b - a) * w)
    h = GRADING_RATIO ** layers
    T.append(1.0 - h * x**2)
    W.append(2.0 * h * x * w)
    t, wt = np.concatenate(T), np.concatenate(W)
    t.setflags(write=False)
    wt.setflags(write=False)
    return t, wt


def _height(apex, base_pts):
    """Distance from apex to the affine hull of base_pts."""
    base_pts = np.asarray(base_pts, dtype=float)
    r = apex - base_pts[0]
    if len(base_pts) > 1:
        E = base_pts[1:] - base_pts[0]
        u, s, vt = np.linalg.svd(E, full_matrices=False)
        B = vt[s > 1e-12 * max(1.0, s.max())]
        r = r - B.T @ (B @ r)
    return float(np.linalg.norm(r))


def _face_rule(region, ids, k, t, wt):
    """Nodes and k-dimensional measure weights on the k-face spanned by ``ids``."""
    pts = np.array([[float(c) for c in region.vertices[i]] for i in ids])
    if k == 0:
        return pts[:1], np.ones(1)
    apex = pts.mean(axis=0)
    X, W = [], []
    for sub_ids in region.subfaces(ids, k):
        Y, WY = _face_rule(region, sub_ids, k - 1, t, wt)
        sub_pts = np.array([[float(c) for c in region.vertices[i]] for i in sub_ids])
        h = _height(apex, sub_pts)
        X.append((apex + t[:, None, None] * (Y - apex)[None, :, :]).reshape(-1, len(apex)))
        W.append(((wt * t ** (k - 1))[:, None] * (h * WY)[None, :]).ravel())
    return np.concatenate(X), np.concatenate(W)


@dataclass(frozen=True, eq=False)
class QuadratureScheme:
    polytope: DelzantPolytope
    level: int
    interior_nodes: np.ndarray
    interior_weights: np.ndarray
    boundary_nodes: np.ndarray
    boundary_weights: np.ndarray  # already include the 1/|l_i| density
    boundary_facet: np.ndarray  # facet index of each boundary node

    @property
    def n_interior(self) -> int:
        return len(self.interior_weights)

    @property
    def n_boundary(self) -> int:
        return len(self.boundary_weights)

    def integrate_interior(self, f, vectorized=True) -> float:
        return _weighted_sum(f, self.interior_nodes, self.interior_weights, vectorized)

    def integrate_boundary(self, f, vectorized=True) -> float:
        return _weighted_sum(f, self.boundary_nodes, self.boundary_weights, vectorized)


def _weighted_sum(f, nodes, weights, vectorized):
    if vectorized:
        vals = np.asarray(f(nodes), dtype=float)
        if vals.shape == ():
            vals = np.full(len(weights), float(vals))
    else:
        vals = np.array([float(f(x)) for x in nodes])
    return weighted_sum(vals, weights, nodes)


def weighted_sum(vals, weights, nodes=None) -> float:
    """sum w_k f_k with a non-finite check; numpy's pairwise summation keeps it deterministic."""
    vals = np.asarray(vals, dtype=float)
    bad = ~np.isfinite(vals)
    if bad.any():
        k = int(np.argmax(bad))
        where = None if nodes is None else np.asarray(nodes)[k]
        raise NonFiniteIntegrand(f"integrand is {vals[k]} at node {where}", node=where)
    return float(np.sum(weights * vals))


def build_scheme(polytope: DelzantPolytope, level: int = 4) -> QuadratureScheme:
    """Graded interior and boundary rules on P (see module docstring)."""
    if isinstance(level, bool) or not isinstance(level, (int, np.integer)) or level < 1:
        raise InvalidLevel(f"level must be a positive integer, got {level!r}")
    return _build(polytope, int(level))


@lru_cache(maxsize=32)
def _build(P: DelzantPolytope, level: int) -> QuadratureScheme:
    t, wt = graded_rule(level + EXTRA_LAYERS)
    region = P.region
    n = P.dim
    all_ids = list(range(len(region.vertices)))
    X, W = _face_rule(region, all_ids, n, t, wt)
    bX, bW, bF = [], [], []
    dens = 1.0 / P.normal_norms
    for i in range(P.n_facets):
        Y, WY = _face_rule(region, region.face_ids(i), n - 1, t, wt)
        bX.append(Y)
        bW.append(WY * dens[i])
        bF.append(np.full(len(WY), i))
    scheme = QuadratureScheme(
        polytope=P,
        level=level,
        interior_nodes=X,
        interior_weights=W,
        boundary_nodes=np.concatenate(bX),
        boundary_weights=np.concatenate(bW),
        boundary_facet=np.concatenate(bF),
    )
    for arr in (X, W, scheme.boundary_nodes, scheme.boundary_weights, scheme.boundary_facet):
        arr.setflags(write=False)
    logger.debug("built level-%d scheme on %r: %d interior / %d boundary nodes",
                 level, P, scheme.n_interior, scheme.n_boundary)
    return scheme


@lru_cache(maxsize=None)
def ball_rule(dim: int, order: int = 48):
    """Nodes and weights of the normalized bump rho(z) = Z exp(-1/(1-|z|^2)) on the unit ball.

    Tensor Gauss-Legendre on [-1, 1]^dim; rho and all its derivatives vanish
    on the sphere so the masked rule converges spectrally.  Z is fixed by the
    same rule, so the weights sum to 1 exactly up to rounding.
    """
    x, w = np.polynomial.legendre.leggauss(order)
    grids = np.meshgrid(*([x] * dim), indexing="ij")
    Z = np.stack([g.ravel() for g in grids], axis=-1)
    Wt = np.ones(len(Z))
    for j, g in enumerate(np.meshgrid(*([w] * dim), indexing="ij")):
        Wt = Wt * g.ravel()
    r2 = np.sum(Z**2, axis=1)
    inside = r2 < 1.0
    Z, Wt, r2 = Z[inside], Wt[inside], r2[inside]
    bump = np.exp(-1.0 / (1.0 - r2))
    Wt = Wt * bump
    Wt = Wt / np.sum(Wt)
    Z.setflags(write=False)
    Wt.setflags(write=False)
    return Z, Wt
