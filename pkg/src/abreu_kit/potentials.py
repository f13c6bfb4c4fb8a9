"""Convex functions on a Delzant polytope.

All representations share one evaluation interface: ``u(x)`` for values and
``u.gradient(x)`` / ``u.hessian(x)`` for derivatives.  Points are accepted as
a single vector of shape (n,) or a batch of shape (N, n); results follow the
same leading shape.
"""
from __future__ import annotations

import itertools
import math
from collections import OrderedDict
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicSpline, RectBivariateSpline
from scipy.optimize import minimize, minimize_scalar
from scipy.special import xlogy

from .errors import (
    BoundaryEvaluation,
    MollifierTooWide,
    NonConvexInput,
    NonInteriorPoint,
)
from .polytope import DelzantPolytope, moments
from .quadrature import ball_rule


def _batch(x, dim=None):
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    X = np.atleast_2d(x)
    if dim is not None and X.shape[-1] != dim:
        raise ValueError(f"expected points of dimension {dim}, got shape {x.shape}")
    return X, single


def _unbatch(arr, single):
    return arr[0] if single else arr


_NODE_CACHE: OrderedDict = OrderedDict()
_NODE_CACHE_SIZE = 8


def _cached_at_nodes(tag, X, order, compute):
    """Memoize per-node data for read-only node arrays (quadrature schemes).

    Scheme node arrays are frozen, so identity plus the retained reference is
    a safe key; writeable arrays are always recomputed.
    """
    if X.flags.writeable:
        return compute()
    key = (tag, id(X), order)
    hit = _NODE_CACHE.get(key)
    if hit is not None and hit[0] is X:
        _NODE_CACHE.move_to_end(key)
        return hit[1]
    val = compute()
    for arr in val:
        arr.setflags(write=False)
    _NODE_CACHE[key] = (X, val)
    if len(_NODE_CACHE) > _NODE_CACHE_SIZE:
        _NODE_CACHE.popitem(last=False)
    return val


class Potential:
    """Common interface; subclasses implement the batched ``_eval``."""

    dim: int
    polytope: DelzantPolytope | None = None

    def _eval(self, X, order):
        raise NotImplementedError

    def evaluate(self, x, order=2):
        """(value, gradient, hessian) up to the requested derivative order."""
        X, single = _batch(x, self.dim)
        out = self._eval(X, order)
        return tuple(_unbatch(a, single) for a in out)

    def __call__(self, x):
        return self.evaluate(x, 0)[0]

    def gradient(self, x):
        return self.evaluate(x, 1)[1]

    def hessian(self, x):
        return self.evaluate(x, 2)[2]

    def scaled(self, lam):
        raise NotImplementedError

    def add_affine(self, a0, a):
        return AffineShift(self, AffineFunction(a0, a))


class AffineFunction(Potential):
    """a0 + <a, x>."""

    def __init__(self, a0, a):
        self.a0 = float(a0)
        self.a = np.atleast_1d(np.asarray(a, dtype=float)).copy()
        self.dim = len(self.a)

    def __repr__(self):
        return f"AffineFunction(a0={self.a0!r}, a={self.a.tolist()!r})"

    def _eval(self, X, order):
        N, n = X.shape
        val = self.a0 + X @ self.a
        out = [val]
        if order >= 1:
            out.append(np.broadcast_to(self.a, (N, n)).copy())
        if order >= 2:
            out.append(np.zeros((N, n, n)))
        return out

    def scaled(self, lam):
        return AffineFunction(lam * self.a0, lam * self.a)

    def add_affine(self, a0, a):
        return AffineFunction(self.a0 + a0, self.a + np.asarray(a, dtype=float))

    def __add__(self, other):
        if isinstance(other, AffineFunction):
            return self.add_affine(other.a0, other.a)
        return NotImplemented


class GuilleminPotential(Potential):
    """u_P = sum_i l_i(x) log l_i(x), l_i(x) = lambda_i - <l_i, x>."""

    def __init__(self, polytope: DelzantPolytope):
        self.polytope = polytope
        self.dim = polytope.dim

    def __repr__(self):
        return f"GuilleminPotential({self.polytope!r})"

    def _eval(self, X, order):
        return guillemin_terms(self.polytope, X, order)

    def scaled(self, lam):
        return ParametrizedPotential(self.polytope, np.zeros(0), exponents=np.zeros((0, self.dim), int),
                                     guillemin_weight=lam)

    def add_affine(self, a0, a):
        u = ParametrizedPotential(self.polytope, np.zeros(0), exponents=np.zeros((0, self.dim), int))
        return u.add_affine(a0, a)


def guillemin_terms(P: DelzantPolytope, X, order=2):
    return _cached_at_nodes(("guillemin", P), X, order, lambda: _guillemin_terms(P, X, order))


def _guillemin_terms(P, X, order):
    ell = P.ell(X)
    # boundary nodes may land an ulp outside the facet
    ell = np.where((ell < 0) & (ell > -1e-12 * (1.0 + np.abs(P.supports))), 0.0, ell)
    if np.any(ell < 0):
        k = int(np.argmax(np.any(ell < 0, axis=1)))
        raise NonInteriorPoint(f"point {X[k]} lies outside the closed polytope")
    val = np.sum(xlogy(ell, ell), axis=1)
    out = [val]
    if order >= 1:
        if np.any(ell == 0):
            k = int(np.argmax(np.any(ell == 0, axis=1)))
            raise BoundaryEvaluation(f"derivatives of u_P requested at boundary point {X[k]}")
        out.append(-(np.log(ell) + 1.0) @ P.normals)
    if order >= 2:
        L = P.normals
        out.append(np.einsum("ki,kj,nk->nij", L, L, 1.0 / ell))
    return out


def guillemin(P: DelzantPolytope) -> GuilleminPotential:
    return GuilleminPotential(P)


def eval_guillemin(P: DelzantPolytope, x):
    """(value, gradient, hessian) of u_P at x; derivatives need x interior."""
    return GuilleminPotential(P).evaluate(x, 2)


class MonomialBasis:
    """Monomials x^alpha with |alpha| <= degree, in graded order."""

    def __init__(self, dim, degree=None, exponents=None):
        if exponents is None:
            exponents = monomial_exponents(dim, degree)
        self.exponents = np.asarray(exponents, dtype=int).reshape(-1, dim)
        self.dim = dim
        self.degree = int(self.exponents.sum(axis=1).max()) if len(self.exponents) else 0

    def __len__(self):
        return len(self.exponents)

    @cached_property
    def affine_mask(self):
        return self.exponents.sum(axis=1) <= 1

    def index(self, alpha):
        alpha = tuple(int(a) for a in alpha)
        for k, e in enumerate(self.exponents):
            if tuple(e) == alpha:
                return k
        raise KeyError(alpha)

    def _deriv(self, powers, d):
        """d^d x^alpha for all alpha; powers[:, j, p] = x_j^p."""
        E = self.exponents
        N = powers.shape[0]
        out = np.ones((N, len(E)))
        for j in range(self.dim):
            e = E[:, j]
            k = d[j]
            coef = np.ones(len(E))
            for m in range(k):
                coef = coef * (e - m)
            p = np.clip(e - k, 0, None)
            out *= coef[None, :] * powers[:, j, :][:, p]
        return out

    def _powers(self, X):
        return X[:, :, None] ** np.arange(self.degree + 1)[None, None, :]

    def values(self, X):
        return self._deriv(self._powers(X), (0,) * self.dim)

    def derivatives(self, X, order=2):
        """(values (N,K), gradients (N,K,n), hessians (N,K,n,n)) up to ``order``."""
        tag = ("monomials", self.exponents.tobytes(), self.exponents.shape)
        return _cached_at_nodes(tag, X, order, lambda: self._derivatives(X, order))

    def _derivatives(self, X, order):
        pw = self._powers(X)
        n = self.dim
        out = [self._deriv(pw, (0,) * n)]
        if order >= 1:
            G = np.empty(out[0].shape + (n,))
            for j in range(n):
                d = [0] * n
                d[j] = 1
                G[..., j] = self._deriv(pw, d)
            out.append(G)
        if order >= 2:
            H = np.empty(out[0].shape + (n, n))
            for j in range(n):
                for k in range(j, n):
                    d = [0] * n
                    d[j] += 1
                    d[k] += 1
                    H[..., j, k] = self._deriv(pw, d)
                    H[..., k, j] = H[..., j, k]
            out.append(H)
        return out


def monomial_exponents(dim, degree):
    out = []
    for t in range(degree + 1):
        for e in itertools.product(range(t, -1, -1), repeat=dim):
            if sum(e) == t:
                out.append(e)
    return np.array(out, dtype=int).reshape(-1, dim)


class Polynomial(Potential):
    """sum_alpha c_alpha x^alpha."""

    def __init__(self, coeffs, exponents):
        self.basis = MonomialBasis(np.asarray(exponents).shape[-1], exponents=exponents)
        self.coeffs = np.asarray(coeffs, dtype=float).copy()
        self.dim = self.basis.dim
        if len(self.coeffs) != len(self.basis):
            raise ValueError("one coefficient per exponent required")

    @classmethod
    def from_terms(cls, terms: dict, dim=None):
        exps = list(terms)
        dim = dim or len(exps[0])
        return cls([terms[e] for e in exps], np.array(exps, dtype=int).reshape(-1, dim))

    def __repr__(self):
        return f"Polynomial({self.terms()!r})"

    def terms(self):
        return {tuple(int(v) for v in e): float(c) for e, c in zip(self.basis.exponents, self.coeffs)}

    def _eval(self, X, order):
        parts = self.basis.derivatives(X, order)
        return [np.tensordot(p, self.coeffs, axes=([1], [0])) for p in parts]

    def scaled(self, lam):
        return Polynomial(lam * self.coeffs, self.basis.exponents)


class ParametrizedPotential(Potential):
    """u = w u_P + sum_alpha c_alpha x^alpha  (w = 1 for the search family).

    Parameters
    ----------
    polytope : DelzantPolytope
    coeffs : coefficient vector c, aligned with ``exponents``
    exponents : (K, n) integer array; defaults to all monomials of degree <= ``degree``
    degree : total degree cap D when ``exponents`` is not given
    guillemin_weight : w
    """

    def __init__(self, polytope, coeffs=None, exponents=None, degree=None, guillemin_weight=1.0):
        self.polytope = polytope
        self.dim = polytope.dim
        if exponents is None:
            exponents = monomial_exponents(self.dim, 6 if degree is None else degree)
        self.basis = MonomialBasis(self.dim, exponents=exponents)
        self.coeffs = np.zeros(len(self.basis)) if coeffs is None else np.asarray(coeffs, dtype=float).copy()
        if len(self.coeffs) != len(self.basis):
            raise ValueError(f"{len(self.coeffs)} coefficients for {len(self.basis)} monomials")
        self.guillemin_weight = float(guillemin_weight)

    @classmethod
    def from_terms(cls, polytope, terms: dict, degree=None, guillemin_weight=1.0):
        """Start from {exponent tuple: coefficient} in the degree-``degree`` basis."""
        deg = max([sum(e) for e in terms] + [1]) if degree is None else degree
        u = cls(polytope, degree=deg, guillemin_weight=guillemin_weight)
        for e, c in terms.items():
            u.coeffs[u.basis.index(e)] += c
        return u

    def __repr__(self):
        nz = {k: v for k, v in self.terms().items() if v != 0.0}
        return f"ParametrizedPotential(w={self.guillemin_weight}, terms={nz})"

    def terms(self):
        return {tuple(int(v) for v in e): float(c) for e, c in zip(self.basis.exponents, self.coeffs)}

    @property
    def smooth_part(self) -> Polynomial:
        return Polynomial(self.coeffs, self.basis.exponents)

    def with_coeffs(self, coeffs):
        return ParametrizedPotential(self.polytope, coeffs, self.basis.exponents,
                                     guillemin_weight=self.guillemin_weight)

    def in_basis(self, exponents):
        """Same function expressed over a larger monomial basis."""
        u = ParametrizedPotential(self.polytope, None, exponents, guillemin_weight=self.guillemin_weight)
        for e, c in self.terms().items():
            u.coeffs[u.basis.index(e)] += c
        return u

    def _eval(self, X, order):
        parts = self.basis.derivatives(X, order)
        poly = [np.tensordot(p, self.coeffs, axes=([1], [0])) for p in parts]
        if self.guillemin_weight == 0.0:
            return poly
        gp = guillemin_terms(self.polytope, X, order)
        return [self.guillemin_weight * g + p for g, p in zip(gp, poly)]

    def scaled(self, lam):
        return ParametrizedPotential(self.polytope, lam * self.coeffs, self.basis.exponents,
                                     guillemin_weight=lam * self.guillemin_weight)

    def add_affine(self, a0, a):
        have = {tuple(e) for e in self.basis.exponents}
        missing = [e for e in monomial_exponents(self.dim, 1) if tuple(e) not in have]
        exps = np.vstack([np.array(missing, dtype=int).reshape(-1, self.dim), self.basis.exponents])
        u = self.in_basis(exps)
        u.coeffs[u.basis.index((0,) * self.dim)] += float(a0)
        a = np.atleast_1d(np.asarray(a, dtype=float))
        for j in range(self.dim):
            e = [0] * self.dim
            e[j] = 1
            u.coeffs[u.basis.index(e)] += a[j]
        return u

    def is_admissible(self, scheme, margin=0.0) -> bool:
        """det D^2 u > 0 (and min eigenvalue >= margin) at every interior node."""
        H = self.hessian(scheme.interior_nodes)
        ev = np.linalg.eigvalsh(H)
        return bool(np.all(ev[:, 0] > 0) and np.all(ev[:, 0] >= margin))


class PLFunction(Potential):
    """max_k (c_k + <a_k, x>); ties in derivatives resolve to the lowest index."""

    def __init__(self, offsets, slopes):
        self.offsets = np.atleast_1d(np.asarray(offsets, dtype=float)).copy()
        self.slopes = np.atleast_2d(np.asarray(slopes, dtype=float)).copy()
        if len(self.offsets) != len(self.slopes):
            raise ValueError("one offset per affine piece")
        self.dim = self.slopes.shape[1]

    @classmethod
    def simple(cls, a0, a):
        """max{a0 + <a, x>, 0}."""
        a = np.atleast_1d(np.asarray(a, dtype=float))
        return cls([a0, 0.0], [a, np.zeros_like(a)])

    @property
    def pieces(self):
        return [AffineFunction(c, a) for c, a in zip(self.offsets, self.slopes)]

    @property
    def is_simple(self) -> bool:
        if len(self.offsets) != 2:
            return False
        zero = [(c == 0.0 and not np.any(a)) for c, a in zip(self.offsets, self.slopes)]
        return any(zero)

    def __repr__(self):
        return f"PLFunction(offsets={self.offsets.tolist()}, slopes={self.slopes.tolist()})"

    def _eval(self, X, order):
        V = self.offsets[None, :] + X @ self.slopes.T
        k = np.argmax(V, axis=1)
        out = [V[np.arange(len(X)), k]]
        if order >= 1:
            out.append(self.slopes[k])
        if order >= 2:
            out.append(np.zeros((len(X), self.dim, self.dim)))
        return out

    def scaled(self, lam):
        if lam <= 0:
            raise ValueError("PL functions scale by positive factors only")
        return PLFunction(lam * self.offsets, lam * self.slopes)

    def add_affine(self, a0, a):
        return PLFunction(self.offsets + a0, self.slopes + np.asarray(a, dtype=float)[None, :])


class AffineShift(Potential):
    """u + a for representations without a native affine slot."""

    def __init__(self, base: Potential, affine: AffineFunction):
        self.base = base
        self.affine = affine
        self.dim = base.dim
        self.polytope = getattr(base, "polytope", None)

    def _eval(self, X, order):
        return [b + a for b, a in zip(self.base._eval(X, order), self.affine._eval(X, order))]

    def scaled(self, lam):
        return AffineShift(self.base.scaled(lam), self.affine.scaled(lam))

    def add_affine(self, a0, a):
        return AffineShift(self.base, self.affine.add_affine(a0, a))


class MollifiedPotential(Potential):
    """u_h(x) = int rho(z) u(x - h z) dz on the shrunk polytope P_h."""

    def __init__(self, base: Potential, h: float, polytope: DelzantPolytope):
        self.base = base
        self.h = float(h)
        self.polytope = polytope
        self.dim = base.dim

    def _eval(self, X, order):
        dist = self.polytope.facet_distance(X)
        if np.any(dist < self.h * (1 - 1e-12)):
            k = int(np.argmin(dist))
            raise NonInteriorPoint(f"point {X[k]} is closer than h={self.h} to the boundary")
        Z, W = ball_rule(self.dim)
        N, n = X.shape
        pts = (X[:, None, :] - self.h * Z[None, :, :]).reshape(-1, n)
        kinked = isinstance(self.base, PLFunction)
        base = self.base.evaluate(pts, min(order, 1) if kinked else order)
        out = [base[0].reshape(N, len(W)) @ W]
        if order >= 1:
            G = base[1].reshape(N, len(W), n)
            out.append(np.einsum("nkj,k->nj", G, W))
        if order >= 2:
            if kinked:
                # the Hessian of a PL function is a measure on its creases, so move one
                # derivative onto the bump: d_i u_h = h^-1 int d_i rho(z) u_j(x - h z) dz
                q = 1.0 - np.sum(Z**2, axis=1)
                grad_g = -2.0 * Z / q[:, None] ** 2
                H = np.einsum("k,ki,nkj->nij", W, grad_g, G) / self.h
                out.append(0.5 * (H + H.transpose(0, 2, 1)))
            else:
                out.append(np.einsum("nkij,k->nij", base[2].reshape(N, len(W), n, n), W))
        return out

    def scaled(self, lam):
        return MollifiedPotential(self.base.scaled(lam), self.h, self.polytope)


def mollify(u: Potential, h: float, polytope: DelzantPolytope | None = None) -> MollifiedPotential:
    """Convolve u with the standard bump of radius h; the result lives on shrink(P, h)."""
    P = polytope if polytope is not None else getattr(u, "polytope", None)
    if P is None:
        raise ValueError("mollify needs a polytope for representations without one")
    if h <= 0:
        raise ValueError("mollifier radius must be positive")
    if h >= P.inradius:
        raise MollifierTooWide(f"h={h} is not below the inradius {P.inradius:.6g} of {P!r}")
    return MollifiedPotential(u, h, P)


def normalize(u: Potential, p=None) -> Potential:
    """u - (<Du(p), x - p> + u(p)): zero value and zero gradient at p.

    ``p`` defaults to the barycenter of the polytope carried by ``u``.
    """
    P = getattr(u, "polytope", None)
    if p is None:
        if P is None:
            raise ValueError("normalization point required for potentials without a polytope")
        p = moments(P).barycenter
    p = np.asarray(p, dtype=float)
    if P is not None and not P.contains(p):
        raise NonInteriorPoint(f"normalization point {p} is not interior to {P!r}")
    val, grad = u.evaluate(p, 1)
    return u.add_affine(float(grad @ p - val), -grad)


# ---------------------------------------------------------------------------
# Legendre transform of sampled convex functions

def _check_convex_1d(y, psi):
    slope = np.diff(psi) / np.diff(y)
    if np.any(np.diff(slope) <= 0):
        k = int(np.argmax(np.diff(slope) <= 0))
        raise NonConvexInput(f"sampled gradient is not increasing near y={y[k + 1]}")


def legendre(grid, values, out_grid=None):
    """Numerical Legendre transform u(x) = sup_y (<x, y> - psi(y)).

    Parameters
    ----------
    grid : 1D array of y samples, or a tuple (y1, y2) of axes for a 2D tensor grid
    values : psi on ``grid`` (shape (M,) or (M1, M2))
    out_grid : x samples in the same layout; defaults to a uniform grid spanning
        the sampled gradient range with the same number of points

    Returns
    -------
    (out_grid, u values)

    psi is interpolated by a cubic spline and the supremum is taken per output
    point with a bounded scalar/box-constrained maximization started at the
    best sample.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        return _legendre_1d(np.asarray(grid, dtype=float), values, out_grid)
    if values.ndim == 2:
        return _legendre_2d(grid, values, out_grid)
    raise ValueError("only 1D and 2D grids are supported")


def _legendre_1d(y, psi, x_out):
    _check_convex_1d(y, psi)
    spline = CubicSpline(y, psi)
    dspline = spline.derivative()
    if x_out is None:
        x_out = np.linspace(dspline(y[0]), dspline(y[-1]), len(y))
    x_out = np.asarray(x_out, dtype=float)
    u = np.empty(len(x_out))
    for k, x in enumerate(x_out):
        j = int(np.argmax(x * y - psi))
        lo, hi = y[max(j - 1, 0)], y[min(j + 1, len(y) - 1)]
        res = minimize_scalar(lambda t: spline(t) - x * t, bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-13})
        u[k] = max(-res.fun, x * y[j] - psi[j])
    return x_out, u


def _legendre_2d(axes, psi, out_axes):
    y1, y2 = (np.asarray(a, dtype=float) for a in axes)
    for row in psi:
        _check_convex_1d(y2, row)
    for col in psi.T:
        _check_convex_1d(y1, col)
    spl = RectBivariateSpline(y1, y2, psi, kx=3, ky=3, s=0)
    if out_axes is None:
        g1 = spl(y1, y2, dx=1, grid=True)
        g2 = spl(y1, y2, dy=1, grid=True)
        out_axes = (np.linspace(g1.min(), g1.max(), len(y1)), np.linspace(g2.min(), g2.max(), len(y2)))
    x1, x2 = (np.asarray(a, dtype=float) for a in out_axes)
    Y1, Y2 = np.meshgrid(y1, y2, indexing="ij")
    bounds = [(y1[0], y1[-1]), (y2[0], y2[-1])]
    u = np.empty((len(x1), len(x2)))
    for a, xa in enumerate(x1):
        for b, xb in enumerate(x2):
            obj = xa * Y1 + xb * Y2 - psi
            j = np.unravel_index(np.argmax(obj), obj.shape)

            def f(t):
                return float(spl(t[0], t[1], grid=False)) - xa * t[0] - xb * t[1]

            def jac(t):
                return np.array([float(spl(t[0], t[1], dx=1, grid=False)) - xa,
                                 float(spl(t[0], t[1], dy=1, grid=False)) - xb])

            res = minimize(f, np.array([y1[j[0]], y2[j[1]]]), jac=jac, method="L-BFGS-B",
                           bounds=bounds, options={"ftol": 1e-15, "gtol": 1e-12})
            u[a, b] = max(-res.fun, obj[j])
    return (x1, x2), u


def legendre_roundtrip(grid, values, margin=0.1):
    """Max |psi - L(L(psi))| on interior samples (``margin`` fraction trimmed per side)."""
    values = np.asarray(values, dtype=float)
    xg, u = legendre(grid, values)
    _, back = legendre(xg, u, out_grid=grid)
    if values.ndim == 1:
        M = len(values)
        k = max(1, int(math.ceil(margin * M)))
        return float(np.max(np.abs(back - values)[k:M - k]))
    k1 = max(1, int(math.ceil(margin * values.shape[0])))
    k2 = max(1, int(math.ceil(margin * values.shape[1])))
    return float(np.max(np.abs(back - values)[k1:-k1, k2:-k2]))


# ---------------------------------------------------------------------------
# JSON

def potential_to_dict(u: Potential) -> dict:
    if isinstance(u, GuilleminPotential):
        return {"kind": "guillemin", "coeffs": {}}
    if isinstance(u, ParametrizedPotential):
        return {"kind": "parametrized", "coeffs": {
            "guillemin_weight": u.guillemin_weight,
            "terms": [{"exponent": [int(v) for v in e], "coeff": float(c)}
                      for e, c in zip(u.basis.exponents, u.coeffs)]}}
    if isinstance(u, PLFunction):
        return {"kind": "pl", "coeffs": {"pieces": [
            {"a0": float(c), "a": [float(v) for v in a]} for c, a in zip(u.offsets, u.slopes)]}}
    if isinstance(u, AffineFunction):
        return {"kind": "affine", "coeffs": {"a0": u.a0, "a": [float(v) for v in u.a]}}
    raise TypeError(f"no JSON form for {type(u).__name__}")


def potential_from_dict(data: dict, polytope: DelzantPolytope | None = None) -> Potential:
    try:
        kind = data["kind"]
        coeffs = data.get("coeffs", {}) or {}
        if kind == "guillemin":
            if polytope is None:
                raise ValueError("guillemin potential needs a polytope")
            return GuilleminPotential(polytope)
        if kind == "parametrized":
            if polytope is None:
                raise ValueError("parametrized potential needs a polytope")
            terms = coeffs.get("terms", [])
            exps = np.array([t["exponent"] for t in terms], dtype=int).reshape(-1, polytope.dim)
            return ParametrizedPotential(polytope, [float(t["coeff"]) for t in terms], exps,
                                         guillemin_weight=float(coeffs.get("guillemin_weight", 1.0)))
        if kind == "pl":
            pieces = coeffs["pieces"]
            return PLFunction([p["a0"] for p in pieces], [p["a"] for p in pieces])
        if kind == "affine":
            return AffineFunction(coeffs["a0"], coeffs["a"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed potential JSON: {exc}") from exc
    raise ValueError(f"unknown potential kind {data.get('kind')!r}")
