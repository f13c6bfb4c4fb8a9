"""The functional F(u) = -int_P log det D^2u dx + L(u) and its linear part.

L(u) = int_dP u dsigma - int_P s u dx, where s = Rbar + theta is the unique
affine function making L vanish on all affine functions.  All values are in
F-units; the manifold-side prefactor 2^n n! (2 pi)^n / V relating F to the
modified K-energy is never applied.
"""
from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass

import numpy as np

from .errors import NonConvexAtNode, NonpositiveLinearPart, SingularMomentSystem
from .polytope import DelzantPolytope, MomentTable, clipped_moments, moments
from .potentials import AffineFunction, PLFunction, Potential
from .quadrature import QuadratureScheme, weighted_sum

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExtremalAffine:
    """s(x) = Rbar + theta(x) with int_P theta dx = 0."""

    s: AffineFunction
    rbar: float
    theta: AffineFunction
    moments: MomentTable

    def __call__(self, x):
        return self.s(x)

    @property
    def is_constant(self) -> bool:
        return bool(np.all(np.abs(self.s.a) <= 1e-12 * max(1.0, abs(self.rbar))))

    def to_dict(self) -> dict:
        return {"s": {"a0": self.s.a0, "a": [float(v) for v in self.s.a]},
                "rbar": self.rbar,
                "theta": {"a0": self.theta.a0, "a": [float(v) for v in self.theta.a]}}


def solve_extremal_affine(mt: MomentTable | DelzantPolytope) -> ExtremalAffine:
    """Solve [[Vol, m^T], [m, M]] (a0, a) = (int_dP dsigma, int_dP x dsigma).

    These are the conditions L(1) = 0 and L(x_j) = 0.
    """
    if isinstance(mt, DelzantPolytope):
        mt = moments(mt)
    n = mt.dim
    G = np.empty((n + 1, n + 1))
    G[0, 0] = mt.volume
    G[0, 1:] = G[1:, 0] = mt.first
    G[1:, 1:] = mt.second
    rhs = np.concatenate([[mt.boundary_mass], mt.boundary_first])
    try:
        np.linalg.cholesky(G)
        coef = np.linalg.solve(G, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularMomentSystem(f"moment system is not positive definite: {exc}") from exc
    if np.linalg.cond(G) > 1e12:
        raise SingularMomentSystem(f"moment system is ill-conditioned (cond {np.linalg.cond(G):.3g})")
    s = AffineFunction(coef[0], coef[1:])
    rbar = mt.boundary_mass / mt.volume
    theta = AffineFunction(coef[0] - rbar, coef[1:])
    return ExtremalAffine(s=s, rbar=float(rbar), theta=theta, moments=mt)


@dataclass(frozen=True)
class FunctionalReport:
    entropy: float  # -int_P log det D^2u dx
    boundary: float  # int_dP u dsigma
    interior: float  # int_P s u dx
    linear: float  # L = boundary - interior
    F: float  # entropy + linear
    optimal_scaling: float | None  # n Vol / L when L > 0
    mass: float  # int_P u dx

    def to_dict(self) -> dict:
        return {"F": self.F, "entropy": self.entropy, "boundary": self.boundary,
                "interior": self.interior, "L": self.linear,
                "optimal_scaling": self.optimal_scaling, "integral_u": self.mass}


def _is_exact_kind(u) -> bool:
    return isinstance(u, (AffineFunction, PLFunction))


def _exact_linear_part(u, P: DelzantPolytope, extremal: ExtremalAffine):
    """(int_dP u dsigma, int_P s u dx, int_P u dx) for affine or PL u by polytope clipping."""
    s0, sg = extremal.s.a0, extremal.s.a
    if isinstance(u, AffineFunction):
        pieces = [(u.a0, u.a)]
    else:
        pieces = _distinct_pieces(u)
    mt = extremal.moments
    bnd = inner = mass = 0.0
    for k, (c, a) in enumerate(pieces):
        if len(pieces) == 1:
            vol, first, second = mt.volume, mt.first, mt.second
            fmass, ffirst = mt.facet_mass, mt.facet_first
        else:
            cuts = [(c - cj, a - aj) for j, (cj, aj) in enumerate(pieces) if j != k]
            vol, first, second, fmass, ffirst = clipped_moments(P, cuts)
        bnd += c * fmass.sum() + a @ ffirst.sum(axis=0)
        inner += s0 * c * vol + s0 * (a @ first) + c * (sg @ first) + sg @ second @ a
        mass += c * vol + a @ first
    return float(bnd), float(inner), float(mass)


def _distinct_pieces(f: PLFunction):
    out = []
    for c, a in zip(f.offsets, f.slopes):
        if not any(c == c2 and np.array_equal(a, a2) for c2, a2 in out):
            out.append((float(c), np.asarray(a, dtype=float)))
    return out


def _quadrature_linear_part(u, scheme: QuadratureScheme, extremal: ExtremalAffine):
    ub = u(scheme.boundary_nodes)
    ui = u(scheme.interior_nodes)
    si = extremal.s(scheme.interior_nodes)
    bnd = weighted_sum(ub, scheme.boundary_weights, scheme.boundary_nodes)
    inner = weighted_sum(si * ui, scheme.interior_weights, scheme.interior_nodes)
    mass = weighted_sum(ui, scheme.interior_weights, scheme.interior_nodes)
    return bnd, inner, mass


def linear_parts(u, scheme: QuadratureScheme, extremal: ExtremalAffine):
    """(boundary term, interior term, int_P u dx); exact for affine/PL, quadrature otherwise."""
    if _is_exact_kind(u):
        return _exact_linear_part(u, scheme.polytope, extremal)
    return _quadrature_linear_part(u, scheme, extremal)


def eval_L(u, scheme: QuadratureScheme, extremal: ExtremalAffine) -> float:
    """L(u) = int_dP u dsigma - int_P s u dx."""
    bnd, inner, _ = linear_parts(u, scheme, extremal)
    return bnd - inner


def _checked_hessians(u, scheme):
    H = u.hessian(scheme.interior_nodes)
    ev = np.linalg.eigvalsh(H)
    bad = ~(ev[:, 0] > 0)
    if bad.any():
        k = int(np.argmax(bad))
        d = float(np.prod(ev[k]))
        raise NonConvexAtNode(
            f"NonConvexAtNode: D^2u is not positive definite at node {scheme.interior_nodes[k]} "
            f"(det {d:.6g}, smallest eigenvalue {ev[k, 0]:.6g})",
            node=scheme.interior_nodes[k], value=d)
    return H, ev


def eval_F(u: Potential, scheme: QuadratureScheme, extremal: ExtremalAffine) -> FunctionalReport:
    """Full report of F(u) on the given scheme.

    Raises NonConvexAtNode when D^2u fails to be positive definite at an
    interior node (F = +inf there).
    """
    if _is_exact_kind(u):
        raise NonConvexAtNode("NonConvexAtNode: D^2u vanishes a.e. for affine/PL u (F = +inf)",
                              node=scheme.interior_nodes[0], value=0.0)
    H, ev = _checked_hessians(u, scheme)
    logdet = np.sum(np.log(ev), axis=1)
    entropy = -weighted_sum(logdet, scheme.interior_weights, scheme.interior_nodes)
    bnd, inner, mass = linear_parts(u, scheme, extremal)
    L = bnd - inner
    n, vol = scheme.polytope.dim, extremal.moments.volume
    return FunctionalReport(entropy=entropy, boundary=bnd, interior=inner, linear=L,
                            F=entropy + L, optimal_scaling=(n * vol / L) if L > 0 else None,
                            mass=mass)


def first_variation(u: Potential, v: Potential, scheme: QuadratureScheme,
                    extremal: ExtremalAffine) -> float:
    """d/dt F(u + t v) at t = 0:  -int_P tr((D^2u)^-1 D^2v) dx + L(v)."""
    H, _ = _checked_hessians(u, scheme)
    Hv = v.hessian(scheme.interior_nodes)
    tr = np.einsum("nij,nji->n", np.linalg.inv(H), Hv)
    return -weighted_sum(tr, scheme.interior_weights, scheme.interior_nodes) + eval_L(v, scheme, extremal)


def optimal_scaling(u: Potential, scheme: QuadratureScheme, extremal: ExtremalAffine) -> float:
    """The minimizer lam* = n Vol(P) / L(u) of lam -> F(lam u).

    F(lam u) = F(u) - n Vol log(lam) + (lam - 1) L(u), so a nonpositive L(u)
    makes F unbounded below along the ray.
    """
    L = eval_L(u, scheme, extremal)
    if not L > 0:
        raise NonpositiveLinearPart(f"NonpositiveLinearPart: L(u) = {L:.6g}; F(lam u) -> -inf as lam -> inf")
    return scheme.polytope.dim * extremal.moments.volume / L


def scaling_identity_residual(u, lam, scheme, extremal) -> float:
    """F(lam u) - F(u) + n Vol log(lam) - (lam - 1) L(u); zero up to rounding."""
    r1 = eval_F(u, scheme, extremal)
    r2 = eval_F(u.scaled(lam), scheme, extremal)
    n, vol = scheme.polytope.dim, extremal.moments.volume
    return r2.F - r1.F + n * vol * np.log(lam) - (lam - 1.0) * r1.linear


def coercivity_probe(family, scheme: QuadratureScheme, extremal: ExtremalAffine):
    """Rows (int_P u dx, F(u)) for each potential of ``family``."""
    rows = []
    for u in family:
        rep = eval_F(u, scheme, extremal)
        rows.append((rep.mass, rep.F))
    return rows


def probe_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["integral_u", "F"])
    for m, F in rows:
        w.writerow([f"{m:.17g}", f"{F:.17g}"])
    return buf.getvalue()
