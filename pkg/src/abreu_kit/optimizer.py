"""Minimization of F over the family u = u_P + sum_alpha c_alpha x^alpha.

F is convex in the coefficients (-log det is convex on positive definite
matrices and D^2u is affine in c), so a quasi-Newton descent with a
backtracking search converges from any admissible start.  Admissibility is
enforced a priori: a trial step is rejected unless the smallest Hessian
eigenvalue at every interior node stays above ``eig_margin``.  After each
accepted step the iterate is re-normalized at p, which fixes the affine gauge
F does not see.
"""
from __future__ import annotations

import csv
import io
import logging
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import NonConvexAtNode, StalledLineSearch, StartInadmissible, UnstableDirection
from .functional import ExtremalAffine, solve_extremal_affine
from .polytope import moments
from .potentials import GuilleminPotential, ParametrizedPotential, guillemin_terms, monomial_exponents
from .quadrature import QuadratureScheme, build_scheme, weighted_sum

logger = logging.getLogger(__name__)


@dataclass
class MinimizeConfig:
    degree: int = 6
    level: int = 3
    grad_tol: float = 1e-7
    max_iter: int = 500
    backtrack: float = 0.5
    eig_margin: float = 1e-9
    armijo: float = 1e-4
    min_step: float = 1e-14
    normalization_point: np.ndarray | None = None

    def __post_init__(self):
        for name in ("grad_tol", "eig_margin", "min_step"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not 0 < self.backtrack < 1:
            raise ValueError("backtrack factor must lie in (0, 1)")
        if self.degree < 2:
            raise ValueError("degree cap must be at least 2 (lower degrees are affine)")

    def to_dict(self):
        p = self.normalization_point
        return {"degree": self.degree, "level": self.level, "grad_tol": self.grad_tol,
                "max_iter": self.max_iter, "backtrack": self.backtrack,
                "eig_margin": self.eig_margin,
                "normalization_point": None if p is None else [float(v) for v in p]}


@dataclass
class MinimizeTrace:
    F: list = field(default_factory=list)
    grad_norm: list = field(default_factory=list)
    step: list = field(default_factory=list)
    boundary_integral: list = field(default_factory=list)
    interior_integral: list = field(default_factory=list)
    linear: list = field(default_factory=list)
    converged: bool = False
    unstable: bool = False

    @property
    def n_iter(self) -> int:
        return max(len(self.F) - 1, 0)

    def append(self, F, g, step, bnd, mass, L):
        self.F.append(float(F))
        self.grad_norm.append(float(g))
        self.step.append(float(step))
        self.boundary_integral.append(float(bnd))
        self.interior_integral.append(float(mass))
        self.linear.append(float(L))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iteration", "F", "grad_norm", "step", "boundary_integral", "interior_integral"])
        for k in range(len(self.F)):
            w.writerow([k] + [f"{v:.17g}" for v in (self.F[k], self.grad_norm[k], self.step[k],
                                                     self.boundary_integral[k], self.interior_integral[k])])
        return buf.getvalue()


class CoefficientProblem:
    """F and its coefficient gradient for a fixed basis, scheme and extremal function.

    Everything that does not depend on the coefficients (Guillemin Hessians,
    monomial Hessians and values at the nodes, L of each monomial) is
    evaluated once.
    """

    def __init__(self, polytope, exponents, scheme: QuadratureScheme, extremal: ExtremalAffine,
                 guillemin_weight=1.0):
        self.polytope = polytope
        self.scheme = scheme
        self.extremal = extremal
        self.template = ParametrizedPotential(polytope, None, exponents, guillemin_weight=guillemin_weight)
        basis = self.template.basis
        Xi, Xb = scheme.interior_nodes, scheme.boundary_nodes
        wi, wb = scheme.interior_weights, scheme.boundary_weights
        vi, _, Hi = basis.derivatives(Xi, 2)
        vb = basis.values(Xb)
        self.w = wi
        self.basis_hess = Hi
        self.active = ~basis.affine_mask
        s_i = extremal.s(Xi)
        self.basis_L = np.sum(wb[:, None] * vb, axis=0) - np.sum((wi * s_i)[:, None] * vi, axis=0)
        self.basis_bnd = np.sum(wb[:, None] * vb, axis=0)
        self.basis_mass = np.sum(wi[:, None] * vi, axis=0)
        gw = guillemin_weight
        if gw:
            gi = guillemin_terms(polytope, Xi, 2)
            gb = guillemin_terms(polytope, Xb, 0)[0]
            self.g_hess = gw * gi[2]
            self.g_bnd = gw * weighted_sum(gb, wb)
            self.g_mass = gw * weighted_sum(gi[0], wi)
            self.g_L = self.g_bnd - gw * weighted_sum(s_i * gi[0], wi)
        else:
            self.g_hess = np.zeros_like(Hi[:, 0])
            self.g_bnd = self.g_mass = self.g_L = 0.0

    def potential(self, c):
        return self.template.with_coeffs(c)

    def hessians(self, c):
        return self.g_hess + np.einsum("k,nkij->nij", c, self.basis_hess)

    def min_eigenvalue(self, c):
        return float(np.min(np.linalg.eigvalsh(self.hessians(c))[:, 0]))

    def F(self, c):
        ev = np.linalg.eigvalsh(self.hessians(c))
        if np.any(~(ev[:, 0] > 0)):
            k = int(np.argmax(~(ev[:, 0] > 0)))
            raise NonConvexAtNode(f"NonConvexAtNode at node {self.scheme.interior_nodes[k]}",
                                  node=self.scheme.interior_nodes[k], value=float(np.prod(ev[k])))
        entropy = -float(np.sum(self.w * np.sum(np.log(ev), axis=1)))
        return entropy + self.L(c)

    def L(self, c):
        return self.g_L + float(np.sum(c * self.basis_L))

    def gradient(self, c):
        Hinv = np.linalg.inv(self.hessians(c))
        tr = np.einsum("nij,nkji->nk", Hinv, self.basis_hess)
        return -np.sum(self.w[:, None] * tr, axis=0) + self.basis_L

    def monitors(self, c):
        """(int_dP u dsigma, int_P u dx)."""
        return self.g_bnd + float(np.sum(c * self.basis_bnd)), self.g_mass + float(np.sum(c * self.basis_mass))

    def normalize(self, c, p):
        u = self.potential(c)
        val, grad = u.evaluate(p, 1)
        c = c.copy()
        basis = self.template.basis
        c[basis.index((0,) * u.dim)] += float(grad @ p - val)
        for j in range(u.dim):
            e = [0] * u.dim
            e[j] = 1
            c[basis.index(e)] -= grad[j]
        return c


def gradient_F(u, scheme: QuadratureScheme, extremal: ExtremalAffine) -> np.ndarray:
    """g_alpha = first variation of F at u along each basis monomial of u."""
    if isinstance(u, GuilleminPotential):
        u = ParametrizedPotential(u.polytope, degree=1)
    prob = CoefficientProblem(u.polytope, u.basis.exponents, scheme, extremal, u.guillemin_weight)
    prob.F(u.coeffs)  # admissibility check
    return prob.gradient(u.coeffs)


def minimize(start: ParametrizedPotential, config: MinimizeConfig | None = None,
             scheme: QuadratureScheme | None = None, extremal: ExtremalAffine | None = None):
    """Minimize F over the coefficients of ``start`` (extended to the degree cap).

    Returns (minimizer, MinimizeTrace).
    """
    config = config or MinimizeConfig()
    P = start.polytope
    if isinstance(start, GuilleminPotential):
        start = ParametrizedPotential(P, degree=config.degree)
    scheme = scheme or build_scheme(P, config.level)
    extremal = extremal or solve_extremal_affine(moments(P))
    p = moments(P).barycenter if config.normalization_point is None else np.asarray(config.normalization_point, float)

    exps = monomial_exponents(P.dim, config.degree)
    have = {tuple(e) for e in exps}
    extra = [e for e in start.basis.exponents if tuple(e) not in have]
    if extra:
        exps = np.vstack([exps, np.array(extra, dtype=int)])
    u0 = start.in_basis(exps)
    prob = CoefficientProblem(P, exps, scheme, extremal, u0.guillemin_weight)
    act = prob.active

    c = u0.coeffs.copy()
    if prob.min_eigenvalue(c) < config.eig_margin:
        raise StartInadmissible(f"start has Hessian eigenvalue {prob.min_eigenvalue(c):.3g} "
                                f"< margin {config.eig_margin:g} at some node")
    c = prob.normalize(c, p)
    F = prob.F(c)
    g = prob.gradient(c)[act]
    trace = MinimizeTrace()
    bnd0, mass0 = prob.monitors(c)
    trace.append(F, np.linalg.norm(g), 0.0, bnd0, mass0, prob.L(c))
    Hinv = np.eye(int(act.sum()))
    first_step = True

    for it in range(config.max_iter):
        gnorm = np.linalg.norm(g)
        if gnorm < config.grad_tol:
            trace.converged = True
            break
        d = -Hinv @ g
        if not g @ d < 0:
            Hinv = np.eye(len(g))
            d = -g
        alpha = min(1.0, 1.0 / gnorm) if first_step else 1.0
        while True:
            trial = c.copy()
            trial[act] += alpha * d
            if prob.min_eigenvalue(trial) >= config.eig_margin:
                F_trial = prob.F(trial)
                if F_trial <= F + config.armijo * alpha * (g @ d) and F_trial < F:
                    break
            alpha *= config.backtrack
            if alpha < config.min_step:
                if gnorm < 10 * config.grad_tol:
                    # rounding floor of F reached just above tolerance
                    trace.converged = True
                    return prob.potential(c), trace
                raise StalledLineSearch(
                    f"no admissible decreasing step at iteration {it} (|g| = {gnorm:.3g}, F = {F:.17g})")
        first_step = False
        c_new = prob.normalize(trial, p)
        g_new = prob.gradient(c_new)[act]
        s_vec = c_new[act] - c[act]
        y_vec = g_new - g
        sy = s_vec @ y_vec
        if sy > 1e-300:
            rho = 1.0 / sy
            if it == 0:
                Hinv = np.eye(len(g)) * (sy / (y_vec @ y_vec))
            V = np.eye(len(g)) - rho * np.outer(s_vec, y_vec)
            Hinv = V @ Hinv @ V.T + rho * np.outer(s_vec, s_vec)
        c, F, g = c_new, F_trial, g_new
        bnd, mass = prob.monitors(c)
        L = prob.L(c)
        trace.append(F, np.linalg.norm(g), alpha, bnd, mass, L)
        logger.debug("iter %d: F=%.15g |g|=%.3e step=%.3e", it + 1, F, np.linalg.norm(g), alpha)
        if (not trace.unstable and L <= 1e-8 * (1.0 + abs(trace.linear[0]))
                and abs(mass) > 10.0 * max(abs(mass0), 1e-12)):
            trace.unstable = True
            warnings.warn(UnstableDirection(
                f"UnstableDirection: L(u_k) = {L:.3g} while int u_k grew to {mass:.3g}"), stacklevel=2)
    else:
        trace.converged = bool(np.linalg.norm(g) < config.grad_tol)
    return prob.potential(c), trace
