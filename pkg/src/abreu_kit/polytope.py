"""Delzant polytopes P = {x : <l_i, x> < lambda_i}.

Supports are kept as exact :class:`~fractions.Fraction` values so vertices,
volumes and the low-order moments feeding the extremal affine function are
computed in rational arithmetic.  Only n <= 3 is supported.
"""
from __future__ import annotations

import json
import logging
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy.optimize import linprog

from . import _geometry as geo
from .errors import (
    EmptyInterior,
    NonDelzantVertex,
    RedundantFacet,
    UnboundedPolytope,
)

logger = logging.getLogger(__name__)

MAX_DIM = 3


def as_fraction(value) -> Fraction:
    """Exact rational from an int, Fraction, ``[num, den]`` pair or decimal float."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (list, tuple)):
        num, den = value
        return Fraction(int(num), int(den))
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value)
    # decimal meaning of the shortest repr, e.g. 0.1 -> 1/10
    return Fraction(repr(float(value)))


@dataclass(frozen=True)
class Facet:
    normal: tuple
    support: Fraction

    @property
    def norm(self) -> float:
        return math.sqrt(sum(c * c for c in self.normal))


class DelzantPolytope:
    """Bounded polytope with integer facet normals and rational supports.

    Parameters
    ----------
    normals : sequence of integer vectors l_i
    supports : sequence of supports lambda_i (int, Fraction, float or [num, den])
    name : optional label (presets carry their preset id)
    """

    def __init__(self, normals, supports, name=None):
        normals = [tuple(int(c) for c in l) for l in normals]
        if not normals:
            raise ValueError("facet list is empty")
        dim = len(normals[0])
        if dim < 1 or any(len(l) != dim for l in normals):
            raise ValueError("facet normals must share one positive length")
        if dim > MAX_DIM:
            raise ValueError(f"dimension {dim} > {MAX_DIM} is not supported")
        if len(supports) != len(normals):
            raise ValueError("need one support per facet")
        if any(all(c == 0 for c in l) for l in normals):
            raise ValueError("zero facet normal")
        self.dim = dim
        self.facets = tuple(Facet(l, as_fraction(s)) for l, s in zip(normals, supports))
        self.name = name

    def __repr__(self):
        tag = f" {self.name!r}" if self.name else ""
        return f"<DelzantPolytope{tag} dim={self.dim} facets={len(self.facets)}>"

    def __eq__(self, other):
        return isinstance(other, DelzantPolytope) and self.facets == other.facets

    def __hash__(self):
        return hash(self.facets)

    @property
    def n_facets(self) -> int:
        return len(self.facets)

    @cached_property
    def normals(self) -> np.ndarray:
        return np.array([f.normal for f in self.facets], dtype=float)

    @cached_property
    def supports(self) -> np.ndarray:
        return np.array([float(f.support) for f in self.facets])

    @cached_property
    def normal_norms(self) -> np.ndarray:
        return np.linalg.norm(self.normals, axis=1)

    @cached_property
    def region(self) -> geo.Region:
        A = [list(f.normal) for f in self.facets]
        b = [f.support for f in self.facets]
        return geo.enumerate_region(A, b, exact=True)

    @cached_property
    def vertices(self) -> np.ndarray:
        return np.array([[float(c) for c in v] for v in self.region.vertices]).reshape(-1, self.dim)

    @property
    def exact_vertices(self):
        return list(self.region.vertices)

    def ell(self, x) -> np.ndarray:
        """Affine distances l_i(x) = lambda_i - <l_i, x>; shape (..., d)."""
        x = np.asarray(x, dtype=float)
        return self.supports - x @ self.normals.T

    def contains(self, x, strict=True) -> np.ndarray:
        ell = self.ell(x)
        return np.all(ell > 0, axis=-1) if strict else np.all(ell >= 0, axis=-1)

    def facet_distance(self, x) -> np.ndarray:
        """Euclidean distance from x to the nearest facet hyperplane."""
        return np.min(self.ell(x) / self.normal_norms, axis=-1)

    @cached_property
    def diameter(self) -> float:
        V = self.vertices
        return float(np.max(np.linalg.norm(V[:, None, :] - V[None, :, :], axis=-1)))

    @cached_property
    def chebyshev(self):
        """(center, inradius) of the largest inscribed ball."""
        n, d = self.dim, self.n_facets
        c = np.zeros(n + 1)
        c[-1] = -1.0
        A = np.hstack([self.normals, self.normal_norms[:, None]])
        res = linprog(c, A_ub=A, b_ub=self.supports, bounds=[(None, None)] * n + [(None, None)],
                      method="highs")
        if res.status == 3:
            raise UnboundedPolytope("inscribed-ball problem is unbounded")
        if res.status != 0:
            raise EmptyInterior("polytope has no interior")
        return res.x[:n], float(res.x[-1])

    @property
    def inradius(self) -> float:
        return self.chebyshev[1]

    @cached_property
    def barycenter(self) -> np.ndarray:
        return moments(self).barycenter

    def to_dict(self) -> dict:
        return {"dim": self.dim, "facets": [
            {"normal": list(f.normal), "support": _support_to_json(f.support)} for f in self.facets]}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def _support_to_json(s: Fraction):
    if s.denominator == 1:
        return int(s.numerator)
    return [str(s.numerator), str(s.denominator)]


def from_dict(data: dict, name=None) -> DelzantPolytope:
    try:
        facets = data["facets"]
        normals = [f["normal"] for f in facets]
        supports = [f["support"] for f in facets]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed polytope JSON: {exc}") from exc
    P = DelzantPolytope(normals, supports, name=name)
    if "dim" in data and int(data["dim"]) != P.dim:
        raise ValueError(f"dim field {data['dim']} disagrees with normals of length {P.dim}")
    return P


def from_json(text: str, name=None) -> DelzantPolytope:
    return from_dict(json.loads(text), name=name)


_PRESETS = {
    "interval": ([(1,), (-1,)], [1, 1]),
    "square": ([(1, 0), (-1, 0), (0, 1), (0, -1)], [1, 1, 1, 1]),
    # standard simplex translated to its barycenter
    "cp2-simplex": ([(-1, 0), (0, -1), (1, 1)], [Fraction(1, 3)] * 3),
    # trapezoid 0<x, 0<y<1, x+y<2 shifted by (1/2, 1/2) so 0 is interior
    "hirzebruch-1": ([(-1, 0), (0, -1), (0, 1), (1, 1)],
                     [Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1)]),
}

PRESET_NAMES = tuple(_PRESETS)


def preset(name: str) -> DelzantPolytope:
    """Built-in polytope by id; ``$ABREU_KIT_PRESETS/<name>.json`` takes precedence."""
    env_dir = os.environ.get("ABREU_KIT_PRESETS")
    if env_dir:
        path = Path(env_dir) / f"{name}.json"
        if path.is_file():
            return from_json(path.read_text(), name=name)
    try:
        normals, supports = _PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(_PRESETS)}") from None
    return DelzantPolytope(normals, supports, name=name)


def standard_simplex(n=2) -> DelzantPolytope:
    """{x_i > 0, sum x_i < 1}."""
    normals = [tuple(-1 if j == i else 0 for j in range(n)) for i in range(n)] + [(1,) * n]
    return DelzantPolytope(normals, [0] * n + [1], name=f"standard-simplex-{n}")


def box(lower, upper) -> DelzantPolytope:
    """Axis-aligned box prod (lower_j, upper_j)."""
    n = len(lower)
    normals, supports = [], []
    for j in range(n):
        e = tuple(1 if k == j else 0 for k in range(n))
        normals += [e, tuple(-c for c in e)]
        supports += [as_fraction(upper[j]), -as_fraction(lower[j])]
    return DelzantPolytope(normals, supports)


@dataclass(frozen=True)
class ValidationReport:
    vertices: np.ndarray
    determinants: tuple  # lattice-basis determinant per vertex
    vertex_facets: tuple  # facet indices meeting at each vertex
    inradius: float

    @property
    def ok(self) -> bool:
        return all(abs(d) == 1 for d in self.determinants)


def _is_bounded(P: DelzantPolytope) -> bool:
    # bounded iff every +-e_j is a nonnegative combination of the normals
    L = P.normals.T
    for j in range(P.dim):
        for sign in (1.0, -1.0):
            rhs = np.zeros(P.dim)
            rhs[j] = sign
            res = linprog(np.zeros(P.n_facets), A_eq=L, b_eq=rhs,
                          bounds=[(0, None)] * P.n_facets, method="highs")
            if res.status != 0:
                return False
    return True


def validate_delzant(P: DelzantPolytope) -> ValidationReport:
    """Check boundedness, nonempty interior, irredundancy and the Delzant condition."""
    if not _is_bounded(P):
        raise UnboundedPolytope(f"{P!r}: facet normals do not positively span R^{P.dim}")
    if P.inradius <= 1e-12:
        raise EmptyInterior(f"{P!r}: interior is empty (inradius {P.inradius:.3g})")
    region = P.region
    for i in range(P.n_facets):
        ids = region.face_ids(i)
        if not ids or region.affine_dim(ids) != P.dim - 1:
            raise RedundantFacet(f"facet {i} (normal {P.facets[i].normal}) is inactive")
    dets, incid = [], []
    for v, tight in zip(region.vertices, region.tight):
        idx = tuple(sorted(tight))
        point = [float(c) for c in v]
        if len(idx) != P.dim:
            raise NonDelzantVertex(
                f"NonDelzantVertex: vertex {point} lies on {len(idx)} facets (polytope not simple)",
                vertex=point)
        d = int(geo.det([list(P.facets[i].normal) for i in idx]))
        if abs(d) != 1:
            raise NonDelzantVertex(
                f"NonDelzantVertex: normals {[P.facets[i].normal for i in idx]} at vertex {point} "
                f"have determinant {d}", vertex=point, determinant=d)
        dets.append(d)
        incid.append(idx)
    return ValidationReport(P.vertices, tuple(dets), tuple(incid), P.inradius)


def shrink(P: DelzantPolytope, delta) -> DelzantPolytope:
    """P_delta: every facet moved inward by Euclidean distance delta.

    Supports become lambda_i - |l_i| delta, evaluated in rationals (|l_i| is
    rounded to binary64 when irrational) so repeated shrinks compose exactly.
    """
    delta = as_fraction(delta)
    if delta < 0:
        raise ValueError("shrink distance must be nonnegative")
    if delta == 0:
        return P
    supports = [f.support - _exact_norm(f.normal) * delta for f in P.facets]
    Q = DelzantPolytope([f.normal for f in P.facets], supports)
    if P.inradius <= float(delta) + 1e-14 or Q.region.is_empty or Q.inradius <= 1e-12:
        raise EmptyInterior(f"shrinking {P!r} by {float(delta)} leaves no interior "
                            f"(inradius {P.inradius:.6g})")
    return Q


def _exact_norm(normal) -> Fraction:
    sq = sum(c * c for c in normal)
    r = math.isqrt(sq)
    return Fraction(r) if r * r == sq else Fraction(math.sqrt(sq))


@dataclass(frozen=True)
class MomentTable:
    """Closed-form moments of P (Lebesgue inside, sigma on the boundary)."""

    volume: float
    first: np.ndarray  # int_P x_j dx
    second: np.ndarray  # int_P x_j x_k dx
    boundary_mass: float  # int_dP dsigma
    boundary_first: np.ndarray  # int_dP x_j dsigma
    facet_mass: np.ndarray  # per-facet sigma mass
    facet_first: np.ndarray  # per-facet first moments, shape (d, n)
    exact: dict

    @property
    def dim(self) -> int:
        return len(self.first)

    @property
    def barycenter(self) -> np.ndarray:
        return self.first / self.volume

    @property
    def covariance(self) -> np.ndarray:
        c = self.barycenter
        return self.second / self.volume - np.outer(c, c)


def moments(P: DelzantPolytope) -> MomentTable:
    """Exact moments via a recursive centroid fan and simplex moment formulas."""
    normals = [tuple(Fraction(c) for c in f.normal) for f in P.facets]
    norm_sqs = [sum(c * c for c in l) for l in normals]
    vol, first, second, bmass, bfirst = geo.region_moments(P.region, normals, norm_sqs, P.n_facets)
    if vol == 0:
        raise EmptyInterior(f"{P!r} has zero volume")
    n = P.dim
    exact = {
        "volume": vol,
        "first": list(first),
        "second": [list(r) for r in second],
        "boundary_mass": sum(bmass),
        "boundary_first": [sum(bf[j] for bf in bfirst) for j in range(n)],
    }
    return MomentTable(
        volume=float(vol),
        first=np.array([float(v) for v in first]),
        second=np.array([[float(v) for v in row] for row in second]),
        boundary_mass=float(exact["boundary_mass"]),
        boundary_first=np.array([float(v) for v in exact["boundary_first"]]),
        facet_mass=np.array([float(m) for m in bmass]),
        facet_first=np.array([[float(v) for v in bf] for bf in bfirst]),
        exact=exact,
    )


def translate(P: DelzantPolytope, offset) -> DelzantPolytope:
    """P - offset: supports become lambda_i - <l_i, offset>."""
    offset = [as_fraction(c) for c in offset]
    supports = [f.support - sum(l * c for l, c in zip(f.normal, offset)) for f in P.facets]
    return DelzantPolytope([f.normal for f in P.facets], supports)


def barycentric_translate(P: DelzantPolytope):
    """Translate P so its barycenter is the origin; returns (P', offset)."""
    ex = moments(P).exact
    offset = [c / ex["volume"] for c in ex["first"]]
    Q = translate(P, offset)
    Q.name = P.name
    return Q, np.array([float(c) for c in offset])


def facet_density(P: DelzantPolytope, i: int, x) -> np.ndarray:
    """Pointwise boundary density lambda_i^{-1} <nu, x> on facet i (needs lambda_i != 0)."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    nu = P.normals[i] / P.normal_norms[i]
    return (x @ nu) / P.supports[i]


@dataclass(frozen=True, eq=False)
class BoundaryMeasure:
    """d sigma = rho_i d sigma_0 on facet i, with constant rho_i = 1/|l_i|."""

    polytope: DelzantPolytope
    density: np.ndarray

    def pointwise(self, i: int, x) -> np.ndarray:
        return facet_density(self.polytope, i, x)


def boundary_measure(P: DelzantPolytope) -> BoundaryMeasure:
    return BoundaryMeasure(P, 1.0 / P.normal_norms)


def clipped_moments(P: DelzantPolytope, halfspaces):
    """Moments of P cut by extra half-spaces g0 + <g, x> >= 0 (binary64, closed form).

    Returns (volume, first, second, facet_mass, facet_first) where the facet
    quantities are sigma-moments of the pieces of the original facets of P
    that survive the cut.
    """
    A = [list(map(float, f.normal)) for f in P.facets]
    b = [float(f.support) for f in P.facets]
    for g0, g in halfspaces:
        A.append([-float(c) for c in np.atleast_1d(g)])
        b.append(float(g0))
    region = geo.enumerate_region(A, b, exact=False)
    normals = [tuple(map(float, f.normal)) for f in P.facets]
    norm_sqs = [float(sum(c * c for c in f.normal)) for f in P.facets]
    vol, first, second, bmass, bfirst = geo.region_moments(region, normals, norm_sqs, P.n_facets)
    return (float(vol), np.array(first, dtype=float), np.array(second, dtype=float),
            np.array(bmass, dtype=float), np.array(bfirst, dtype=float).reshape(P.n_facets, P.dim))
