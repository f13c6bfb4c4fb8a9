"""Vertex enumeration, face recursion and closed-form simplex moments.

The routines here are written against plain Python scalars so the same code
runs on :class:`fractions.Fraction` (exact moments of Delzant polytopes with
rational supports) and on floats (regions clipped by a PL crease).  Only
dimensions up to 3 are supported.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from dataclasses import dataclass, field


def det(rows):
    """Determinant by cofactor expansion (n <= 3 in practice)."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in rows[1:]]
        term = rows[0][j] * det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def solve(A, b, tol=0.0):
    """Gaussian elimination with partial pivoting; ``None`` if singular."""
    n = len(A)
    M = [list(A[i]) + [b[i]] for i in range(n)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(M[r][col]))
        if abs(M[piv][col]) <= tol:
            return None
        M[col], M[piv] = M[piv], M[col]
        for r in range(col + 1, n):
            f = M[r][col] / M[col][col]
            if f:
                M[r] = [M[r][k] - f * M[col][k] for k in range(n + 1)]
    x = [0] * n
    for i in range(n - 1, -1, -1):
        acc = M[i][n]
        for k in range(i + 1, n):
            acc = acc - M[i][k] * x[k]
        x[i] = acc / M[i][i]
    return x


def rank(rows, tol=0.0):
    """Row rank by elimination."""
    M = [list(r) for r in rows]
    if not M:
        return 0
    ncol = len(M[0])
    r = 0
    for col in range(ncol):
        if r == len(M):
            break
        piv = max(range(r, len(M)), key=lambda i: abs(M[i][col]))
        if abs(M[piv][col]) <= tol:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, len(M)):
            f = M[i][col] / M[r][col]
            if f:
                M[i] = [M[i][k] - f * M[r][k] for k in range(ncol)]
        r += 1
    return r


def dot(a, b):
    acc = 0
    for x, y in zip(a, b):
        acc = acc + x * y
    return acc


def sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def mean(points):
    k = len(points)
    return tuple(sum(c) / k for c in zip(*points))


@dataclass
class Region:
    """A bounded polyhedron {x : A x <= b} with its vertex/constraint incidence."""

    dim: int
    vertices: list = field(default_factory=list)
    tight: list = field(default_factory=list)  # frozenset of constraint ids per vertex
    tol: float = 0.0

    @property
    def is_empty(self):
        return not self.vertices

    def face_ids(self, constraint):
        return [v for v, t in enumerate(self.tight) if constraint in t]

    def affine_dim(self, ids):
        if not ids:
            return -1
        p0 = self.vertices[ids[0]]
        return rank([sub(self.vertices[i], p0) for i in ids[1:]], self.tol)

    def subfaces(self, ids, k):
        """Faces of dimension k-1 inside the k-face spanned by ``ids``."""
        seen = []
        ncon = max((max(t) for t in self.tight if t), default=-1) + 1
        for j in range(ncon):
            sub_ids = [v for v in ids if j in self.tight[v]]
            if len(sub_ids) < k or frozenset(sub_ids) in seen:
                continue
            if self.affine_dim(sub_ids) == k - 1:
                seen.append(frozenset(sub_ids))
        return [sorted(s) for s in seen]

    def simplices(self, ids, k):
        """Triangulate the k-face spanned by ``ids`` by recursive coning from centroids."""
        pts = [self.vertices[i] for i in ids]
        if k == 0:
            return [(pts[0],)]
        if len(ids) == k + 1:
            return [tuple(pts)]
        apex = mean(pts)
        out = []
        for sub_ids in self.subfaces(ids, k):
            for s in self.simplices(sub_ids, k - 1):
                out.append((apex,) + s)
        return out

    def cone_tree(self, ids, k):
        """Nested (apex, [children]) structure used by the graded quadrature.

        A 0-face is returned as its vertex; a k-face as (centroid, list of
        subface trees).
        """
        pts = [self.vertices[i] for i in ids]
        if k == 0:
            return pts[0]
        return (mean(pts), [self.cone_tree(s, k - 1) for s in self.subfaces(ids, k)])


def enumerate_region(A, b, exact, tol=1e-10):
    """Vertices of {x : A x <= b} by brute force over n-subsets of constraints."""
    m = len(A)
    n = len(A[0])
    if exact:
        A = [[Fraction(v) for v in row] for row in A]
        b = [Fraction(v) for v in b]
        tol = 0
    else:
        A = [[float(v) for v in row] for row in A]
        b = [float(v) for v in b]
        tol = tol * max(1.0, max(abs(v) for v in b))
    verts, tight = [], []
    for combo in itertools.combinations(range(m), n):
        x = solve([A[i] for i in combo], [b[i] for i in combo], 0 if exact else 1e-12)
        if x is None:
            continue
        slack = [b[i] - dot(A[i], x) for i in range(m)]
        if min(slack) < -tol:
            continue
        x = tuple(x)
        dup = None
        for vi, v in enumerate(verts):
            if (exact and v == x) or (not exact and max(abs(p - q) for p, q in zip(v, x)) <= tol):
                dup = vi
                break
        if dup is None:
            verts.append(x)
            tight.append(frozenset(i for i in range(m) if abs(slack[i]) <= tol))
    region = Region(dim=n, vertices=verts, tight=tight, tol=tol)
    return region


def simplex_moments(pts):
    """Volume, first and second moments of a full-dimensional simplex.

    Uses ``int x x^T = V/((n+1)(n+2)) (sum v v^T + (sum v)(sum v)^T)``.
    """
    n = len(pts) - 1
    p0 = pts[0]
    vol = abs(det([list(sub(p, p0)) for p in pts[1:]])) / math.factorial(n)
    s = [sum(c) for c in zip(*pts)]
    first = [vol * sj / (n + 1) for sj in s]
    c = vol / ((n + 1) * (n + 2))
    second = [[c * (sum(p[j] * p[k] for p in pts) + s[j] * s[k]) for k in range(n)] for j in range(n)]
    return vol, first, second


def facet_simplex_measure(pts, normal, norm_sq):
    """sigma-measure of an (n-1)-simplex lying in the hyperplane <normal, x> = const.

    Equals (n-1)-volume / |normal|, which is rational for lattice normals:
    |det(edges, normal)| / ((n-1)! |normal|^2).
    """
    n = len(normal)
    p0 = pts[0]
    rows = [list(sub(p, p0)) for p in pts[1:]] + [list(normal)]
    return abs(det(rows)) / (math.factorial(n - 1) * norm_sq)


def region_moments(region, normals, norm_sqs, n_facets):
    """Interior moments of ``region`` and sigma-moments of its pieces on facets 0..n_facets-1.

    Returns (vol, first, second, bmass[list per facet], bfirst[list per facet]).
    """
    n = region.dim
    zero = 0
    vol, first, second = zero, [zero] * n, [[zero] * n for _ in range(n)]
    bmass = [zero] * n_facets
    bfirst = [[zero] * n for _ in range(n_facets)]
    if region.is_empty or region.affine_dim(list(range(len(region.vertices)))) < n:
        return vol, first, second, bmass, bfirst
    for simp in region.simplices(list(range(len(region.vertices))), n):
        v, f, s = simplex_moments(simp)
        vol = vol + v
        first = [a + b for a, b in zip(first, f)]
        second = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(second, s)]
    for i in range(n_facets):
        ids = region.face_ids(i)
        if len(ids) < n or region.affine_dim(ids) != n - 1:
            continue
        for simp in region.simplices(ids, n - 1):
            m = facet_simplex_measure(simp, normals[i], norm_sqs[i])
            bmass[i] = bmass[i] + m
            c = mean(simp)
            bfirst[i] = [a + m * cj for a, cj in zip(bfirst[i], c)]
    return vol, first, second, bmass, bfirst
