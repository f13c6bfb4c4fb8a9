"""Toric stability probes: L on simple PL functions and the facet-support margin test.

L(f) for PL f is evaluated exactly by clipping P along the crease and using
closed-form moments of the pieces, so values near zero are not masked by
quadrature noise.
"""
from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ClipFailure, OriginNotInterior
from .functional import ExtremalAffine, _exact_linear_part
from .polytope import DelzantPolytope
from .potentials import AffineFunction, PLFunction

VIOLATION_TOL = 1e-9
DEFAULT_ANGLES = 32
DEFAULT_OFFSETS_2D = 17
DEFAULT_OFFSETS_1D = 33


def _check_crease(f: PLFunction, P: DelzantPolytope):
    for c, a in zip(f.offsets, f.slopes):
        if not np.any(a):
            continue
        for fc in P.facets:
            l = np.asarray(fc.normal, dtype=float)
            # crease {c + <a, x> = 0} equals facet {<l, x> = lambda} iff (a, -c) || (l, lambda)
            M = np.vstack([np.append(a, -c), np.append(l, float(fc.support))])
            if np.linalg.matrix_rank(M, tol=1e-12 * max(1.0, np.abs(M).max())) < 2:
                raise ClipFailure(f"ClipFailure: crease of piece {a}, {c} lies along facet {fc.normal}; "
                                  "perturb the offset")


def eval_L_pl(f, polytope: DelzantPolytope, extremal: ExtremalAffine) -> float:
    """Exact L(f) for a PL or affine f."""
    if isinstance(f, AffineFunction):
        bnd, inner, _ = _exact_linear_part(f, polytope, extremal)
        return bnd - inner
    if f.is_simple:
        _check_crease(f, polytope)
    bnd, inner, _ = _exact_linear_part(f, polytope, extremal)
    return bnd - inner


@dataclass(frozen=True)
class Crease:
    direction: tuple  # unit normal a
    offset: float  # crease {<a, x> = offset}

    def pl(self) -> PLFunction:
        return PLFunction.simple(-self.offset, np.asarray(self.direction))


def crease_grid(P: DelzantPolytope, angles=None, offsets=None):
    """Simple PL functions max{<a, x> - c, 0} whose crease crosses the interior.

    In 1D the directions are +1 and -1; in 2D ``angles`` equally spaced unit
    vectors.  For each direction the offsets split the range of <a, x> over
    the vertices into ``offsets + 1`` equal parts (endpoints excluded).
    """
    n = P.dim
    if n == 1:
        dirs = [np.array([1.0]), np.array([-1.0])]
        offsets = DEFAULT_OFFSETS_1D if offsets is None else offsets
    elif n == 2:
        angles = DEFAULT_ANGLES if angles is None else angles
        offsets = DEFAULT_OFFSETS_2D if offsets is None else offsets
        th = 2 * np.pi * np.arange(angles) / max(angles, 1)
        dirs = [np.array([np.cos(t), np.sin(t)]) for t in th] if angles else []
    else:
        raise ValueError("crease grids are implemented for n <= 2")
    out = []
    V = P.vertices
    for a in dirs:
        proj = V @ a
        lo, hi = proj.min(), proj.max()
        for k in range(1, offsets + 1):
            out.append(Crease(tuple(float(v) for v in a), float(lo + (hi - lo) * k / (offsets + 1))))
    return out


def facet_margins(P: DelzantPolytope, extremal: ExtremalAffine) -> np.ndarray:
    """Margins (n + 1)/lambda_i - max_P s per facet; the test passes iff all are positive.

    The criterion depends on the origin, so P must already contain 0 in its
    interior (e.g. after :func:`~abreu_kit.polytope.barycentric_translate`).
    """
    lam = P.supports
    if np.any(lam <= 0):
        raise OriginNotInterior(f"OriginNotInterior: supports {lam.tolist()} are not all positive; "
                                "translate the polytope (barycentric_translate) first")
    s_max = float(np.max(extremal.s(P.vertices)))
    return (P.dim + 1) / lam - s_max


check_condition_46 = facet_margins


@dataclass
class StabilityReport:
    creases: list = field(default_factory=list)
    values: np.ndarray = field(default_factory=lambda: np.zeros(0))
    margins: np.ndarray | None = None
    tol: float = VIOLATION_TOL

    @property
    def minimum(self) -> float | None:
        return float(np.min(self.values)) if len(self.values) else None

    @property
    def violations(self) -> list:
        return [c for c, v in zip(self.creases, self.values) if v <= self.tol]

    @property
    def margins_pass(self) -> bool | None:
        return None if self.margins is None else bool(np.all(self.margins > 0))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        n = len(self.creases[0].direction) if self.creases else 0
        w.writerow([f"a{j + 1}" for j in range(n)] + ["offset", "L", "violation"])
        for c, v in zip(self.creases, self.values):
            w.writerow([f"{x:.17g}" for x in (*c.direction, c.offset, v)] + [int(v <= self.tol)])
        return buf.getvalue()

    def summary(self) -> dict:
        return {"n_creases": len(self.creases), "min_L": self.minimum,
                "n_violations": len(self.violations),
                "margins_pass": self.margins_pass,
                "margins": None if self.margins is None else [float(m) for m in self.margins]}


def scan_creases(P: DelzantPolytope, extremal: ExtremalAffine, angles=None, offsets=None,
                 threads=1) -> StabilityReport:
    """Evaluate L over a crease grid.  ``angles=0`` or ``offsets=0`` gives an empty report."""
    creases = crease_grid(P, angles, offsets)

    def one(c):
        return eval_L_pl(c.pl(), P, extremal)

    if threads > 1 and len(creases) > 1:
        with ThreadPoolExecutor(threads) as ex:
            values = list(ex.map(one, creases))
    else:
        values = [one(c) for c in creases]
    try:
        margins = facet_margins(P, extremal)
    except OriginNotInterior:
        margins = None
    return StabilityReport(creases, np.array(values, dtype=float), margins)
