import numpy as np
import pytest

from abreu_kit import (
    AffineFunction, ClipFailure, OriginNotInterior, PLFunction, facet_margins, crease_grid,
    eval_L_pl, moments, preset, scan_creases, solve_extremal_affine, standard_simplex,
)


def extremal(P):
    return solve_extremal_affine(moments(P))


def test_interval_closed_form():
    P = preset("interval")
    E = extremal(P)
    for c in np.round(np.arange(-0.9, 0.91, 0.1), 10):
        val = eval_L_pl(PLFunction.simple(-c, [1.0]), P, E)
        assert val == pytest.approx((1 - c) - (1 - c) ** 2 / 2, abs=1e-13)
        assert val > 0
    assert eval_L_pl(PLFunction.simple(0.0, [1.0]), P, E) == pytest.approx(0.5, abs=1e-15)


def test_affine_is_null(any_preset):
    E = extremal(any_preset)
    rng = np.random.default_rng(41)
    for _ in range(5):
        f = AffineFunction(rng.standard_normal(), rng.standard_normal(any_preset.dim))
        assert abs(eval_L_pl(f, any_preset, E)) < 1e-12


def test_positive_homogeneity(square):
    E = extremal(square)
    f = PLFunction.simple(0.2, [1.0, -0.5])
    base = eval_L_pl(f, square, E)
    for t in (0.5, 3.0):
        assert eval_L_pl(f.scaled(t), square, E) == pytest.approx(t * base, rel=1e-13)


def test_crease_on_facet_fails(interval):
    with pytest.raises(ClipFailure):
        eval_L_pl(PLFunction.simple(-1.0, [1.0]), interval, extremal(interval))


def _mc_L(P, f, E, n, seed):
    """Monte-Carlo estimate of L(f) and its standard error."""
    rng = np.random.default_rng(seed)
    V = P.vertices
    lo, hi = V.min(0), V.max(0)
    box = np.prod(hi - lo)
    X = rng.uniform(lo, hi, size=(n, 2))
    inside = P.contains(X)
    g = np.where(inside, f(X) * E.s(X), 0.0) * box
    inner, inner_se = g.mean(), g.std() / np.sqrt(n)
    # boundary: uniform samples on each facet, weighted by length / |l|
    bnd, bnd_var = 0.0, 0.0
    for i, fc in enumerate(P.facets):
        on = [v for v in V if abs(P.ell(v[None])[0, i]) < 1e-12]
        a, b = on
        t = rng.uniform(size=n // 4)
        Y = a + t[:, None] * (b - a)
        w = np.linalg.norm(b - a) / np.linalg.norm(fc.normal)
        vals = f(Y) * w
        bnd += vals.mean()
        bnd_var += vals.var() / len(vals)
    return bnd - inner, np.sqrt(inner_se**2 + bnd_var)


@pytest.mark.parametrize("name,a0,a", [("square", 0.0, [1.0, 1.0]), ("cp2-simplex", 0.05, [1.0, -2.0]),
                                       ("hirzebruch-1", -0.1, [0.3, 1.0])])
def test_monte_carlo_oracle(name, a0, a):
    P = preset(name)
    E = extremal(P)
    f = PLFunction.simple(a0, a)
    exact = eval_L_pl(f, P, E)
    est, se = _mc_L(P, f, E, 10_000_000, seed=42)
    assert abs(exact - est) < 3 * se


def test_square_diagonal_crease_value(square):
    # (x+y)^+ : boundary part 8/3 (two edges 2, two edges 2/3), interior part 2 * 2/3
    assert eval_L_pl(PLFunction.simple(0.0, [1.0, 1.0]), square, extremal(square)) == pytest.approx(4 / 3)


def test_scan_interval_minimum():
    P = preset("interval")
    rep = scan_creases(P, extremal(P), offsets=19)
    assert len(rep.creases) == 38
    assert rep.minimum == pytest.approx(0.095, abs=1e-12)
    assert rep.violations == []


@pytest.mark.parametrize("name", ["interval", "square", "cp2-simplex"])
def test_scan_minimum_positive(name):
    P = preset(name)
    rep = scan_creases(P, extremal(P))
    assert rep.minimum > 0 and not rep.violations


def test_scan_square_coarse_grid(square):
    rep = scan_creases(square, extremal(square), angles=16, offsets=9)
    assert len(rep.creases) == 144 and rep.minimum > 0


def test_scan_threads_match(square):
    E = extremal(square)
    a = scan_creases(square, E, angles=8, offsets=5, threads=1)
    b = scan_creases(square, E, angles=8, offsets=5, threads=4)
    np.testing.assert_array_equal(a.values, b.values)
    assert a.to_csv() == b.to_csv()


def test_empty_grid(square):
    rep = scan_creases(square, extremal(square), angles=0)
    assert rep.minimum is None and rep.violations == []
    assert rep.to_csv() == "offset,L,violation\n"


def test_violations_are_entries_below_tolerance(square):
    rep = scan_creases(square, extremal(square), angles=8, offsets=5)
    rep.tol = float(np.median(rep.values))
    assert len(rep.violations) == int(np.sum(rep.values <= rep.tol))


def test_crease_grid_hits_interior(any_preset):
    if any_preset.dim > 2:
        pytest.skip("grids are 1D/2D")
    for c in crease_grid(any_preset, 8, 5):
        proj = any_preset.vertices @ np.array(c.direction)
        assert proj.min() < c.offset < proj.max()


@pytest.mark.parametrize("name,margin", [("interval", 1.0), ("square", 1.0), ("cp2-simplex", 3.0)])
def test_facet_margins(name, margin):
    P = preset(name)
    m = facet_margins(P, extremal(P))
    np.testing.assert_allclose(m, margin, atol=1e-9)


def test_facet_margins_require_origin():
    P = standard_simplex(2)
    with pytest.raises(OriginNotInterior):
        facet_margins(P, extremal(P))
