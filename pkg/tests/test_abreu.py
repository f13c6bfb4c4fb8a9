import numpy as np
import pytest

from abreu_kit import (
    DegenerateHessian, GuilleminPotential, ParametrizedPotential, TooCloseToBoundary,
    abreu_operator, build_scheme, moments, preset, residual_report, sample_points,
    solve_extremal_affine, translate,
)
from conftest import interior_points


def test_interval_point_value():
    assert abreu_operator(GuilleminPotential(preset("interval")), np.array([0.3])) == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("name,s,tol", [("interval", 1.0, 1e-6), ("square", 2.0, 1e-6), ("cp2-simplex", 6.0, 1e-5)])
def test_guillemin_solves_extremal_equation(name, s, tol):
    P = preset(name)
    X = interior_points(P, 50, seed=21, margin=0.05)
    A = abreu_operator(GuilleminPotential(P), X)
    np.testing.assert_allclose(A, s, atol=tol)


def test_residual_report_interval():
    P = preset("interval")
    E = solve_extremal_affine(moments(P))
    X = np.linspace(-0.95, 0.95, 50)[:, None]
    R = residual_report(GuilleminPotential(P), E, X)
    assert R.sup < 1e-6
    assert R.l2 <= R.sup
    bad = ParametrizedPotential.from_terms(P, {(2,): 0.1})
    assert residual_report(bad, E, X).sup > 0.01


def test_residual_empty_sample():
    P = preset("square")
    R = residual_report(GuilleminPotential(P), solve_extremal_affine(moments(P)), np.zeros((0, 2)))
    assert R.sup == 0 and R.l2 == 0 and len(R.residual) == 0
    assert R.to_csv() == "x1,x2,operator,s,residual\n"


def test_affine_invariance():
    P = preset("hirzebruch-1")
    u = ParametrizedPotential.from_terms(P, {(2, 1): 0.1, (0, 2): 0.3})
    X = interior_points(P, 10, seed=22, margin=0.1)
    np.testing.assert_allclose(abreu_operator(u.add_affine(2.0, [-1.0, 3.0]), X), abreu_operator(u, X),
                               rtol=1e-6, atol=1e-6)


def test_translation_equivariance():
    P = preset("cp2-simplex")
    t = np.array([0.25, -0.5])
    Q = translate(P, t)  # Q = P - t
    X = interior_points(P, 10, seed=23, margin=0.1)
    np.testing.assert_allclose(abreu_operator(GuilleminPotential(Q), X - t),
                               abreu_operator(GuilleminPotential(P), X), atol=1e-5)


def test_hirzebruch_guillemin_is_not_extremal():
    P = preset("hirzebruch-1")
    E = solve_extremal_affine(moments(P))
    S = build_scheme(P, 2)
    R = residual_report(GuilleminPotential(P), E, sample_points(S, max_points=50))
    assert R.sup > 0.01


def test_errors():
    P = preset("interval")
    with pytest.raises(TooCloseToBoundary):
        abreu_operator(GuilleminPotential(P), np.array([1 - 1e-5]))
    flat = ParametrizedPotential(P, degree=2, guillemin_weight=0.0)
    with pytest.raises(DegenerateHessian):
        abreu_operator(flat, np.array([0.0]))


def test_sample_points_respect_distance():
    P = preset("square")
    S = build_scheme(P, 3)
    X = sample_points(S, max_points=100, seed=4)
    assert len(X) == 100
    assert np.all(P.facet_distance(X) >= 2e-4 * P.diameter)
    np.testing.assert_array_equal(X, sample_points(S, max_points=100, seed=4))


def test_residual_csv_columns():
    P = preset("interval")
    E = solve_extremal_affine(moments(P))
    R = residual_report(GuilleminPotential(P), E, np.array([[0.1], [0.2]]))
    lines = R.to_csv().splitlines()
    assert lines[0] == "x1,operator,s,residual" and len(lines) == 3
