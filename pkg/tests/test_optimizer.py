import warnings

import numpy as np
import pytest

from abreu_kit import (
    GuilleminPotential, MinimizeConfig, ParametrizedPotential, StartInadmissible, UnstableDirection,
    eval_F, gradient_F, minimize, moments, preset, residual_report, sample_points,
)
from conftest import setup

F_INTERVAL = 2 * np.log(2) - 2


def test_config_validation():
    with pytest.raises(ValueError):
        MinimizeConfig(grad_tol=0)
    with pytest.raises(ValueError):
        MinimizeConfig(backtrack=1.0)
    assert MinimizeConfig().to_dict()["grad_tol"] == 1e-7


def test_gradient_vanishes_at_guillemin(interval):
    S, E = setup(interval, 4)
    g = gradient_F(ParametrizedPotential(interval, degree=4), S, E)
    assert np.max(np.abs(g)) < 1e-5


def test_gradient_sign_along_quadratic(interval):
    S, E = setup(interval, 4)
    for t in (0.05, -0.05):
        u = ParametrizedPotential.from_terms(interval, {(2,): t}, degree=4)
        g = gradient_F(u, S, E)
        assert np.sign(g[u.basis.index((2,))]) == np.sign(t)


@pytest.mark.parametrize("name", ["interval", "square", "hirzebruch-1"])
def test_gradient_matches_finite_differences(name):
    P = preset(name)
    S, E = setup(P, 2)
    rng = np.random.default_rng(31)
    u = ParametrizedPotential(P, degree=3)
    u.coeffs[:] = 0.05 * rng.standard_normal(len(u.coeffs))
    g = gradient_F(u, S, E)
    t = 1e-5
    for k in range(len(u.coeffs)):
        cp, cm = u.coeffs.copy(), u.coeffs.copy()
        cp[k] += t
        cm[k] -= t
        fd = (eval_F(u.with_coeffs(cp), S, E).F - eval_F(u.with_coeffs(cm), S, E).F) / (2 * t)
        assert abs(fd - g[k]) <= 1e-5 * max(1.0, abs(g[k]))


def test_interval_from_perturbed_start(interval):
    start = ParametrizedPotential.from_terms(interval, {(2,): 0.3, (4,): 0.1})
    u, trace = minimize(start, MinimizeConfig(degree=6, level=4))
    assert trace.converged
    assert abs(trace.F[-1] - F_INTERVAL) < 1e-4
    assert np.all(np.diff(trace.F) < 0)
    assert np.max(np.abs(u.coeffs)) < 1e-5
    S, E = setup(interval, 4)
    assert residual_report(u, E, sample_points(S)).sup < 1e-3
    # monitors stay bounded
    assert max(trace.boundary_integral) < 10 * abs(trace.boundary_integral[0])
    assert max(trace.interior_integral) < 10 * abs(trace.interior_integral[0])
    # normalized at the barycenter
    v, g = u.evaluate(np.zeros(1), 1)
    assert abs(v) < 1e-12 and abs(g[0]) < 1e-12


def test_interval_critical_start(interval):
    u, trace = minimize(ParametrizedPotential(interval), MinimizeConfig(level=4))
    assert trace.n_iter <= 2
    assert all(b <= a for a, b in zip(trace.F, trace.F[1:]))


def test_restart_invariance(interval):
    cfg = MinimizeConfig(level=4)
    S, E = setup(interval, 4)
    out = []
    for terms in ({(2,): 0.3, (4,): 0.1}, {(2,): 1.0, (3,): 0.2, (6,): 0.05}):
        u, tr = minimize(ParametrizedPotential.from_terms(interval, terms), cfg)
        out.append((tr.F[-1], residual_report(u, E, sample_points(S)).sup))
    assert abs(out[0][0] - out[1][0]) < 1e-4
    assert out[0][1] < 1e-3 and out[1][1] < 1e-3


def test_square_from_perturbed_start(square):
    start = ParametrizedPotential.from_terms(square, {(2, 2): 0.2}, degree=4)
    u, trace = minimize(start, MinimizeConfig(degree=4, level=3))
    S, E = setup(square, 3)
    F_ref = eval_F(GuilleminPotential(square), S, E).F
    assert abs(trace.F[-1] - F_ref) < 1e-4
    assert np.all(np.diff(trace.F) < 0)
    assert residual_report(u, E, sample_points(S)).sup < 1e-2


def test_inadmissible_start(interval):
    bad = ParametrizedPotential.from_terms(interval, {(2,): -3.0})
    with pytest.raises(StartInadmissible):
        minimize(bad)


def test_trace_csv(interval):
    _, trace = minimize(ParametrizedPotential.from_terms(interval, {(2,): 0.3}), MinimizeConfig(level=3))
    lines = trace.to_csv().splitlines()
    assert lines[0] == "iteration,F,grad_norm,step,boundary_integral,interior_integral"
    assert len(lines) == len(trace.F) + 1


def test_no_unstable_warning_on_stable_preset(interval):
    with warnings.catch_warnings():
        warnings.simplefilter("error", UnstableDirection)
        _, trace = minimize(ParametrizedPotential.from_terms(interval, {(2,): 0.3}), MinimizeConfig(level=3))
    assert not trace.unstable
