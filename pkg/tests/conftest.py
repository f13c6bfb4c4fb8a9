import numpy as np
import pytest

from abreu_kit import PRESET_NAMES, build_scheme, moments, preset, solve_extremal_affine


@pytest.fixture(params=PRESET_NAMES)
def any_preset(request):
    return preset(request.param)


@pytest.fixture(scope="session")
def interval():
    return preset("interval")


@pytest.fixture(scope="session")
def square():
    return preset("square")


@pytest.fixture(scope="session")
def simplex():
    return preset("cp2-simplex")


def setup(P, level=3):
    """(scheme, extremal affine function) for P."""
    return build_scheme(P, level), solve_extremal_affine(moments(P))


def interior_points(P, n, seed=0, margin=0.05):
    """n uniform points of P at distance >= margin * inradius from the boundary."""
    rng = np.random.default_rng(seed)
    V = P.vertices
    lo, hi = V.min(axis=0), V.max(axis=0)
    out = []
    while len(out) < n:
        X = rng.uniform(lo, hi, size=(4 * n, P.dim))
        X = X[P.facet_distance(X) > margin * P.inradius]
        out.extend(X)
    return np.array(out[:n])
