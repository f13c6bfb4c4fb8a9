from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from abreu_kit import (
    DelzantPolytope, EmptyInterior, NonDelzantVertex, RedundantFacet, UnboundedPolytope,
    barycentric_translate, boundary_measure, box, clipped_moments, from_json, moments, preset,
    shrink, standard_simplex, translate, validate_delzant,
)


def test_presets_validate(any_preset):
    rep = validate_delzant(any_preset)
    assert rep.ok
    assert set(abs(d) for d in rep.determinants) == {1}


def test_square_vertices():
    rep = validate_delzant(preset("square"))
    assert len(rep.vertices) == 4
    assert sorted(map(tuple, rep.vertices)) == [(-1, -1), (-1, 1), (1, -1), (1, 1)]


def test_non_delzant_vertex_reports_determinant():
    P = DelzantPolytope([(-1, 0), (0, -1), (1, 2)], [0, 0, 2])
    with pytest.raises(NonDelzantVertex) as ei:
        validate_delzant(P)
    assert abs(ei.value.determinant) == 2


def test_unbounded_rejected():
    P = DelzantPolytope([(1, 0), (0, 1)], [1, 1])
    with pytest.raises(UnboundedPolytope):
        validate_delzant(P)


def test_redundant_facet_rejected():
    P = DelzantPolytope([(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1)], [1, 1, 1, 1, 5])
    with pytest.raises(RedundantFacet):
        validate_delzant(P)


def test_exact_moments_interval_and_square():
    ex = moments(preset("interval")).exact
    assert ex["volume"] == 2 and ex["second"][0][0] == Fraction(2, 3) and ex["boundary_mass"] == 2
    ex = moments(preset("square")).exact
    assert ex["volume"] == 4 and ex["boundary_mass"] == 8


def test_simplex_boundary_measure_is_rational():
    # density 1/|l| on the hypotenuse of length sqrt(2) times |l| = sqrt(2) -> 1
    ex = moments(standard_simplex(2)).exact
    assert ex["volume"] == Fraction(1, 2)
    assert ex["boundary_mass"] == 3
    assert isinstance(ex["boundary_mass"], Fraction)


def test_cp2_preset_is_barycentred():
    P = preset("cp2-simplex")
    assert all(f.support == Fraction(1, 3) for f in P.facets)
    np.testing.assert_allclose(moments(P).barycenter, 0, atol=1e-15)


def test_barycentric_translate_standard_simplex():
    Q, off = barycentric_translate(standard_simplex(2))
    assert [f.support for f in Q.facets] == [Fraction(1, 3)] * 3
    np.testing.assert_allclose(off, [1 / 3, 1 / 3])


def test_shrink_interval_and_empty():
    Q = shrink(preset("interval"), Fraction(1, 4))
    assert [f.support for f in Q.facets] == [Fraction(3, 4)] * 2
    P = preset("cp2-simplex")
    # inradius of this simplex is 1 - 1/sqrt(2) ~ 0.2929
    assert P.inradius == pytest.approx(1 - 2**-0.5, rel=1e-12)
    assert shrink(P, 0.2).inradius == pytest.approx(P.inradius - 0.2, rel=1e-9)
    with pytest.raises(EmptyInterior):
        shrink(P, 0.3)
    assert shrink(P, 0) is P


@settings(max_examples=30, deadline=None)
@given(st.fractions(0, Fraction(2, 5)), st.fractions(0, Fraction(2, 5)))
def test_shrink_composes_exactly(a, b):
    P = preset("square")
    assert shrink(shrink(P, a), b) == shrink(P, a + b)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.fractions(-3, 3, max_denominator=7), min_size=2, max_size=2))
def test_moment_translation_covariance(t):
    P = preset("hirzebruch-1")
    mt, mq = moments(P).exact, moments(translate(P, t)).exact
    tv = [Fraction(v) for v in t]
    # translate(P, t) is P - t
    assert mq["volume"] == mt["volume"]
    for j in range(2):
        assert mq["first"][j] == mt["first"][j] - tv[j] * mt["volume"]
        assert mq["boundary_first"][j] == mt["boundary_first"][j] - tv[j] * mt["boundary_mass"]
    assert mq["boundary_mass"] == mt["boundary_mass"]


def test_boundary_density_matches_support_form():
    P = preset("cp2-simplex")
    bm = boundary_measure(P)
    # on facet i, lambda_i^{-1} <nu, x> equals 1/|l_i| for every x on that facet
    for i, f in enumerate(P.facets):
        l = np.array(f.normal, float)
        x = l * float(f.support) / (l @ l) + 0.01 * np.array([-l[1], l[0]])
        np.testing.assert_allclose(bm.pointwise(i, x[None]), 1 / np.linalg.norm(l), rtol=1e-12)


def test_clipped_moments_half_square():
    vol, first, second, fmass, ffirst = clipped_moments(preset("square"), [(0.0, np.array([1.0, 0.0]))])
    assert vol == pytest.approx(2.0)
    np.testing.assert_allclose(first, [1.0, 0.0], atol=1e-14)
    # right half of the square: facet x = 1 (length 2) plus half of y = +-1 (length 1 each)
    assert fmass.sum() == pytest.approx(4.0)


def test_json_round_trip(any_preset):
    Q = from_json(any_preset.to_json())
    assert Q == any_preset


def test_json_accepts_rational_pairs():
    P = from_json('{"dim":1,"facets":[{"normal":[1],"support":["1","3"]},{"normal":[-1],"support":0.5}]}')
    assert P.facets[0].support == Fraction(1, 3) and P.facets[1].support == Fraction(1, 2)


def test_json_malformed():
    with pytest.raises(ValueError):
        from_json('{"dim":1}')


def test_box_contains():
    B = box([0, 0], [2, 1])
    assert B.contains(np.array([[1.0, 0.5]]))[0]
    assert not B.contains(np.array([[2.5, 0.5]]))[0]
    assert B.inradius == pytest.approx(0.5)
