import numpy as np
import pytest

from angled.angles import build_constraints
from angled.curves import (
    CurveSet, NormalCurve, Segment, cut_and_rejoin, cut_corner, edge_link_curve,
    filling_coefficients, holonomy_coefficients, homology_basis, intersection_number,
    leading_trailing_vector, make_curve, random_curve,
)
from angled.errors import CurveError, DifferentCusps, NotCoprime
from angled.solver import solve
from conftest import GEOMETRIC, VALID
from oracles import develop, translation


def random_curves(tri, rng, count):
    return [random_curve(tri, int(rng.integers(tri.num_cusps)), rng) for _ in range(count)]


def test_cut_corner_is_the_shared_corner():
    corner, _ = cut_corner(Segment(0, 0, 1, 2))
    assert corner == 3
    corner, _ = cut_corner(Segment(0, 2, 3, 0))
    assert corner == 1


def test_reversal_flips_sign():
    for v in range(4):
        others = [u for u in range(4) if u != v]
        for a in others:
            for b in others:
                if a != b:
                    seg = Segment(0, v, a, b)
                    assert cut_corner(seg)[1] == -cut_corner(seg.reversed())[1]


def test_fig8_edge_link_length(fig8):
    assert len(edge_link_curve(fig8, fig8.edge_classes[0], 0)) == 6


@pytest.mark.parametrize("name", VALID)
@pytest.mark.parametrize("end", [0, 1])
def test_edge_link_cuts_its_edge_positively(tris, name, end):
    tri = tris[name]
    for e in tri.edge_classes:
        rho = edge_link_curve(tri, e, end)
        assert len(rho) == e.degree
        assert rho.is_simple()
        for s in rho.segments:
            corner, eps = cut_corner(s)
            assert eps == 1
            assert tri.edge_class_of(s.tet, s.vertex, corner) == e.id
        # Im H is the angle sum around the edge
        c = holonomy_coefficients(rho)
        assert np.array_equal(c, build_constraints(tri).A[tri.tet_count + e.id])


@pytest.mark.parametrize("name", VALID)
def test_deformations_are_tangent(tris, curve_sets, name):
    tri = tris[name]
    A = build_constraints(tri).A
    rng = np.random.default_rng(1)
    for curve in curve_sets[name].all_curves() + random_curves(tri, rng, 40):
        w = leading_trailing_vector(curve)
        assert np.max(np.abs(A @ w)) < 1e-12
        assert np.all(w.reshape(-1, 3).sum(axis=1) == 0)


@pytest.mark.parametrize("name", VALID)
def test_edge_link_leaves_its_edge_alone(tris, name):
    tri = tris[name]
    for e in tri.edge_classes:
        rho = edge_link_curve(tri, e, 0)
        # every segment moves only the two corners off the edge...
        for s in rho.segments:
            assert tri.edge_class_of(s.tet, s.vertex, s.enter) != e.id or s.enter != s.cut
            assert {s.enter, s.exit}.isdisjoint({s.cut})
            assert tri.edge_class_of(s.tet, s.vertex, s.cut) == e.id
        # ...so the angle sum about e is unchanged
        row = build_constraints(tri).A[tri.tet_count + e.id]
        assert row @ leading_trailing_vector(rho) == 0


@pytest.mark.parametrize("name", VALID)
def test_edge_links_meet_nothing(tris, curve_sets, name):
    tri = tris[name]
    rng = np.random.default_rng(2)
    others = curve_sets[name].all_curves() + random_curves(tri, rng, 30)
    for rho in curve_sets[name].edge_links:
        for sigma in others:
            if sigma.cusp == rho.cusp:
                assert intersection_number(rho, sigma) == 0


@pytest.mark.parametrize("name", VALID)
def test_homology_basis_meets_once(tris, name):
    tri = tris[name]
    for c in tri.cusps:
        mu, lam = homology_basis(tri, c.id)
        assert mu.is_simple() and lam.is_simple()
        assert intersection_number(mu, lam) == 1
        assert intersection_number(lam, mu) == -1
        assert intersection_number(mu, mu) == 0
        assert intersection_number(lam, lam) == 0


def test_file_curves_used_verbatim(fig8, curve_sets):
    mu, lam = curve_sets["fig8"].peripheral[0]
    assert [tuple(s) for s in mu.segments] == list(fig8.peripheral[0]["meridian"])
    assert [tuple(s) for s in lam.segments] == list(fig8.peripheral[0]["longitude"])
    assert intersection_number(mu, lam) == 1


@pytest.mark.parametrize("name", VALID)
def test_intersection_antisymmetric(tris, name):
    tri = tris[name]
    rng = np.random.default_rng(3)
    curves = random_curves(tri, rng, 40)
    for a in curves:
        assert intersection_number(a, a) == 0
        for b in curves[:15]:
            if a.cusp == b.cusp:
                assert intersection_number(a, b) == -intersection_number(b, a)


def test_different_cusps_rejected(tris, curve_sets):
    mu0, _ = curve_sets["whitehead"].peripheral[0]
    mu1, _ = curve_sets["whitehead"].peripheral[1]
    with pytest.raises(DifferentCusps):
        intersection_number(mu0, mu1)


@pytest.mark.parametrize("name", GEOMETRIC)
def test_intersection_matches_developed_translations(tris, name):
    # at the complete structure each curve translates the developed cusp; the
    # algebraic intersection is the signed area spanned by two translations
    tri = tris[name]
    angles = solve(tri).angles
    rng = np.random.default_rng(4)
    for c in tri.cusps:
        placement, area = develop(tri.gluings, angles, c.vertices)
        curves = [random_curve(tri, c.id, rng) for _ in range(40)]
        curves += list(CurveSet.build(tri).peripheral[c.id])
        trans = [translation(tri.gluings, angles, placement, k.segments) for k in curves]
        for a, ta in zip(curves, trans):
            for b, tb in zip(curves[:20], trans[:20]):
                expected = (ta.conjugate() * tb).imag / area
                assert abs(expected - round(expected)) < 1e-9
                assert intersection_number(a, b) == round(expected)


def test_make_curve_rejects_broken_chain(fig8):
    with pytest.raises(CurveError):
        make_curve(fig8, [(0, 0, 2, 3), (1, 2, 3, 0)])
    with pytest.raises(CurveError):
        make_curve(fig8, [(0, 0, 0, 3)])
    with pytest.raises(CurveError):
        make_curve(fig8, [])


def test_reversed_curve_is_valid(curve_sets, fig8):
    for curve in curve_sets["fig8"].all_curves():
        back = curve.reversed()
        make_curve(fig8, back.segments)
        assert np.array_equal(leading_trailing_vector(back), -leading_trailing_vector(curve))
        assert np.array_equal(holonomy_coefficients(back), -holonomy_coefficients(curve))


def test_cut_and_rejoin_splits_deformation(tris):
    rng = np.random.default_rng(5)
    split = 0
    for tri in tris.values():
        for curve in random_curves(tri, rng, 30):
            if curve.is_simple():
                continue
            first, second = cut_and_rejoin(curve)
            w = sum(leading_trailing_vector(p) for p in (first, second) if len(p))
            assert np.array_equal(w, leading_trailing_vector(curve))
            split += 1
    assert split > 0


def test_filling_coefficients(curve_sets):
    curves = curve_sets["fig8"]
    mu, lam = curves.peripheral[0]
    c, w = filling_coefficients(curves, 0, 5, 1)
    assert np.array_equal(c, 5 * holonomy_coefficients(mu) + holonomy_coefficients(lam))
    assert np.array_equal(w, 5 * leading_trailing_vector(mu) + leading_trailing_vector(lam))
    with pytest.raises(NotCoprime):
        filling_coefficients(curves, 0, 2, 4)


def test_empty_curve_has_no_segments(fig8):
    assert len(NormalCurve(fig8, 0, ())) == 0


@pytest.mark.parametrize("name", VALID)
def test_simple_curves_are_primitive(tris, curve_sets, name):
    # an embedded curve on a torus is null-homologous or a primitive class
    from math import gcd
    tri = tris[name]
    rng = np.random.default_rng(6)
    simple = 0
    for curve in random_curves(tri, rng, 200):
        mu, lam = curve_sets[name].peripheral[curve.cusp]
        a, b = intersection_number(curve, lam), intersection_number(mu, curve)
        if curve.is_simple():
            simple += 1
            assert (a, b) == (0, 0) or gcd(a, b) == 1
    assert simple > 0
