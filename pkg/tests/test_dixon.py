import random
from fractions import Fraction
from itertools import combinations

import mpmath
import pytest

from quartic import catalog
from quartic.bitangents import is_syzygetic_triple
from quartic.dixon import complete_vmatrix, contact_cubic_space, det_ratio, dixon_detrep, dixon_from_triple
from quartic.errors import DegenerateError
from quartic.kernel import projective
from quartic.kernel.poly import MPoly
from quartic.kernel.roots import roots_univariate
from quartic.kernel.tolerance import DEFAULT_PROFILE
from quartic.octad import orbit_classify

EPS = DEFAULT_PROFILE.eps_residual
x, y, z = MPoly.gens()


def index_of(bitangents, coeffs):
    return next(k for k, b in enumerate(bitangents) if projective.chordal_distance(b.line, coeffs) < 1e-30)


@pytest.fixture(scope="module")
def edge_triple(edge_bitangents):
    # v00 = 2(y + 2z)(-2x + z)(x - 2y)
    return tuple(index_of(edge_bitangents, c) for c in ((0, 1, 2), (-2, 0, 1), (1, -2, 0)))


@pytest.fixture(scope="module")
def edge_basis(edge_bitangents, edge_triple):
    return contact_cubic_space(catalog.EDGE, edge_bitangents, edge_triple)


@pytest.fixture(scope="module")
def edge_vmatrix(edge_basis):
    return complete_vmatrix(catalog.EDGE, edge_basis)


def curve_points(f, n, seed=0):
    rng = random.Random(seed)
    pts = []
    while len(pts) < n:
        a, b = Fraction(rng.randint(-99, 99), 100), Fraction(rng.randint(-99, 99), 100)
        g = f.poly.compose([MPoly.constant(a), MPoly.constant(b), z])
        coeffs = [g.coefficient((0, 0, k)) for k in range(5)]
        pts += [(a, b, r) for r, _ in roots_univariate(coeffs)]
    return pts[:n]


def test_cubic_space_contains_product(edge_basis, edge_bitangents, edge_triple):
    expected = MPoly.linear_form((0, 1, 2)) * MPoly.linear_form((-2, 0, 1)) * MPoly.linear_form((1, -2, 0))
    ratio = [edge_basis.v00.coefficient(e) / expected.coefficient(e) for e in expected.terms]
    assert max(abs(r - ratio[0]) for r in ratio) < 1e-60
    pts = [p for i in edge_triple for p in edge_bitangents[i].contact_points]
    for cubic in edge_basis.cubics:
        scale = max(abs(c) for c in cubic.terms.values())
        assert all(abs(cubic(*p)) < EPS * scale for p in pts)


def test_vmatrix_is_symmetric_with_basis_row(edge_vmatrix, edge_basis):
    for i in range(4):
        assert edge_vmatrix[0][i] is not None
        for j in range(4):
            assert edge_vmatrix[i][j] is edge_vmatrix[j][i]


def test_vmatrix_has_rank_one_on_the_curve(edge_vmatrix):
    for p in curve_points(catalog.EDGE, 3):
        vals = mpmath.matrix([[e(*p) for e in row] for row in edge_vmatrix])
        sv = mpmath.svd_c(vals, compute_uv=False)
        assert sv[1] < 1e-40 * sv[0]


def test_det_v_is_a_multiple_of_f_cubed(edge_vmatrix):
    d1, size = det_ratio(edge_vmatrix, catalog.EDGE, random.Random(1))
    d2, _ = det_ratio(edge_vmatrix, catalog.EDGE, random.Random(2))
    assert size > 1e-6
    assert abs(d1 - d2) < 1e-40 * abs(d1)


def test_dixon_certificate(edge_bitangents):
    rep = dixon_detrep(catalog.EDGE, bitangents=edge_bitangents, seed=3)
    assert rep.residual < EPS


def test_dixon_is_deterministic(edge_bitangents):
    a = dixon_detrep(catalog.EDGE, bitangents=edge_bitangents, seed=5)
    b = dixon_detrep(catalog.EDGE, bitangents=edge_bitangents, seed=5)
    assert a.matrices == b.matrices


def test_success_iff_azygetic(edge_bitangents):
    rng = random.Random(11)
    triples = rng.sample(list(combinations(range(28), 3)), 12)
    for t in triples:
        syz = is_syzygetic_triple(catalog.EDGE, *(edge_bitangents[i] for i in t))
        if syz:
            with pytest.raises(DegenerateError):
                dixon_from_triple(catalog.EDGE, edge_bitangents, t)
        else:
            assert dixon_from_triple(catalog.EDGE, edge_bitangents, t).residual < EPS


def test_syzygetic_triple_fails(edge_bitangents, edge_bm):
    t = (edge_bm.entry(0, 1), edge_bm.entry(1, 2), edge_bm.entry(2, 3))
    with pytest.raises(DegenerateError):
        dixon_from_triple(catalog.EDGE, edge_bitangents, t)


def test_triples_of_one_class_give_that_class(edge_bitangents, edge_classes):
    for k in (0, 7):
        for triple in sorted(tuple(sorted(t)) for t in edge_classes[k].triples)[:2]:
            rep = dixon_from_triple(catalog.EDGE, edge_bitangents, triple)
            assert orbit_classify(rep, edge_classes) == k


def test_singular_input_rejected():
    from quartic.curve import TernaryQuartic

    with pytest.raises(DegenerateError):
        dixon_detrep(TernaryQuartic.from_poly(x**4 + y**4))
