import random
from fractions import Fraction
from itertools import combinations

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quartic import catalog
from quartic.detrep import proportionality
from quartic.errors import DegenerateError
from quartic.kernel import projective
from quartic.kernel.tolerance import DEFAULT_PROFILE
from quartic.octad import (LABELS, bifid_substitution, cayley_octad, eighth_point, frame_normalize, gale_dual,
                           is_cayley_octad, is_self_associated, octad_check, orbit_classify, principal_minor,
                           quadric_residual, quadrics_through, twisted_cubic_predicate)

EPS = DEFAULT_PROFILE.eps_residual
FRAME = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (1, 1, 1, 1)]

rational = st.fractions(min_value=-9, max_value=9, max_denominator=9)
point = st.tuples(rational, rational, rational, rational).filter(any)


def nonzero(rng):
    return Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 9))


def prop71_octad(rng):
    while True:
        p6 = tuple(nonzero(rng) for _ in range(4))
        p7 = tuple(nonzero(rng) for _ in range(4))
        try:
            return FRAME + [p6, p7, eighth_point(FRAME + [p6, p7])]
        except DegenerateError:
            continue


def test_points_are_base_points(edge_octad, edge_rep):
    assert quadric_residual(edge_rep, edge_octad.points) < EPS


def test_edge_octad_is_real(edge_octad):
    assert edge_octad.real_points == list(LABELS)


def test_conjugation_is_an_involution(empty_rep):
    octad = cayley_octad(empty_rep)
    perm = octad.conjugation
    assert all(perm[perm[i]] == i for i in LABELS)
    assert len(octad.real_points) == 0
    # canonical order keeps conjugate partners adjacent
    assert all(perm[i] == i ^ 1 for i in LABELS)


def test_gaussian_rational_octad_point(empty_rep):
    octad = cayley_octad(empty_rep)
    target = (-6 + 4j, -4 + 4j, -3 + 2j, 1 - 1j)
    assert min(projective.chordal_distance(p, target) for p in octad.points) < 1e-30


def test_principal_minors_are_multiples_of_f(edge_bm):
    for labels in [(0, 1, 2, 3), (0, 2, 5, 7), (4, 5, 6, 7)]:
        _, residual = proportionality(principal_minor(edge_bm, labels), catalog.EDGE)
        assert residual < EPS


def test_real_entries_exactly_for_real_or_conjugate_points(empty_bm, empty_rep):
    perm = empty_bm.octad.conjugation
    for (i, j), line in empty_bm.lines.items():
        real = projective.is_real(line, 1e-30)
        assert real == (perm[i] == j or (perm[i] == i and perm[j] == j))


def test_bifid_relabels_the_block(edge_bm):
    subset = (0, 1, 2, 3)
    new = bifid_substitution(edge_bm, subset)
    assert new.rep.residual < EPS
    for i, j in combinations(subset, 2):
        k, l = (m for m in subset if m not in (i, j))
        assert new.bitangent_matrix.entry(i, j) == edge_bm.entry(k, l)


def test_bifid_octad_uses_reciprocal_coordinates(edge_bm):
    # with the block at the coordinate points, the others are inverted coordinatewise
    units = tuple(i for i, p in enumerate(edge_bm.octad.points) if sum(abs(c) > 1e-60 for c in p) == 1)
    assert len(units) == 4
    new = bifid_substitution(edge_bm, units)
    assert quadric_residual(new.rep, new.octad.points) < EPS
    # new coordinate c belongs to the label units[c]
    axis = [next(a for a in range(4) if abs(edge_bm.octad.points[u][a]) > 1e-60) for u in units]
    for m in (m for m in LABELS if m not in units):
        old = edge_bm.octad.points[m]
        expected = [1 / old[a] for a in axis]
        assert projective.chordal_distance(new.octad.points[m], expected) < 1e-30


def test_each_class_owns_56_triples(edge_classes):
    owned = [cls.triples for cls in edge_classes]
    assert all(len(t) == 56 for t in owned)
    union = frozenset().union(*owned)
    assert len(union) == 36 * 56 == 2016


def test_classification_is_the_identity(edge_classes):
    assert [orbit_classify(cls.rep, edge_classes) for cls in edge_classes] == list(range(36))


@settings(max_examples=4)
@given(st.integers(0, 2**32), st.integers(0, 35))
def test_congruence_keeps_the_class(edge_classes, seed, k):
    rng = random.Random(seed)
    while True:
        u = [[Fraction(rng.randint(-3, 3)) for _ in range(4)] for _ in range(4)]
        if mpmath.det(mpmath.matrix([[float(v) for v in row] for row in u])) != 0:
            break
    rep = edge_classes[k].rep.congruent(u)
    assert orbit_classify(rep, edge_classes) == k


def test_eighth_point_reproduces_edge_octad(edge_octad):
    pts = frame_normalize(edge_octad.points)
    seven = [FRAME[i] for i in range(5)] + [tuple(mpmath.re(c) for c in p) for p in pts[5:7]]
    predicted = eighth_point(seven)
    assert projective.chordal_distance(predicted, pts[7]) < 1e-30


@given(st.integers(0, 2**32))
def test_eighth_point_lies_on_the_quadrics(seed):
    pts = prop71_octad(random.Random(seed))
    assert all(isinstance(c, Fraction) for c in pts[7])
    quads = quadrics_through(pts[:7])
    assert len(quads) == 3
    for q in quads:
        val = sum(pts[7][i] * q[i][j] * pts[7][j] for i in range(4) for j in range(4))
        assert abs(val) < 1e-60 * max(abs(v) for row in q for v in row)


def test_eighth_point_rejects_bad_frame():
    with pytest.raises(ValueError):
        eighth_point([(1, 2, 0, 0)] + FRAME[1:] + [(1, 2, 3, 4), (2, 3, 5, 7)])


def test_edge_octad_passes_the_test(edge_octad):
    check = octad_check(edge_octad.points)
    assert check.is_octad and check.quadric_nullity == 3


@settings(max_examples=10)
@given(st.lists(point, min_size=8, max_size=8))
def test_random_points_are_not_octads(points):
    try:
        check = octad_check(points)
    except DegenerateError:
        return
    assert not check.is_octad and check.violated
    assert check.quadric_nullity == 2


def test_twisted_cubic_predicate():
    on_cubic = [(1, t, t * t, t**3) for t in (-3, -1, 0, 1, 2, 3, 5, 7)]
    assert twisted_cubic_predicate(on_cubic)


def test_edge_octad_is_off_the_twisted_cubic_divisor(edge_octad):
    assert not twisted_cubic_predicate(edge_octad.points)


@settings(max_examples=10)
@given(st.integers(0, 2**32))
def test_generic_octad_is_off_the_twisted_cubic_divisor(seed):
    assert not twisted_cubic_predicate(prop71_octad(random.Random(seed)))


def test_octads_are_self_associated(edge_octad):
    assert is_self_associated(edge_octad.points)
    assert is_self_associated(prop71_octad(random.Random(3)))


def test_gale_dual_is_in_the_kernel(edge_octad):
    dual = gale_dual(edge_octad.points)
    for r in range(4):
        for c in range(4):
            s = mpmath.fsum(edge_octad.points[j][c] * dual[j][r] for j in LABELS)
            assert abs(s) < 1e-60
