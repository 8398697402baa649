from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quartic import catalog
from quartic.classify import (TABLE, NetClass, Topology, boundary_divisor_predicates, classify_topology,
                              collision_net, coplanar_octad, definite_member, discriminant, net_classify,
                              quadric_resultant, rank_two_witness, sign_change_witness, twisted_cubic_octad)
from quartic.curve import TernaryQuartic
from quartic.errors import DegenerateError
from quartic.kernel.poly import MPoly
from quartic.vinnikov import find_real_idr

x, y, z = MPoly.gens()

ONE_OVAL = TernaryQuartic.from_poly(
    x**4 + y**4 - z**4 + Fraction(1, 7) * x**3 * y + Fraction(1, 5) * y * z**3
    + Fraction(1, 11) * x * y * z**2 + Fraction(1, 13) * x**2 * z**2)


def test_discriminant_of_fermat():
    assert discriminant(catalog.FERMAT) == 4**27


@pytest.mark.parametrize("poly", [x**4 + y**4, (x**2 + y**2 + z**2) ** 2, x * y * z * (x + y + z)])
def test_singular_quartics_have_zero_discriminant(poly):
    assert discriminant(TernaryQuartic.from_poly(poly)) == 0


@settings(max_examples=5)
@given(st.integers(1, 9), st.integers(-9, 9))
def test_discriminant_scales_with_degree_27(a, b):
    # Δ(c f) = c^27 Δ(f)
    c = Fraction(b or 1, a)
    assert discriminant(catalog.FERMAT.scaled(c)) == c**27 * 4**27


def test_table_has_six_rows():
    assert len(TABLE) == 6
    assert {row[0] for row in TABLE.values()} == {28, 16, 8, 4}


def test_edge_has_four_ovals(edge_rep):
    got = classify_topology(catalog.EDGE, edge_rep)
    assert got.topology == Topology.FOUR_OVALS and got.evidence == (28, 8, 63)


def test_empty_curve(empty_rep):
    got = classify_topology(empty_rep.f, empty_rep)
    assert got.topology == Topology.EMPTY and got.evidence == (4, 0, 15)
    assert got.sign_witness is None


def test_nested_ovals():
    got = classify_topology(catalog.NESTED_OVALS)
    assert got.topology == Topology.TWO_NESTED and got.evidence == (4, None, 15)
    assert got.sign_witness is not None


def test_nested_ovals_with_a_real_representation(nested_classes, nested_normalized):
    rep = find_real_idr(nested_classes).as_detrep(nested_normalized)
    got = classify_topology(nested_normalized, rep)
    assert got.evidence == (4, 0, 15)


def test_one_oval():
    got = classify_topology(ONE_OVAL)
    assert got.topology == Topology.ONE_OVAL and got.evidence == (4, None, 7)


def test_sign_witness_has_the_minority_sign():
    p = sign_change_witness(catalog.NESTED_OVALS)
    assert catalog.NESTED_OVALS(*(Fraction(c) for c in p)) < 0
    assert sign_change_witness(catalog.FERMAT) is None


@pytest.mark.slow
def test_topology_is_projectively_invariant():
    t = [[1, 1, 0], [0, 2, -1], [1, 0, 3]]
    g = catalog.NESTED_OVALS.transform(t).scaled(-Fraction(3, 2))
    assert classify_topology(g).topology == Topology.TWO_NESTED


def test_singular_input_is_refused():
    with pytest.raises(DegenerateError):
        classify_topology(TernaryQuartic.from_poly(x**4 + y**4))


def test_net_with_common_real_point():
    net = net_classify(*catalog.matrix_coefficients(catalog.EDGE_MATRIX))
    assert net.net_class == NetClass.COMMON_REAL_POINT


def test_net_without_singular_quadric():
    net = net_classify(*catalog.matrix_coefficients(catalog.EMPTY_MATRIX))
    assert net.net_class == NetClass.NO_SINGULAR_QUADRIC
    assert definite_member(catalog.matrix_coefficients(catalog.EMPTY_MATRIX)) is None


def test_definite_net(nested_classes, nested_normalized):
    form = find_real_idr(nested_classes)
    rep = form.as_detrep(nested_normalized)
    net = net_classify(*rep.matrices, f=nested_normalized)
    assert net.net_class == NetClass.DEFINITE and not net.low_confidence
    assert net.definite_point is not None


def test_singular_net_is_refused():
    mats = [[[int(i == j and i < 3) for j in range(4)] for i in range(4)],
            [[int(i == j == 3) for j in range(4)] for i in range(4)],
            [[0] * 4 for _ in range(4)]]
    with pytest.raises(DegenerateError):
        net_classify(*mats)


def test_generic_octad_is_off_every_divisor(edge_octad):
    flags = boundary_divisor_predicates(edge_octad)
    assert not (flags.pair_collision or flags.coplanar_four or flags.twisted_cubic)


def test_coplanar_construction():
    points, rep = coplanar_octad(seed=1)
    flags = boundary_divisor_predicates(points)
    assert flags.coplanar_four and (0, 1, 2, 5) in flags.coplanar_sets
    assert rep.f.discriminant() == 0


def test_coplanar_net_has_a_rank_two_member():
    _, rep = coplanar_octad(seed=1)
    assert rank_two_witness(rep.matrices).found


def test_generic_net_has_no_rank_two_member(edge_rep):
    assert not rank_two_witness(edge_rep.matrices).found


def test_collision_construction():
    rep = collision_net(seed=2)
    assert rep.f.discriminant() == 0
    assert boundary_divisor_predicates(rep).pair_collision


def test_twisted_cubic_construction():
    points, rep = twisted_cubic_octad()
    assert boundary_divisor_predicates(points).twisted_cubic
    assert rep.f.discriminant() == 0


def test_quadric_resultant():
    assert quadric_resultant(x * y, x * z, y * z) == 0
    assert quadric_resultant(x * x, y * y, z * z) != 0


@settings(max_examples=5)
@given(st.lists(st.integers(-5, 5), min_size=15, max_size=15))
def test_quadrics_through_a_common_point_have_zero_resultant(cs):
    # every quadric vanishing at (1, 1, 1)
    basis = [x * x - y * y, x * x - z * z, x * y - z * z, x * z - z * z, y * z - z * z]
    qs = [sum((MPoly.constant(c) * b for c, b in zip(cs[5 * k:5 * k + 5], basis)), MPoly({})) for k in range(3)]
    assert quadric_resultant(*qs) == 0
