import random
from fractions import Fraction
from itertools import combinations

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quartic import catalog
from quartic.errors import InfeasibleError
from quartic.kernel.tolerance import ToleranceProfile
from quartic.octad import cayley_octad
from quartic.spectrahedron import (_rank_from_eigs, gram_param, k4_rows, lambda_of, psd_labels,
                                   random_positive_quartic, rank3_vertices, rank_statistics, sdp_maximize,
                                   steiner_graph, steiner_grams)
from quartic.steiner import gram_polynomial

FLOAT = ToleranceProfile(precision_bits=53)
PAIRED = (1, 0, 3, 2, 5, 4, 7, 6)

rationals = st.fractions(min_value=-100, max_value=100, max_denominator=100)


@pytest.fixture(scope="module")
def empty_vertices(empty_grams, empty_rep):
    return rank3_vertices(empty_grams, cayley_octad(empty_rep).conjugation)


def test_fermat_at_zero_is_diagonal():
    g = gram_param(catalog.FERMAT, [0] * 6)
    assert g == [[int(i == j and i < 3) for j in range(6)] for i in range(6)]


@given(st.lists(rationals, min_size=6, max_size=6))
def test_parametrization_is_exact(lam):
    for f in (catalog.EDGE, catalog.NESTED_OVALS):
        g = gram_param(f, lam)
        assert all(g[i][j] == g[j][i] for i in range(6) for j in range(6))
        assert gram_polynomial(g) == f.poly
        assert lambda_of(g) == lam


def test_steiner_grams_lie_on_the_slice(empty_grams, empty_rep):
    for g in (g for g in empty_grams if g.is_real):
        exact = [[Fraction(mpmath.nstr(mpmath.re(v), 60)) if not isinstance(v, Fraction) else v for v in row]
                 for row in g.G] if not g.exact else [list(r) for r in g.G]
        assert gram_param(empty_rep.f, lambda_of(exact)) == exact


def test_zero_objective_returns_an_interior_point():
    res = sdp_maximize(catalog.FERMAT, [0] * 6, FLOAT)
    assert min(res.eigenvalues) > 0 and res.rank == 6


def test_nonnegativity_is_necessary():
    with pytest.raises(InfeasibleError, match="sum of squares"):
        sdp_maximize(catalog.EDGE, [1, 0, 0, 0, 0, 0], FLOAT)


@settings(max_examples=6)
@given(st.integers(0, 2**32))
def test_random_optimum_rank(seed):
    rng = random.Random(seed)
    f = random_positive_quartic(rng)
    res = sdp_maximize(f, [rng.gauss(0, 1) for _ in range(6)], FLOAT)
    assert res.rank in (3, 4, 5)
    assert min(res.eigenvalues) > -1e-6 * max(res.eigenvalues)
    assert res.backend == "float64"


def test_optimum_does_not_depend_on_the_start():
    rng = random.Random(7)
    f = random_positive_quartic(rng)
    c = [rng.gauss(0, 1) for _ in range(6)]
    a = sdp_maximize(f, c, FLOAT)
    # restart from a point pulled halfway back towards the analytic centre
    centre = sdp_maximize(f, [0] * 6, FLOAT).lambda_opt
    start = [(u + v) / 2 for u, v in zip(a.lambda_opt, centre)]
    b = sdp_maximize(f, c, FLOAT, start=start)
    assert abs(a.objective_value - b.objective_value) <= 10 * (a.duality_gap + b.duality_gap) + 1e-9 * abs(
        a.objective_value)


def test_rank_from_eigenvalues():
    assert _rank_from_eigs([5.0, 2.0, 1.0, 1e-14, 1e-15, 1e-16], 2**13) == 3
    assert _rank_from_eigs([5.0, 2.0, 0.0, 0.0, 0.0, 0.0], 2**13) == 2
    # the largest gap wins over the first large one
    assert _rank_from_eigs([1.0, 1e-5, 1e-6, 1e-7, 1e-20, 1e-21], 2**13) == 4
    assert _rank_from_eigs([3.0, 2.0, 1.0, 1.0, 1.0, 1.0], 2**13) == 6


def test_psd_labels_for_four_pairs():
    names = sorted("".join(str(i + 1) for i in lab) for lab in psd_labels(PAIRED))
    assert names == sorted(["1357", "1368", "1458", "1467", "1358", "1367", "1457", "1468"])


def test_rows_pair_labels_meeting_twice():
    rows = k4_rows(PAIRED)
    assert [len(r) for r in rows] == [4, 4]
    for row in rows:
        assert all(len(set(a) & set(b)) == 2 for a, b in combinations(row, 2))


def test_eight_vertices(empty_vertices):
    assert len(empty_vertices) == 8
    assert all(g.rank == 3 and g.is_psd for g in empty_vertices)


def test_steiner_graph_is_two_k4(empty_vertices, empty_rep):
    graph = steiner_graph(empty_vertices)
    assert graph.is_two_k4()
    assert set(graph.edge_ranks.values()) == {5}
    # edges exactly between labels sharing two points
    conj = cayley_octad(empty_rep).conjugation
    labels = {g.complex_label.name: set(g.complex_label.label) for g in empty_vertices}
    for a, b in combinations(labels, 2):
        assert graph.graph.has_edge(a, b) == (len(labels[a] & labels[b]) == 2)
    assert sorted(sorted(c) for c in graph.components) == sorted(
        sorted(steiner_name(lab) for lab in row) for row in k4_rows(conj))


def steiner_name(label):
    rest = [i for i in range(8) if i not in label]
    return "".join(str(i + 1) for i in label) + "|" + "".join(str(i + 1) for i in rest)


@pytest.mark.slow
def test_fermat_has_rank_four_edges():
    grams, conj = steiner_grams(catalog.FERMAT)
    graph = steiner_graph(rank3_vertices(grams, conj))
    assert graph.graph.number_of_nodes() == 8
    assert 4 in graph.edge_ranks.values()


def test_rank_statistics_are_reproducible():
    a = rank_statistics(4, seed=3)
    b = rank_statistics(4, seed=3)
    assert a.counts == b.counts and a.total == 4
    assert [s.result.lambda_opt for s in a.samples] == [s.result.lambda_opt for s in b.samples]


def test_rank_statistics_reject_zero_samples():
    with pytest.raises(ValueError):
        rank_statistics(0)
