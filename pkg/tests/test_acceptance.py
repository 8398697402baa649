"""One test (or a few named parts) per acceptance criterion.

``conftest.py`` turns the outcomes into a pass/fail summary, one line per criterion.
"""

import random
import time
from fractions import Fraction
from itertools import combinations

import mpmath
import pytest

from quartic import catalog
from quartic.bitangents import compute_bitangents, syzygy_census
from quartic.classify import (Topology, boundary_divisor_predicates, classify_topology, coplanar_octad, discriminant, quadric_resultant,
                              rank_two_witness)
from quartic.curve import TernaryQuartic
from quartic.errors import DegenerateError
from quartic.dixon import dixon_detrep
from quartic.kernel import projective
from quartic.kernel.poly import MPoly
from quartic.octad import (LABELS, bifid_partitions, bifid_substitution, cayley_octad, eighth_point,
                           octad_check, orbit_classify)
from quartic.spectrahedron import (k4_rows, rank3_vertices, rank_statistics, sdp_maximize, steiner_graph,
                                   sum_kernel)
from quartic.steiner import gram_from_steiner, steiner_by_name
from quartic.vinnikov import find_real_idr

x, y, z = MPoly.gens()
TIGHT = mpmath.mpf(10) ** -30


def q(a, b=0):
    """Gaussian rational as an mpc."""
    return mpmath.mpc(mpmath.mpf(Fraction(a).numerator) / Fraction(a).denominator,
                      mpmath.mpf(Fraction(b).numerator) / Fraction(b).denominator)


def match_labels(reference, points):
    """Index of our octad point nearest to each reference point, with the worst distance."""
    pairs = [min((projective.chordal_distance(p, r), k) for k, p in enumerate(points)) for r in reference]
    labels = [k for _, k in pairs]
    assert sorted(labels) == list(LABELS)
    return labels, max(d for d, _ in pairs)


def index_of(bitangents, coeffs):
    return next(k for k, b in enumerate(bitangents) if projective.chordal_distance(b.line, coeffs) < TIGHT)


# Edge quartic: the octad of its integer representation, in the frame of that representation
EDGE_OCTAD = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1),
              (-1, 3, 1, -1), (1, -1, 3, -1), (1, 1, 1, 3), (3, 1, -1, -1)]

# the empty curve given by catalog.EMPTY_MATRIX: its octad, four conjugate pairs
EMPTY_OCTAD = [
    (q(0, 1), q(1, 1), 0, 0), (q(0, -1), q(1, -1), 0, 0),
    (0, 0, q(0, 1), q(1, 1)), (0, 0, q(0, -1), q(1, -1)),
    (q(-6, 4), q(-4, 4), q(-3, 2), q(1, -1)), (q(-6, -4), q(-4, -4), q(-3, -2), q(1, 1)),
    (q(3, 2), q(7, -1), q(Fraction(-86, 39), Fraction(-4, 13)), q(Fraction(4, 39), Fraction(-20, 39))),
    (q(3, -2), q(7, 1), q(Fraction(-86, 39), Fraction(4, 13)), q(Fraction(4, 39), Fraction(20, 39))),
]

# the Gram matrix of the Steiner complex {1,3,5,8} in the labelling of EMPTY_OCTAD, divided by 288
EMPTY_GRAM_288 = [
    [45500, 3102, -9861, 5718, -9246, 4956],
    [3102, 288, -747, 882, -18, -144],
    [-9861, -747, 3528, -864, -1170, -504],
    [5718, 882, -864, 4440, 1104, -2412],
    [-9246, -18, -1170, 1104, 11814, -5058],
    [4956, -144, -504, -2412, -5058, 3582],
]

# real normal form of 2x^4 + y^4 + z^4 - 3x^2y^2 - 3x^2z^2 + y^2z^2
IDR_A = mpmath.mpf("-0.57464203209296160548032752478263071485849363449367")
IDR_B = mpmath.mpf("1.03492595196395554058118944258225904539129257996969")
IDR_C = mpmath.mpf("0.69970597091301262923557093892256027951096114611925")
IDR_D = mpmath.mpf("0.4800486503802432010856027835498806214572648351951")

FERMAT_LAMBDA = [Fraction(-867799528369, 6890409751681), Fraction(-7785115393679, 13780819503362),
                 Fraction(-2624916076477, 6890409751681), Fraction(1018287438360, 6890409751681),
                 Fraction(2368982554265, 6890409751681), Fraction(562671279961, 6890409751681)]

ONE_OVAL = TernaryQuartic.from_poly(
    x**4 + y**4 - z**4 + Fraction(1, 7) * x**3 * y + Fraction(1, 5) * y * z**3
    + Fraction(1, 11) * x * y * z**2 + Fraction(1, 13) * x**2 * z**2)


@pytest.fixture(scope="module")
def empty_labels(empty_rep):
    labels, dist = match_labels(EMPTY_OCTAD, cayley_octad(empty_rep).points)
    assert dist < TIGHT
    return labels


def steiner_name(labels, reference_set):
    """Our name for the complex of a 4-set given in the reference labelling."""
    mine = sorted(labels[i - 1] + 1 for i in reference_set)
    rest = [k for k in range(1, 9) if k not in mine]
    return steiner_by_name("".join(map(str, mine)) + "|" + "".join(map(str, rest))).name


# -- 1 -----------------------------------------------------------------------------------------

def test_criterion_01_bitangent_census():
    start = time.perf_counter()
    bts = compute_bitangents(catalog.EDGE)
    elapsed = time.perf_counter() - start
    assert len(bts) == 28 and all(b.is_real for b in bts)
    # x+2y, 2x+z, y-2z, x-2y, y+2z, -2x+z
    for line in [(1, 2, 0), (2, 0, 1), (0, 1, -2), (1, -2, 0), (0, 1, 2), (-2, 0, 1)]:
        assert min(projective.chordal_distance(b.line, line) for b in bts) < TIGHT
    assert elapsed < 30, f"{elapsed:.1f} s"


# -- 2 -----------------------------------------------------------------------------------------

def test_criterion_02_syzygy_counts(edge_bitangents):
    assert syzygy_census(catalog.EDGE, edge_bitangents) == (1260, 2016)


# -- 3 -----------------------------------------------------------------------------------------

@pytest.fixture(scope="module")
def edge_triple(edge_bitangents):
    # the top-left entry of the Edge matrix is (y+2z)(-2x+z)(x-2y) up to scale
    return tuple(index_of(edge_bitangents, c) for c in ((0, 1, 2), (-2, 0, 1), (1, -2, 0)))


def test_criterion_03_dixon__class_of_the_edge_matrix(edge_bitangents, edge_classes, edge_rep, edge_triple):
    rep = dixon_detrep(catalog.EDGE, bitangents=edge_bitangents, triple=edge_triple)
    assert rep.residual < 1e-60
    assert orbit_classify(rep, edge_classes) == orbit_classify(edge_rep, edge_classes) == 0


def test_criterion_03_dixon__seeded_runs(edge_bitangents, edge_classes):
    a = dixon_detrep(catalog.EDGE, bitangents=edge_bitangents, seed=0)
    b = dixon_detrep(catalog.EDGE, bitangents=edge_bitangents, seed=0)
    assert a.matrices == b.matrices
    assert 0 <= orbit_classify(a, edge_classes) < 36


# -- 4 -----------------------------------------------------------------------------------------

def test_criterion_04_octad_regression(edge_octad, edge_bm):
    labels, dist = match_labels(EDGE_OCTAD, edge_octad.points)
    assert dist < TIGHT
    i, j = sorted((labels[4], labels[5]))
    # the entry is proportional to 24y + 12z
    assert projective.chordal_distance(edge_bm.lines[(i, j)], (0, 24, 12)) < TIGHT


# -- 5 -----------------------------------------------------------------------------------------

def test_criterion_05_thirty_six_classes__pairwise_inequivalent(edge_classes):
    assert len(edge_classes) == 36
    assert [orbit_classify(cls.rep, edge_classes) for cls in edge_classes] == list(range(36))


def test_criterion_05_thirty_six_classes__complements(edge_bm, edge_classes):
    partitions = random.Random(0).sample(list(bifid_partitions()), 5)
    for block in partitions:
        complement = tuple(i for i in LABELS if i not in block)
        a = bifid_substitution(edge_bm, block)
        b = bifid_substitution(edge_bm, complement)
        assert orbit_classify(a.rep, edge_classes) == orbit_classify(b.rep, edge_classes)


# -- 6 -----------------------------------------------------------------------------------------

def form_constants(form):
    """Scale-free constants of a real normal form: (u, sorted nonzero |R_ij| times 2^(1/4), zeros)."""
    mags = sorted(abs(d) for d in form.D)
    u = mags[-1] / mags[0]
    off = sorted(abs(form.R[i][j]) for i in range(4) for j in range(i + 1, 4))
    # the reference form has diagonal (ux +- y, x +- y); bringing it to x I + y D + z R
    # divides the mixed entries by u^(1/2) = 2^(1/4)
    return u, [v * mpmath.root(2, 4) for v in off[2:]], off[:2]


def test_criterion_06_vinnikov__real_form(nested_classes, nested_normalized):
    form = find_real_idr(nested_classes)
    assert form is not None and form.is_real and form.residual < 1e-60
    u, _, _ = form_constants(form)
    assert abs(u - mpmath.sqrt(2)) < TIGHT


def test_criterion_06_vinnikov__constants(nested_forms):
    target = sorted([abs(IDR_A), IDR_B, IDR_C, IDR_D])
    matches = []
    for k, form in enumerate(nested_forms):
        if not form.is_real:
            continue
        u, entries, zeros = form_constants(form)
        if (max(zeros) < 1e-60 and abs(u - mpmath.sqrt(2)) < TIGHT
                and max(abs(a - b) for a, b in zip(entries, target)) < TIGHT):
            matches.append(k)
    assert matches


# -- 7 -----------------------------------------------------------------------------------------

def test_criterion_07_edge_non_reality(edge_classes):
    from quartic.vinnikov import all_idr_forms

    forms = all_idr_forms(edge_classes)
    assert find_real_idr(edge_classes) is None
    assert not any(f.is_real for f in forms)
    for form in forms:
        for d in form.D:
            assert abs(d**4 - Fraction(34, 25) * d**2 + 1) < TIGHT


# -- 8 -----------------------------------------------------------------------------------------

def test_criterion_08_gram_regression__exact_matrix(empty_rep, empty_bm, empty_labels):
    cx = steiner_by_name(steiner_name(empty_labels, (1, 3, 5, 8)))
    g = gram_from_steiner(empty_rep.f, empty_bm, cx)
    assert g.exact and g.rank == 3
    assert [list(r) for r in g.G] == [[288 * v for v in row] for row in EMPTY_GRAM_288]


def test_criterion_08_gram_regression__counts(empty_grams):
    assert len(empty_grams) == 63 and all(g.rank == 3 for g in empty_grams)
    assert sum(g.is_real for g in empty_grams) == 15
    assert sum(g.is_psd for g in empty_grams) == 8


# -- 9 -----------------------------------------------------------------------------------------

def test_criterion_09_steiner_graph__two_k4(empty_grams, empty_rep):
    conj = cayley_octad(empty_rep).conjugation
    graph = steiner_graph(rank3_vertices(empty_grams, conj))
    assert graph.is_two_k4()
    rows = {frozenset(steiner_name(LABELS, [i + 1 for i in lab]) for lab in row) for row in k4_rows(conj)}
    assert {frozenset(c) for c in graph.components} == rows


def test_criterion_09_steiner_graph__kernel(empty_grams, empty_labels):
    by_name = {g.complex_label.name: g for g in empty_grams}
    ga = by_name[steiner_name(empty_labels, (1, 3, 5, 8))]
    gb = by_name[steiner_name(empty_labels, (1, 4, 5, 7))]
    kernel = sum_kernel(ga, gb)
    assert len(kernel) == 1
    v = [mpmath.re(c) for c in kernel[0]]
    w = [11355, -4241, 47584, 8325, 28530, 36706]
    scale = v[0] / w[0]
    assert max(abs(a - scale * b) for a, b in zip(v, w)) < mpmath.mpf(10) ** -20 * abs(scale) * max(w)


# -- 10 ----------------------------------------------------------------------------------------

def test_criterion_10_sdp_regression():
    start = time.perf_counter()
    res = sdp_maximize(catalog.FERMAT, [159, -9, 34, 73, 105, 86])
    elapsed = time.perf_counter() - start
    assert res.rank == 5
    assert res.lambda_exact == FERMAT_LAMBDA
    assert elapsed < 10, f"{elapsed:.1f} s"


# -- 11 ----------------------------------------------------------------------------------------

@pytest.fixture(scope="module")
def rank_stats():
    return rank_statistics(500, seed=0, match_steiner=True)


def test_criterion_11_rank_statistics__rank_four_band(rank_stats):
    share = rank_stats.fraction(4)
    assert 0.85 <= share <= 0.99, f"rank 4 in {100 * share:.1f}% of samples, counts {rank_stats.counts}"


def test_criterion_11_rank_statistics__extreme_ranks_occur(rank_stats):
    assert rank_stats.counts[3] >= 1 and rank_stats.counts[5] >= 1
    assert rank_stats.total == 500


def test_criterion_11_rank_statistics__rank_three_are_steiner(rank_stats):
    distances = [s.steiner_distance for s in rank_stats.samples if s.result.rank == 3]
    assert distances and max(distances) < 1e-8


# -- 12 ----------------------------------------------------------------------------------------

def test_criterion_12_classification__edge(edge_rep):
    got = classify_topology(catalog.EDGE, edge_rep)
    assert (got.topology, got.evidence) == (Topology.FOUR_OVALS, (28, 8, 63))


def test_criterion_12_classification__nested(nested_classes, nested_normalized):
    rep = find_real_idr(nested_classes).as_detrep(nested_normalized)
    got = classify_topology(nested_normalized, rep)
    assert (got.topology, got.evidence) == (Topology.TWO_NESTED, (4, 0, 15))


def test_criterion_12_classification__empty(empty_rep):
    got = classify_topology(empty_rep.f, empty_rep)
    assert (got.topology, got.evidence) == (Topology.EMPTY, (4, 0, 15))


def test_criterion_12_classification__one_oval():
    got = classify_topology(ONE_OVAL)
    assert got.topology == Topology.ONE_OVAL and got.real_steiner == 7 and got.real_bitangents == 4


# -- 13 ----------------------------------------------------------------------------------------

FRAME = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (1, 1, 1, 1)]


def random_rational(rng):
    return Fraction(rng.choice([-1, 1]) * rng.randint(1, 20), rng.randint(1, 20))


def test_criterion_13_octad_variety__eighth_point():
    rng = random.Random(13)
    done = 0
    while done < 20:
        seven = FRAME + [tuple(random_rational(rng) for _ in range(4)) for _ in range(2)]
        try:
            points = seven + [eighth_point(seven)]
            check = octad_check(points)
        except DegenerateError:  # the draw put four points in a plane
            continue
        assert check.is_octad and len(check.residuals) == 21
        assert max(check.residuals) < mpmath.mpf(10) ** -40
        done += 1


def test_criterion_13_octad_variety__non_octads():
    rng = random.Random(31)
    for _ in range(20):
        points = [tuple(random_rational(rng) for _ in range(4)) for _ in range(8)]
        check = octad_check(points)
        assert not check.is_octad and check.violated


# -- 14 ----------------------------------------------------------------------------------------

def test_criterion_14_discriminant_predicates__exact():
    assert discriminant(TernaryQuartic.from_poly(x**4 + y**4)) == 0
    assert discriminant(catalog.EDGE) != 0
    assert quadric_resultant(x * y, x * z, y * z) == 0


def test_criterion_14_discriminant_predicates__coplanar_octad():
    points, rep = coplanar_octad(seed=0)
    assert boundary_divisor_predicates(points).coplanar_four
    assert rep.f.discriminant() == 0
    assert rank_two_witness(rep.matrices).found
