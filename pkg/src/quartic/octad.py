"""Cayley octads, bitangent matrices and the 36 representation classes.

Labels of octad points are 0-based in code (``0..7``); human-readable labels
such as ``"1358|2467"`` are 1-based.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations

import mpmath

from .bitangents import Bitangent, compute_bitangents
from .detrep import DetRep, determinant_of, normalize_scale
from .errors import CertificateError, DegenerateError
from .kernel import projective
from .kernel.linalg import inverse, nullspace, rank_with_tolerance, solve
from .kernel.poly import MPoly, poly_det, resultant
from .kernel.roots import roots_univariate, to_mp
from .kernel.tolerance import DEFAULT_PROFILE, ToleranceProfile

LABELS = range(8)
_V = ("v0", "v1", "v2")


def label_str(indices) -> str:
    return "".join(str(i + 1) for i in sorted(indices))


# -- the octad ---------------------------------------------------------------------

@dataclass(frozen=True)
class CayleyOctad:
    """Eight labelled points of P^3 with the conjugation permutation.

    ``conjugation[i] = j`` when the complex conjugate of point i is point j;
    it is ``None`` when the point set is not closed under conjugation.
    """

    points: tuple
    source: DetRep | None = None
    conjugation: tuple | None = None
    residual: object = 0

    @property
    def real_points(self) -> list[int]:
        if self.conjugation is None:
            return []
        return [i for i in LABELS if self.conjugation[i] == i]

    @classmethod
    def from_points(cls, points, source: DetRep | None = None,
                    profile: ToleranceProfile = DEFAULT_PROFILE) -> CayleyOctad:
        """Wrap given points (kept in the given order) and work out the conjugation."""
        pts = tuple(_clean_point(p, profile) for p in points)
        if len(pts) != 8:
            raise ValueError("an octad has eight points")
        residual = quadric_residual(source, pts) if source is not None else 0
        return cls(pts, source, conjugation_permutation(pts, profile), residual)


def _clean_point(p, profile):
    tol = profile.eps_residual
    p = projective.normalize(p)
    p = tuple(mpmath.mpc(0 if abs(c.real) <= tol else c.real, 0 if abs(c.imag) <= tol else c.imag) for c in p)
    if all(abs(c.imag) <= profile.eps_residual for c in p):
        p = projective.realify(p)
    return p


def conjugation_permutation(points, profile: ToleranceProfile = DEFAULT_PROFILE):
    perm = []
    for p in points:
        cp = projective.conj(p)
        match = [j for j, q in enumerate(points) if projective.chordal_distance(cp, q) < profile.cluster_radius]
        if len(match) != 1:
            return None
        perm.append(match[0])
    return tuple(perm)


def quadric_residual(rep: DetRep, points):
    """Largest |u M u^T| over the three matrices and the points, relative to the entries."""
    mats = [[[to_mp(v) for v in row] for row in m] for m in rep.matrices]
    scale = max(abs(v) for m in mats for row in m for v in row)
    worst = 0
    for p in points:
        norm2 = mpmath.fsum(abs(c) ** 2 for c in p)
        for m in mats:
            val = mpmath.fsum(p[i] * m[i][j] * p[j] for i in range(4) for j in range(4))
            worst = max(worst, abs(val) / (scale * norm2))
    return worst


def _random_frame(rng: random.Random):
    while True:
        s = [[rng.randint(-5, 5) for _ in range(4)] for _ in range(4)]
        if _int_det(s) != 0:
            return s


def _int_det(m):
    from .kernel.macaulay import bareiss_det
    return bareiss_det(m)


def _quadrics_in_chart(rep: DetRep, s):
    """u M u^T with u = (v0, v1, v2, 1) S, as polynomials in v0, v1, v2."""
    gens = MPoly.gens(_V)
    v = [gens[0], gens[1], gens[2], MPoly.constant(1, _V)]
    u = [sum((v[a] * s[a][i] for a in range(4)), MPoly({}, _V)) for i in range(4)]
    quads = []
    for m in rep.matrices:
        mm = [[to_mp(x) for x in row] for row in m]
        q = MPoly({}, _V)
        for i in range(4):
            for j in range(i, 4):
                coef = mm[i][j] if i == j else 2 * mm[i][j]
                if coef != 0:
                    q = q + u[i] * u[j] * coef
        quads.append(q)
    return quads


def _newton3(quads, z, profile, steps=12):
    jac_polys = [[q.diff(k) for k in range(3)] for q in quads]
    tiny = mpmath.ldexp(1, -profile.precision_bits)
    for _ in range(steps):
        vals = [q(*z) for q in quads]
        jac = [[d(*z) for d in row] for row in jac_polys]
        try:
            step = solve(jac, vals)
        except CertificateError:
            return z
        z = [a - b for a, b in zip(z, step)]
        if max(abs(s) for s in step) < tiny * max(1, max(abs(c) for c in z)):
            break
    return z


def _chart_candidates(quads, profile):
    qa, qb, qc = quads
    r1 = resultant(qa, qb, "v0")
    r2 = resultant(qa, qc, "v0")
    r = resultant(r1, r2, "v1")
    cands = []
    for v2, _ in roots_univariate(r.univariate("v2"), profile):
        r1v = r1.compose([0, MPoly.gen(1, _V), v2])
        coeffs = r1v.univariate("v1")
        while len(coeffs) > 1 and abs(coeffs[-1]) == 0:
            coeffs.pop()
        if len(coeffs) < 2:
            continue
        for v1, _ in roots_univariate(coeffs, profile):
            qv = qa.compose([MPoly.gen(0, _V), v1, v2]).univariate("v0")
            while len(qv) > 1 and abs(qv[-1]) == 0:
                qv.pop()
            if len(qv) < 2:
                continue
            for v0, _ in roots_univariate(qv, profile):
                z = [v0, v1, v2]
                cands.append((sum(abs(q(*z)) for q in quads), z))
    cands.sort(key=lambda c: c[0])
    return cands


def _solve_octad(rep: DetRep, profile: ToleranceProfile, rng: random.Random):
    s = _random_frame(rng)
    quads = _quadrics_in_chart(rep, s)
    scale = max(q.norm() for q in quads)
    found = []
    for _, z in _chart_candidates(quads, profile):
        z = _newton3(quads, z, profile)
        res = max(abs(q(*z)) for q in quads) / (scale * max(1, max(abs(c) for c in z)) ** 2)
        if res > profile.eps_residual:
            continue
        u = [mpmath.fsum(vv * s[a][i] for a, vv in enumerate(list(z) + [1])) for i in range(4)]
        u = projective.normalize(u)
        if all(projective.chordal_distance(u, p) > profile.cluster_radius for p in found):
            found.append(u)
        if len(found) == 8:
            break
    return found


def canonical_order(points, profile: ToleranceProfile) -> list:
    """Real points first (lexicographic), then conjugate pairs, each pair adjacent."""
    pts = [_clean_point(p, profile) for p in points]
    real = sorted((p for p in pts if all(c.imag == 0 for c in p)), key=projective.sort_key)
    rest = [p for p in pts if any(c.imag != 0 for c in p)]
    pairs, used = [], set()
    for i, p in enumerate(rest):
        if i in used:
            continue
        cp = projective.conj(p)
        j = next((j for j, q in enumerate(rest) if j != i and j not in used
                  and projective.chordal_distance(cp, q) < profile.cluster_radius), None)
        if j is None:
            return real + sorted(rest, key=projective.sort_key)
        used.update((i, j))
        first, second = (p, rest[j]) if _positive_imag(p) else (rest[j], p)
        pairs.append((first, second))
    pairs.sort(key=lambda pq: projective.sort_key(pq[0]))
    return real + [p for pair in pairs for p in pair]


def _positive_imag(p) -> bool:
    for c in p:
        if c.imag != 0:
            return c.imag > 0
    return True


def cayley_octad(rep: DetRep, profile: ToleranceProfile = DEFAULT_PROFILE, seed: int = 0) -> CayleyOctad:
    """The eight common zeros of the quadrics of A, B and C, canonically ordered."""
    last = []
    for prof in profile.ladder():
        with prof.workprec():
            rng = random.Random(seed)
            for _ in range(3):
                found = _solve_octad(rep, prof, rng)
                last = found
                if len(found) == 8:
                    pts = canonical_order(found, prof)
                    return CayleyOctad.from_points(pts, rep, prof)
    raise DegenerateError(f"octad degenerate: found {len(last)} isolated points")


# -- bitangent matrix ---------------------------------------------------------------

@dataclass(frozen=True)
class BitangentMatrix:
    """Off-diagonal entries ``O_i M O_j^T``: raw coefficient vectors and normalized lines.

    ``index[(i, j)]`` is the position of the entry's line in ``bitangents``.
    """

    octad: CayleyOctad
    rep: DetRep
    lines: dict
    entries: dict
    index: dict
    bitangents: tuple = field(repr=False)

    def form(self, i: int, j: int) -> MPoly:
        return MPoly.linear_form(self.entries[(min(i, j), max(i, j))])

    def entry(self, i: int, j: int) -> int:
        return self.index[(min(i, j), max(i, j))]

    def triples(self) -> frozenset:
        """The 56 triples {b_ij, b_ik, b_jk} as sets of bitangent indices."""
        return frozenset(frozenset((self.entry(i, j), self.entry(i, k), self.entry(j, k)))
                         for i, j, k in combinations(LABELS, 3))


def _raw_entry(rep: DetRep, p, q):
    out = []
    for m in rep.matrices:
        out.append(mpmath.fsum(p[a] * to_mp(m[a][b]) * q[b] for a in range(4) for b in range(4)))
    return out


def match_line(line, bitangents, profile: ToleranceProfile) -> int:
    hits = [k for k, b in enumerate(bitangents)
            if projective.chordal_distance(line, b.line) < profile.cluster_radius]
    if len(hits) != 1:
        raise CertificateError(f"line matched {len(hits)} bitangents")
    return hits[0]


def bitangent_matrix(rep: DetRep, octad: CayleyOctad, bitangents: list[Bitangent] | None = None,
                     profile: ToleranceProfile = DEFAULT_PROFILE) -> BitangentMatrix:
    """The 28 linear forms ``O_i M O_j^T`` matched one-to-one with the bitangents."""
    if bitangents is None:
        bitangents = compute_bitangents(rep.f, profile)
    with profile.workprec():
        lines, entries, index = {}, {}, {}
        for i, j in combinations(LABELS, 2):
            raw = _raw_entry(rep, octad.points[i], octad.points[j])
            entries[(i, j)] = tuple(raw)
            lines[(i, j)] = projective.normalize(raw)
            index[(i, j)] = match_line(lines[(i, j)], bitangents, profile)
        if len(set(index.values())) != 28:
            raise CertificateError("bitangent matrix entries do not biject onto the bitangents")
    return BitangentMatrix(octad, rep, lines, entries, index, tuple(bitangents))


def principal_minor(bm: BitangentMatrix, labels) -> MPoly:
    labels = list(labels)
    zero = MPoly({})
    mat = [[zero if a == b else bm.form(a, b) for b in labels] for a in labels]
    return determinant_of(mat)


# -- bifid substitutions and the 36 classes ------------------------------------------------

@dataclass(frozen=True)
class RepresentationClass:
    """One of the 36 classes: a representative, its octad (labels follow the
    original octad) and the 56 azygetic triples it owns."""

    rep: DetRep
    octad: CayleyOctad
    bitangent_matrix: BitangentMatrix
    partition: tuple | None

    @property
    def label(self) -> str:
        if self.partition is None:
            return "original"
        rest = [i for i in LABELS if i not in self.partition]
        return f"{label_str(self.partition)}|{label_str(rest)}"

    @property
    def triples(self) -> frozenset:
        return self.bitangent_matrix.triples()


def bifid_matrix(bm: BitangentMatrix, subset) -> list[list[MPoly]]:
    i, j, k, l = sorted(subset)
    b = bm.form
    zero = MPoly({})
    return [
        [zero, b(k, l), b(j, l), b(j, k)],
        [b(k, l), zero, b(i, l), b(i, k)],
        [b(j, l), b(i, l), zero, b(i, j)],
        [b(j, k), b(i, k), b(i, j), zero],
    ]


def bifid_substitution(bm: BitangentMatrix, subset, profile: ToleranceProfile = DEFAULT_PROFILE
                       ) -> RepresentationClass:
    """Hesse's entry permutation of the principal block on ``subset``.

    The new octad has unit vectors at the labels of ``subset`` and, for the
    other labels m, the coordinatewise reciprocal of ``O_m`` written in the
    basis ``O_i, O_j, O_k, O_l``.
    """
    subset = tuple(sorted(subset))
    if len(set(subset)) != 4 or not set(subset) <= set(LABELS):
        raise ValueError("need a 4-subset of the labels 0..7")
    with profile.workprec():
        new = DetRep.from_linear_matrix(bifid_matrix(bm, subset), f=bm.rep.f, profile=profile)
        new = normalize_scale(new.matrices, new.f, profile)
        basis = [bm.octad.points[i] for i in subset]
        inv = inverse(basis)
        pts = [None] * 8
        for pos, lab in enumerate(subset):
            pts[lab] = tuple(mpmath.mpc(int(t == pos)) for t in range(4))
        for m in LABELS:
            if m in subset:
                continue
            w = [mpmath.fsum(bm.octad.points[m][a] * inv[a][c] for a in range(4)) for c in range(4)]
            if any(abs(c) == 0 for c in w):
                raise DegenerateError("octad point lies on a coordinate plane of the frame")
            pts[m] = tuple(1 / c for c in w)
        octad = CayleyOctad.from_points(pts, new, profile)
        if octad.residual > profile.eps_residual:
            raise CertificateError("reciprocal points are not base points of the new net")
        new_bm = bitangent_matrix(new, octad, list(bm.bitangents), profile)
    return RepresentationClass(new, octad, new_bm, subset)


def bifid_partitions() -> list[tuple]:
    """The 35 splittings of the labels into two 4-sets, each named by the half containing 0."""
    return [(0,) + rest for rest in combinations(range(1, 8), 3)]


def all_36_reps(rep: DetRep, profile: ToleranceProfile = DEFAULT_PROFILE,
                bitangents: list[Bitangent] | None = None, octad: CayleyOctad | None = None
                ) -> list[RepresentationClass]:
    """The input class followed by the 35 bifid classes, all pairwise inequivalent."""
    if bitangents is None:
        bitangents = compute_bitangents(rep.f, profile)
    octad = octad or cayley_octad(rep, profile)
    bm = bitangent_matrix(rep, octad, bitangents, profile)
    classes = [RepresentationClass(rep, octad, bm, None)]
    for part in bifid_partitions():
        classes.append(bifid_substitution(bm, part, profile))
    seen = {}
    for k, cls in enumerate(classes):
        key = cls.triples
        if len(key) != 56 or key in seen:
            raise CertificateError("duplicate representation classes (octad numerically unreliable)")
        seen[key] = k
    return classes


def triples_of(rep: DetRep, bitangents, profile: ToleranceProfile = DEFAULT_PROFILE, seed: int = 0):
    octad = cayley_octad(rep, profile, seed)
    return bitangent_matrix(rep, octad, bitangents, profile).triples()


def orbit_classify(candidate: DetRep, reference: list[RepresentationClass],
                   profile: ToleranceProfile = DEFAULT_PROFILE) -> int:
    """Index of the reference class sharing the candidate's 56 azygetic triples."""
    bitangents = list(reference[0].bitangent_matrix.bitangents)
    key = triples_of(candidate, bitangents, profile)
    hits = [k for k, cls in enumerate(reference) if cls.triples == key]
    if len(hits) != 1:
        raise CertificateError(f"candidate matched {len(hits)} classes")
    return hits[0]


# -- octad variety ---------------------------------------------------------------------------

def _point_list(points):
    return [[to_mp(c) for c in p] for p in points]


def plucker(points) -> dict:
    """All 70 maximal minors p_ijkl (0-based index tuples)."""
    pts = _point_list(points)
    # expansion rather than LU: mpmath's pivoting breaks on an all-zero column
    return {idx: poly_det([pts[i] for i in idx]) for idx in combinations(LABELS, 4)}


_OCTAD_EQUATIONS_TEXT = """
1234 1256 3578 4678 = 5678 3478 1246 1235
1234 1257 3568 4678 = 5678 3468 1247 1235
1234 1267 3568 4578 = 5678 3458 1247 1236
1234 1356 2578 4678 = 5678 2478 1346 1235
1234 1457 2568 3678 = 5678 2368 1347 1245
1234 1467 2568 3578 = 5678 2358 1347 1246
1235 1267 3468 4578 = 4678 3458 1257 1236
1235 1347 2468 5678 = 4678 2568 1357 1234
1235 1367 2468 4578 = 4678 2458 1357 1236
1235 1467 2468 3578 = 4678 2358 1357 1246
1236 1347 2458 5678 = 4578 2568 1367 1234
1236 1456 2478 3578 = 4578 2378 1356 1246
1245 1267 3468 3578 = 3678 3458 1257 1246
1245 1346 2378 5678 = 3678 2578 1456 1234
1245 1356 2378 4678 = 3678 2478 1456 1235
1245 1357 2368 4678 = 3678 2468 1457 1235
1245 1367 2368 4578 = 3678 2458 1457 1236
1246 1357 2368 4578 = 3578 2468 1457 1236
1246 1357 2458 3678 = 3578 2468 1367 1245
1247 1357 2368 4568 = 3568 2468 1457 1237
1346 1357 2458 2678 = 2578 2468 1367 1345
"""


def _parse_equations():
    eqs = []
    for line in _OCTAD_EQUATIONS_TEXT.strip().splitlines():
        lhs, rhs = line.split("=")
        parse = lambda side: tuple(tuple(int(ch) - 1 for ch in w) for w in side.split())
        eqs.append((parse(lhs), parse(rhs)))
    return tuple(eqs)


OCTAD_EQUATIONS = _parse_equations()


@dataclass(frozen=True)
class OctadCheck:
    is_octad: bool
    residuals: tuple
    violated: tuple
    quadric_nullity: int


def _normalized_plucker(points, profile):
    pts = [projective.normalize(p) for p in points]
    p = plucker(pts)
    top = max(abs(v) for v in p.values())
    if top == 0:
        raise DegenerateError("degenerate configuration: all minors vanish")
    return {k: v / top for k, v in p.items()}


def octad_check(points, profile: ToleranceProfile = DEFAULT_PROFILE, tol=None) -> OctadCheck:
    """Evaluate the 21 quartic Plücker equations characterising Cayley octads."""
    with profile.workprec():
        tol = tol if tol is not None else profile.eps_residual
        p = _normalized_plucker(points, profile)
        if min(abs(v) for v in p.values()) < tol:
            raise DegenerateError("degenerate configuration: four points are coplanar")
        residuals = []
        for lhs, rhs in OCTAD_EQUATIONS:
            left = mpmath.fprod(p[i] for i in lhs)
            right = mpmath.fprod(p[i] for i in rhs)
            residuals.append(abs(left - right))
        violated = tuple(k for k, r in enumerate(residuals) if r >= tol)
        rows = [[pt[0] ** e[0] * pt[1] ** e[1] * pt[2] ** e[2] * pt[3] ** e[3] for e in _QUADRICS_P3]
                for pt in _point_list(points)]
        nullity = 10 - rank_with_tolerance(rows, profile)
    return OctadCheck(not violated, tuple(residuals), violated, nullity)


def equation_text(k: int) -> str:
    lhs, rhs = OCTAD_EQUATIONS[k]
    fmt = lambda side: " ".join("p" + label_str(i) for i in side)
    return f"{fmt(lhs)} = {fmt(rhs)}"


def is_cayley_octad(points, profile: ToleranceProfile = DEFAULT_PROFILE, tol=None) -> bool:
    return octad_check(points, profile, tol).is_octad


_QUADRICS_P3 = [e for e in ((a, b, c, 2 - a - b - c) for a in range(3) for b in range(3) for c in range(3))
                if e[3] >= 0]


def quadrics_through(points, profile: ToleranceProfile = DEFAULT_PROFILE) -> list[list]:
    """Symmetric 4x4 matrices spanning the quadrics through the points."""
    rows = [[pt[0] ** e[0] * pt[1] ** e[1] * pt[2] ** e[2] * pt[3] ** e[3] for e in _QUADRICS_P3]
            for pt in _point_list(points)]
    out = []
    for vec in nullspace(rows, profile):
        m = [[mpmath.mpf(0)] * 4 for _ in range(4)]
        for c, e in zip(vec, _QUADRICS_P3):
            idx = [i for i in range(4) for _ in range(e[i])]
            if idx[0] == idx[1]:
                m[idx[0]][idx[0]] = c
            else:
                m[idx[0]][idx[1]] = m[idx[1]][idx[0]] = c / 2
        out.append(m)
    return out


def twisted_cubic_residuals(points, profile: ToleranceProfile = DEFAULT_PROFILE) -> list:
    """White's conditions for each choice of extra index and six further points."""
    p = _normalized_plucker(points, profile)

    def q(*idx):
        key = tuple(sorted(idx))
        sign = _perm_sign(idx)
        return sign * p[key]

    out = []
    for extra in LABELS:
        others = [i for i in LABELS if i != extra]
        for six in combinations(others, 6):
            a = six
            val = (q(a[0], a[1], a[2], extra) * q(a[0], a[3], a[4], extra) * q(a[1], a[3], a[5], extra)
                   * q(a[2], a[4], a[5], extra)
                   - q(a[0], a[1], a[3], extra) * q(a[0], a[2], a[4], extra) * q(a[1], a[2], a[5], extra)
                   * q(a[3], a[4], a[5], extra))
            out.append(abs(val))
    return out


def _perm_sign(idx) -> int:
    idx = list(idx)
    sign = 1
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] > idx[j]:
                sign = -sign
    return sign


def twisted_cubic_predicate(points, profile: ToleranceProfile = DEFAULT_PROFILE, tol=None) -> bool:
    with profile.workprec():
        tol = tol if tol is not None else profile.eps_residual
        return max(twisted_cubic_residuals(points, profile)) < tol


def eighth_point(seven) -> tuple:
    """The point completing seven points (first five the standard frame) to a Cayley octad."""
    frame = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (1, 1, 1, 1)]
    seven = [tuple(p) for p in seven]
    if len(seven) != 7:
        raise ValueError("need seven points")
    if not all(_proportional(p, e) for p, e in zip(seven[:5], frame)):
        raise ValueError("the first five points must be the standard frame")
    a6, b6, c6, d6 = seven[5]
    a7, b7, c7, d7 = seven[6]

    def coord(p6, q6, r6, p7, q7, r7):
        num = p6 * q7 - p6 * r7 - q6 * p7 + q6 * r7 + r6 * p7 - r6 * q7
        den = (p6 * q6 * p7 * r7 - p6 * q6 * q7 * r7 - p6 * r6 * p7 * q7 + p6 * r6 * q7 * r7
               + q6 * r6 * p7 * q7 - q6 * r6 * p7 * r7)
        if den == 0:
            raise DegenerateError("seven points non-generic")
        if isinstance(num, int) and isinstance(den, int):
            return Fraction(num, den)
        return num / den

    return (coord(b6, c6, d6, b7, c7, d7), coord(a6, c6, d6, a7, c7, d7),
            coord(a6, b6, d6, a7, b7, d7), coord(a6, b6, c6, a7, b7, c7))


def _proportional(p, q) -> bool:
    return all(p[i] * q[j] == p[j] * q[i] for i in range(4) for j in range(4)) and any(p)


# -- Gale duality ---------------------------------------------------------------------------

def frame_normalize(points) -> list:
    """Apply the projective map sending the first five points to the standard frame."""
    pts = _point_list(points)
    base = pts[:4]
    inv = inverse(base)  # rows of base are points; coords of p in that basis: p inv
    coords5 = [mpmath.fsum(pts[4][a] * inv[a][c] for a in range(4)) for c in range(4)]
    out = []
    for p in pts:
        w = [mpmath.fsum(p[a] * inv[a][c] for a in range(4)) / coords5[c] for c in range(4)]
        out.append(projective.normalize(w))
    return out


def gale_dual(points, profile: ToleranceProfile = DEFAULT_PROFILE) -> list:
    """Columns of a 4x8 matrix whose rows span the kernel of the 4x8 point matrix."""
    with profile.workprec():
        pts = _point_list(points)
        rows = [[pts[j][i] for j in LABELS] for i in range(4)]
        kernel = nullspace(rows, profile)
    if len(kernel) != 4:
        raise DegenerateError("points are not in general position")
    return [[kernel[r][j] for r in range(4)] for j in LABELS]


def projectively_equivalent(p, q, profile: ToleranceProfile = DEFAULT_PROFILE) -> bool:
    with profile.workprec():
        a, b = frame_normalize(p), frame_normalize(q)
        return all(projective.chordal_distance(x, y) < profile.cluster_radius for x, y in zip(a, b))


def is_self_associated(points, relabel=None, profile: ToleranceProfile = DEFAULT_PROFILE) -> bool:
    """Gale self-duality of the labelled configuration, optionally after relabelling the dual."""
    with profile.workprec():
        dual = gale_dual(points, profile)
        if relabel is not None:
            dual = [dual[relabel[i]] for i in LABELS]
        return projectively_equivalent(points, dual, profile)


def real_bitangent_count_from_octad(octad: CayleyOctad) -> int:
    k2 = len(octad.real_points)
    k = k2 // 2
    return 2 * k * k - 2 * k + 4


def find_permutations(points, target, profile: ToleranceProfile = DEFAULT_PROFILE):
    """Label maps sending ``points`` onto ``target`` projectively (slow, for tests)."""
    for perm in permutations(LABELS):
        if projectively_equivalent([points[i] for i in perm], target, profile):
            yield perm
