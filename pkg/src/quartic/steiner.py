"""Steiner complexes of bitangents and the 63 rank-3 Gram matrices.

A Gram matrix G of f satisfies ``f = v^T G v`` with
``v = (x^2, y^2, z^2, xy, xz, yz)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import mpmath

from .curve import TernaryQuartic
from .errors import CertificateError, DegenerateError
from .kernel import projective
from .kernel.linalg import (default_denominator_bound, inverse, lstsq, nullspace, rank_with_tolerance,
                            rationalize, transpose, matmul)
from .kernel.poly import QUADRIC_BASIS, MPoly
from .kernel.roots import roots_univariate, to_mp
from .kernel.tolerance import DEFAULT_PROFILE, ToleranceProfile
from .octad import LABELS, BitangentMatrix, label_str, match_line

# (x^2, y^2, z^2, xy, xz, yz) as exponent vectors
GRAM_BASIS = ((2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 0), (1, 0, 1), (0, 1, 1))


@dataclass(frozen=True)
class SteinerComplex:
    """``kind`` is ``"V"`` (label a 2-set) or ``"||"`` (label the 4-set containing label 0).

    ``pairs`` holds six pairs of octad label pairs, e.g. ``((0, 2), (1, 2))``.
    """

    kind: str
    label: tuple
    pairs: tuple
    is_real: bool

    @property
    def name(self) -> str:
        if self.kind == "V":
            return label_str(self.label)
        rest = [i for i in LABELS if i not in self.label]
        return f"{label_str(self.label)}|{label_str(rest)}"

    def bitangent_pairs(self, bm: BitangentMatrix) -> list[tuple[int, int]]:
        return [(bm.entry(*a), bm.entry(*b)) for a, b in self.pairs]


def _vee_pairs(i, j):
    return tuple(((min(i, k), max(i, k)), (min(j, k), max(j, k))) for k in LABELS if k not in (i, j))


def _bar_pairs(part):
    rest = tuple(k for k in LABELS if k not in part)
    pairs = []
    for block in (part, rest):
        a, b, c, d = block
        pairs += [((a, b), (c, d)), ((a, c), (b, d)), ((a, d), (b, c))]
    return tuple(pairs)


def _fixed(labels, perm) -> bool:
    return perm is not None and {perm[i] for i in labels} == set(labels)


def enumerate_steiner(conjugation=None) -> list[SteinerComplex]:
    """All 63 Steiner complexes: 28 of type V then 35 of type ||.

    ``conjugation`` is the octad's conjugation permutation (or an octad);
    a complex is real when its label is fixed by it.
    """
    perm = getattr(conjugation, "conjugation", conjugation)
    out = []
    for i, j in combinations(LABELS, 2):
        out.append(SteinerComplex("V", (i, j), _vee_pairs(i, j), _fixed((i, j), perm)))
    for rest in combinations(range(1, 8), 3):
        part = (0,) + rest
        comp = tuple(k for k in LABELS if k not in part)
        real = perm is not None and (_fixed(part, perm) or {perm[i] for i in part} == set(comp))
        out.append(SteinerComplex("||", part, _bar_pairs(part), real))
    return out


def steiner_by_name(name: str) -> SteinerComplex:
    """Look up a complex by its 1-based name, e.g. ``"12"`` or ``"1358|2467"``."""
    first = name.split("|")[0]
    labels = tuple(sorted(int(ch) - 1 for ch in first))
    if "|" in name and 0 not in labels:
        labels = tuple(k for k in LABELS if k not in labels)
    for cx in enumerate_steiner():
        if cx.label == labels:
            return cx
    raise ValueError(f"unknown Steiner complex {name!r}")


# -- Gram matrices ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GramMatrix:
    G: tuple
    rank: int
    is_real: bool
    is_psd: bool
    complex_label: SteinerComplex | None
    residual: object = 0
    exact: bool = False

    def quartic_form(self) -> MPoly:
        return gram_polynomial(self.G)


def quadric_vector(q: MPoly) -> list:
    """Coefficients of a quadric in the Gram basis."""
    return [q.coefficient(e) for e in GRAM_BASIS]


def gram_polynomial(g) -> MPoly:
    """The quartic ``v^T G v``."""
    v = [MPoly({e: 1}) for e in GRAM_BASIS]
    total = MPoly({})
    for i in range(6):
        for j in range(6):
            if g[i][j] != 0:
                total = total + v[i] * v[j] * g[i][j]
    return total


def _conic_through(points, profile):
    """Symmetric 3x3 matrix of the conic through six points of P^2 and the fit residual."""
    mons = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)]
    rows = [[p[a] * p[b] for a, b in mons] for p in points]
    kernel = nullspace(rows[:5], profile)
    if len(kernel) != 1:
        raise CertificateError("conic through the contact conics is not unique")
    c = kernel[0]
    top = max(abs(v) for v in c)
    c = [v / top for v in c]
    check = abs(mpmath.fsum(x * y for x, y in zip(rows[5], c)))
    scale = max(abs(v) for v in rows[5])
    m = [[0] * 3 for _ in range(3)]
    for (a, b), val in zip(mons, c):
        if a == b:
            m[a][a] = val
        else:
            m[a][b] = m[b][a] = val / 2
    return m, check / max(scale, mpmath.mpf(1e-300))


def _maybe_rational(g, profile):
    bound = default_denominator_bound(profile)
    out = []
    for row in g:
        vals = []
        for v in row:
            q = rationalize(v, bound, profile)
            if q is None:
                return None
            vals.append(q)
        out.append(vals)
    return out


def _psd(g, profile) -> bool:
    evals = mpmath.eigsy(mpmath.matrix([[mpmath.re(v) for v in row] for row in g]), eigvals_only=True)
    norm = max(abs(v) for v in evals)
    return min(evals) >= -profile.eps_rank * norm


def gram_from_conics(f: TernaryQuartic, conics: list[MPoly], label=None,
                     profile: ToleranceProfile = DEFAULT_PROFILE) -> GramMatrix:
    """Rank-3 Gram matrix from the six contact conics of a Steiner complex."""
    with profile.workprec():
        w = [[to_mp(c) for c in quadric_vector(q)] for q in conics]
        if rank_with_tolerance(w, profile) != 3:
            raise CertificateError("contact conics do not span a 3-dimensional space")
        basis_idx = _independent_triple(w, profile)
        basis = [w[i] for i in basis_idx]
        coords = []
        for vec in w:
            sol, res = lstsq(transpose(basis), vec)
            coords.append(sol)
        conic, fit = _conic_through(coords, profile)
        if fit > profile.cluster_radius:
            raise CertificateError(f"conic fit inconsistent (residual {mpmath.nstr(fit, 5)})")
        try:
            cinv = inverse(conic)
        except CertificateError as exc:
            raise CertificateError("contact conic matrix is singular") from exc
        complement = nullspace([[mpmath.conj(v) for v in row] for row in basis], profile)
        t = basis + complement
        gt = [[cinv[i][j] if i < 3 and j < 3 else 0 for j in range(6)] for i in range(6)]
        g = matmul(matmul(transpose(t), gt), t)
        # fix the overall scalar against f
        poly = gram_polynomial(g)
        fv = [to_mp(c) for c in f.coefficients]
        from .kernel.poly import QUARTIC_MONOMIALS
        pv = [poly.coefficient(e) for e in QUARTIC_MONOMIALS]
        k = max(range(15), key=lambda i: abs(fv[i]))
        gamma = pv[k] / fv[k]
        g = [[v / gamma for v in row] for row in g]
        residual = max(abs(p / gamma - c) for p, c in zip(pv, fv)) / max(abs(c) for c in fv)
        if residual > profile.eps_residual:
            raise CertificateError("v^T G v is not proportional to f")
        return _package(g, label, residual, profile)


def _package(g, label, residual, profile) -> GramMatrix:
    g = [[mpmath.mpc(v) for v in row] for row in g]
    size = max(abs(v) for row in g for v in row)
    real = max(abs(v.imag) for row in g for v in row) <= profile.eps_residual * size
    exact = False
    if real:
        g = [[mpmath.re(v) for v in row] for row in g]
        q = _maybe_rational(g, profile)
        if q is not None:
            g, exact = q, True
    rank = rank_with_tolerance([[to_mp(v) for v in row] for row in g], profile)
    psd = real and _psd([[to_mp(v) for v in row] for row in g], profile)
    return GramMatrix(tuple(tuple(row) for row in g), rank, real, psd, label, residual, exact)


def _independent_triple(w, profile):
    for idx in combinations(range(len(w)), 3):
        if rank_with_tolerance([w[i] for i in idx], profile) == 3:
            return idx
    raise CertificateError("no independent triple of contact conics")


def gram_from_steiner(f: TernaryQuartic, bm: BitangentMatrix, complex_: SteinerComplex,
                      profile: ToleranceProfile = DEFAULT_PROFILE) -> GramMatrix:
    """The rank-3 Gram matrix attached to a Steiner complex, with precision escalation."""
    last = None
    for prof in profile.ladder():
        with prof.workprec():
            conics = [bm.form(*a) * bm.form(*b) for a, b in complex_.pairs]
            try:
                return gram_from_conics(f, conics, complex_, prof)
            except CertificateError as exc:
                last = exc
    raise CertificateError(f"Steiner complex {complex_.name}: {last}")


def all_63_grams(f: TernaryQuartic, bm: BitangentMatrix,
                 profile: ToleranceProfile = DEFAULT_PROFILE) -> list[GramMatrix]:
    grams = [gram_from_steiner(f, bm, cx, profile) for cx in enumerate_steiner(bm.octad)]
    with profile.workprec():
        for a, b in combinations(range(63), 2):
            diff = max(abs(to_mp(x) - to_mp(y)) for ra, rb in zip(grams[a].G, grams[b].G)
                       for x, y in zip(ra, rb))
            size = max(abs(to_mp(x)) for row in grams[a].G for x in row)
            if diff <= profile.cluster_radius * size:
                raise CertificateError("two Steiner complexes gave the same Gram matrix")
    return grams


# -- sums of three squares ------------------------------------------------------------------

def sos_decompose(gram, profile: ToleranceProfile = DEFAULT_PROFILE) -> tuple[MPoly, MPoly, MPoly]:
    """Quadrics q1, q2, q3 with ``q1^2 + q2^2 + q3^2 = v^T G v``.

    Real when G is real PSD; complex otherwise.
    """
    g = gram.G if isinstance(gram, GramMatrix) else gram
    with profile.workprec():
        gm = [[to_mp(v) for v in row] for row in g]
        real = all(mpmath.im(v) == 0 for row in gm for v in row)
        rows = []
        if real:
            evals, evecs = mpmath.eigsy(mpmath.matrix([[mpmath.re(v) for v in row] for row in gm]))
            order = sorted(range(6), key=lambda k: -abs(evals[k]))[:3]
            for k in order:
                s = mpmath.sqrt(mpmath.mpc(evals[k]))
                rows.append([s * evecs[r, k] for r in range(6)])
        else:
            evals, evecs = mpmath.eig(mpmath.matrix(gm))
            order = sorted(range(6), key=lambda k: -abs(evals[k]))[:3]
            for k in order:
                u = [evecs[r, k] for r in range(6)]
                norm = mpmath.fsum(c * c for c in u)
                s = mpmath.sqrt(evals[k] / norm)
                rows.append([s * c for c in u])
        quads = []
        for row in rows:
            if all(abs(mpmath.im(c)) <= profile.eps_residual for c in row):
                row = [mpmath.re(c) for c in row]
            quads.append(MPoly({e: c for e, c in zip(GRAM_BASIS, row)}))
        return tuple(quads)


def gram_of_quadrics(quads) -> list[list]:
    """``H^T H`` for the coefficient rows of the quadrics."""
    h = [[to_mp(c) for c in quadric_vector(q)] for q in quads]
    return matmul(transpose(h), h)


# -- quadratic systems of contact conics -------------------------------------------------------

def _sym3(q: MPoly):
    c = lambda e: to_mp(q.coefficient(e))
    return [[c((2, 0, 0)), c((1, 1, 0)) / 2, c((1, 0, 1)) / 2],
            [c((1, 1, 0)) / 2, c((0, 2, 0)), c((0, 1, 1)) / 2],
            [c((1, 0, 1)) / 2, c((0, 1, 1)) / 2, c((0, 0, 2))]]


def split_conic(q: MPoly, profile: ToleranceProfile = DEFAULT_PROFILE):
    """The two lines of a rank-2 conic."""
    m = _sym3(q)
    kernel = nullspace(m, profile, dim=1)
    p = kernel[0]
    k = max(range(3), key=lambda i: abs(p[i]))
    e, g = [[int(i == j) for i in range(3)] for j in range(3) if j != k]
    qa = lambda s, t: [s * e[i] + t * g[i] for i in range(3)]
    val = lambda v: mpmath.fsum(v[i] * m[i][j] * v[j] for i in range(3) for j in range(3))
    a0, a2 = val(qa(1, 0)), val(qa(0, 1))
    a1 = (val(qa(1, 1)) - a0 - a2)
    lines = []
    for t, _ in _quadratic_roots(a0, a1, a2, profile):
        pt = qa(1, t) if t is not None else qa(0, 1)
        lines.append(projective.normalize(projective.cross(p, pt)))
    if len(lines) == 1:
        lines.append(lines[0])
    return lines


def _quadratic_roots(a0, a1, a2, profile):
    if abs(a2) <= profile.eps_residual * max(abs(a0), abs(a1)):
        out = [(None, 1)]
        if abs(a1) > 0:
            out.append((-a0 / a1, 1))
        return out
    return roots_univariate([a0, a1, a2], profile)


@dataclass(frozen=True)
class ContactConicMember:
    parameter: tuple
    conic: MPoly
    bitangents: tuple


def contact_conic_system(q0: MPoly, q1: MPoly, q2: MPoly, bitangents,
                         profile: ToleranceProfile = DEFAULT_PROFILE) -> list[ContactConicMember]:
    """The six singular members of ``l0^2 q0 + 2 l0 l1 q1 + l1^2 q2``, each split into bitangents."""
    with profile.workprec():
        m0, m1, m2 = (_sym3(q) for q in (q0, q1, q2))
        t = MPoly.gen(0, ("t",))
        sym = [[MPoly.constant(m0[i][j], ("t",)) + t * (2 * m1[i][j]) + t * t * m2[i][j] for j in range(3)]
               for i in range(3)]
        from .kernel.poly import poly_det
        det = poly_det(sym)
        coeffs = det.univariate("t")
        scale = max(abs(c) for c in coeffs)
        params = []
        while len(coeffs) > 1 and abs(coeffs[-1]) <= profile.eps_residual * scale:
            coeffs.pop()
            params.append((mpmath.mpf(0), mpmath.mpf(1)))
        params = params[:1] if params else []
        for root, mult in roots_univariate(coeffs, profile):
            if mult != 1:
                raise DegenerateError("non-generic system: repeated singular member")
            params.append((mpmath.mpf(1), root))
        if len(params) != 6:
            raise DegenerateError(f"non-generic system: {len(params)} singular members")
        out = []
        for l0, l1 in params:
            conic = q0 * (l0 * l0) + q1 * (2 * l0 * l1) + q2 * (l1 * l1)
            conic = conic.map_coeffs(to_mp)
            lines = split_conic(conic, profile)
            idx = tuple(sorted(match_line(line, bitangents, profile) for line in lines))
            out.append(ContactConicMember((l0, l1), conic, idx))
        return out


def quadratic_system_from_gram(gram, profile: ToleranceProfile = DEFAULT_PROFILE):
    """(q0, q1, q2) with ``q0 q2 - q1^2 = v^T G v`` from a sum of three squares."""
    with profile.workprec():
        h1, h2, h3 = sos_decompose(gram, profile)
        i = mpmath.mpc(0, 1)
        return h1 + h2 * i, h3 * i, h1 - h2 * i
