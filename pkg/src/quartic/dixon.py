"""Dixon's construction: a determinantal representation from three bitangents.

For an azygetic triple with product ``v00``, the cubics through the six
contact points form a 4-dimensional space ``<v00, v01, v02, v03>``.  Solving
``v0i v0j = v00 vij + h f`` gives a symmetric 4x4 matrix of cubics ``V``
whose adjugate is ``f^2 W`` with ``W`` linear and ``det W = delta^3 f``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

import mpmath

from .bitangents import Bitangent, compute_bitangents
from .curve import TernaryQuartic
from .detrep import DetRep, normalize_scale
from .errors import CertificateError, DegenerateError
from .kernel.linalg import lstsq, nullspace
from .kernel.poly import MPoly, monomials, poly_det
from .kernel.roots import to_mp
from .kernel.tolerance import DEFAULT_PROFILE, ToleranceProfile

CUBICS = monomials(3)
QUADRICS = monomials(2)
SEXTICS = monomials(6)
NONICS = monomials(9)
MAX_TRIALS = 20


@dataclass(frozen=True)
class ContactCubicBasis:
    v00: MPoly
    v01: MPoly
    v02: MPoly
    v03: MPoly
    source_triple: tuple

    @property
    def cubics(self) -> tuple[MPoly, MPoly, MPoly, MPoly]:
        return self.v00, self.v01, self.v02, self.v03


def _monomial_row(point, basis):
    return [point[0] ** e[0] * point[1] ** e[1] * point[2] ** e[2] for e in basis]


def contact_cubic_space(f: TernaryQuartic, bitangents: list[Bitangent], triple,
                        profile: ToleranceProfile = DEFAULT_PROFILE) -> ContactCubicBasis:
    """Cubics through the six contact points of three bitangents.

    The six points impose independent conditions, leaving a 4-dimensional
    kernel; ``v00`` is the product of the three lines.
    """
    triple = tuple(triple)
    lines = [bitangents[i] for i in triple]
    pts = [p for b in lines for p in b.contact_points]
    rows = [_monomial_row(p, CUBICS) for p in pts]
    kernel = nullspace(rows, profile)
    if len(kernel) != 4:
        raise DegenerateError(f"contact scheme degenerate (kernel dimension {len(kernel)})")
    v00 = lines[0].form() * lines[1].form() * lines[2].form()
    target = [to_mp(c) for c in v00.vector(CUBICS)]
    coords, _ = lstsq([[k[r] for k in kernel] for r in range(10)], target)
    drop = max(range(4), key=lambda i: abs(coords[i]))
    others = [MPoly.from_vector(k, CUBICS) for i, k in enumerate(kernel) if i != drop]
    return ContactCubicBasis(v00, *others, source_triple=triple)


def _solve_entry(f: MPoly, v00: MPoly, product: MPoly, profile):
    """(vij, residual) with product = v00 * vij + h * f, as a linear system."""
    cols = []
    for m in CUBICS:
        cols.append((v00 * MPoly({m: 1})).vector(SEXTICS))
    for m in QUADRICS:
        cols.append((f * MPoly({m: 1})).vector(SEXTICS))
    matrix = [[col[r] for col in cols] for r in range(len(SEXTICS))]
    rhs = product.vector(SEXTICS)
    sol, residual = lstsq(matrix, rhs)
    scale = max(product.norm(), 1e-300)
    return MPoly.from_vector(sol[:10], CUBICS), residual / scale


def complete_vmatrix(f: TernaryQuartic, basis: ContactCubicBasis,
                     profile: ToleranceProfile = DEFAULT_PROFILE) -> list[list[MPoly]]:
    """Symmetric 4x4 matrix of cubics with first row ``v00 .. v03``."""
    fm = f.poly.map_coeffs(to_mp)
    v = [p.map_coeffs(to_mp) for p in basis.cubics]
    mat = [[None] * 4 for _ in range(4)]
    for i in range(4):
        mat[0][i] = mat[i][0] = v[i]
    for i in range(1, 4):
        for j in range(i, 4):
            entry, residual = _solve_entry(fm, v[0], v[i] * v[j], profile)
            if residual > profile.eps_residual:
                raise CertificateError(f"v{i}{j} system inconsistent (residual {mpmath.nstr(residual, 5)})")
            mat[i][j] = mat[j][i] = entry
    return mat


def det_ratio(vmat, f: TernaryQuartic, rng: random.Random):
    """delta with det V = delta f^3, measured at a random point, and a relative size."""
    pt = [mpmath.mpf(rng.uniform(-1, 1)) + 1j * mpmath.mpf(rng.uniform(-1, 1)) for _ in range(3)]
    vals = [[e(*pt) for e in row] for row in vmat]
    det = mpmath.det(mpmath.matrix(vals))
    hadamard = 1
    for row in vals:
        hadamard *= mpmath.sqrt(mpmath.fsum(abs(v) ** 2 for v in row))
    return det / f.poly.map_coeffs(to_mp)(*pt) ** 3, abs(det) / hadamard


def _adjugate_entry(vmat, i, j) -> MPoly:
    minor = [[vmat[r][c] for c in range(4) if c != j] for r in range(4) if r != i]
    d = poly_det(minor)
    return d if (i + j) % 2 == 0 else -d


def _divide_by(poly: MPoly, divisor: MPoly) -> tuple[MPoly, object]:
    """Linear form w with poly ~ w * divisor (least squares) and the relative residual."""
    basis = monomials(1)
    cols = [(divisor * MPoly({m: 1})).vector(NONICS) for m in basis]
    matrix = [[col[r] for col in cols] for r in range(len(NONICS))]
    sol, residual = lstsq(matrix, poly.vector(NONICS))
    return MPoly.from_vector(sol, basis), residual / max(poly.norm(), 1e-300)


def representation_from_vmatrix(f: TernaryQuartic, vmat, profile: ToleranceProfile) -> DetRep:
    f2 = f.poly.map_coeffs(to_mp) ** 2
    scale = max(e.norm() for row in vmat for e in row) ** 3
    w = [[None] * 4 for _ in range(4)]
    for i in range(4):
        for j in range(i, 4):
            adj = _adjugate_entry(vmat, i, j)
            if adj.norm() < profile.eps_residual * scale:
                form, residual = MPoly({}), 0
            else:
                form, residual = _divide_by(adj, f2)
            if residual > profile.eps_residual:
                raise CertificateError("adjugate entry is not divisible by f^2")
            w[i][j] = w[j][i] = form
    mats = []
    for k in range(3):
        e = tuple(int(t == k) for t in range(3))
        mats.append([[w[i][j].coefficient(e) for j in range(4)] for i in range(4)])
    return normalize_scale(mats, f, profile)


def dixon_from_triple(f: TernaryQuartic, bitangents: list[Bitangent], triple,
                      profile: ToleranceProfile = DEFAULT_PROFILE, seed: int = 0) -> DetRep:
    """Dixon's construction for one triple; raises DegenerateError when det V = 0."""
    with profile.workprec():
        basis = contact_cubic_space(f, bitangents, triple, profile)
        vmat = complete_vmatrix(f, basis, profile)
        _, size = det_ratio(vmat, f, random.Random(seed))
        if size < profile.eps_rank:
            raise DegenerateError("det V vanishes: the triple is syzygetic")
        return representation_from_vmatrix(f, vmat, profile)


def dixon_detrep(f: TernaryQuartic, profile: ToleranceProfile = DEFAULT_PROFILE, seed: int = 0,
                 bitangents: list[Bitangent] | None = None, triple=None) -> DetRep:
    """A determinantal representation of ``f`` from a (seeded) random triple of bitangents.

    Triples with vanishing ``det V`` are skipped, up to 20 trials; each trial
    succeeds with probability 8/13.
    """
    f.ensure_smooth()
    if bitangents is None:
        bitangents = compute_bitangents(f, profile, seed=seed)
    if triple is not None:
        return dixon_from_triple(f, bitangents, triple, profile, seed)
    rng = random.Random(seed)
    triples = list(combinations(range(len(bitangents)), 3))
    for _ in range(MAX_TRIALS):
        t = triples[rng.randrange(len(triples))]
        try:
            return dixon_from_triple(f, bitangents, t, profile, seed)
        except DegenerateError:
            continue
    raise DegenerateError(f"no azygetic triple found in {MAX_TRIALS} trials")
