"""Smoothness, the six real topological types, boundary divisors of octads and real nets of quadrics."""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import mpmath
import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

from .bitangents import Bitangent, compute_bitangents
from .curve import TernaryQuartic
from .detrep import DetRep, from_matrices
from .errors import CertificateError, DegenerateError, PrecisionExhausted
from .kernel import projective
from .kernel.linalg import exact_nullspace
from .kernel.macaulay import macaulay_resultant
from .kernel.poly import MPoly
from .kernel.roots import to_mp
from .kernel.tolerance import DEFAULT_PROFILE, ToleranceProfile
from .octad import (LABELS, CayleyOctad, _normalized_plucker, _QUADRICS_P3, bitangent_matrix,
                    cayley_octad, match_line, twisted_cubic_residuals)

SIGN_SAMPLES = 10_000
LOCAL_STARTS = 20


def discriminant(f):
    """Macaulay resultant of the partial derivatives, normalized so Res(x^3, y^3, z^3) = 1.

    Exact for rational input.  An :class:`MPoly` with floating coefficients is
    handled numerically at the current precision.
    """
    if isinstance(f, TernaryQuartic):
        return f.discriminant()
    return macaulay_resultant([f.diff(i) for i in range(3)])


def relative_discriminant(f, profile: ToleranceProfile = DEFAULT_PROFILE):
    """``|disc(f / |f|_max)|``, a scale-free size for numeric smoothness decisions."""
    with profile.workprec():
        poly = f.poly if isinstance(f, TernaryQuartic) else f
        poly = poly.map_coeffs(to_mp)
        top = max(abs(c) for c in poly.terms.values())
        return abs(discriminant(poly.map_coeffs(lambda c: c / top)))


# -- topology ---------------------------------------------------------------------------------

class Topology(enum.Enum):
    FOUR_OVALS = "FourOvals"
    THREE_OVALS = "ThreeOvals"
    TWO_NON_NESTED = "TwoNonNested"
    ONE_OVAL = "OneOval"
    TWO_NESTED = "TwoNested"
    EMPTY = "Empty"


# real bitangents, real octad points (for a real representation), real Steiner complexes
TABLE = {
    Topology.FOUR_OVALS: (28, 8, 63),
    Topology.THREE_OVALS: (16, 6, 31),
    Topology.TWO_NON_NESTED: (8, 4, 15),
    Topology.ONE_OVAL: (4, 2, 7),
    Topology.TWO_NESTED: (4, 0, 15),
    Topology.EMPTY: (4, 0, 15),
}


@dataclass(frozen=True)
class TopologyClass:
    topology: Topology
    real_bitangents: int
    real_octad_points: int | None
    real_steiner: int
    sign_witness: tuple | None  # a real point where f has the sign opposite to the majority

    @property
    def evidence(self) -> tuple:
        return self.real_bitangents, self.real_octad_points, self.real_steiner


def _conjugate_index(bitangents: list[Bitangent], profile) -> list[int]:
    return [match_line(projective.conj(b.line), bitangents, profile) for b in bitangents]


def real_steiner_count(bm, profile: ToleranceProfile = DEFAULT_PROFILE) -> int:
    """Steiner complexes mapped to themselves by complex conjugation of the bitangents."""
    from .steiner import enumerate_steiner

    with profile.workprec():
        conj = _conjugate_index(list(bm.bitangents), profile)
    count = 0
    for cx in enumerate_steiner():
        pairs = {frozenset(p) for p in cx.bitangent_pairs(bm)}
        if {frozenset(conj[i] for i in p) for p in pairs} == pairs:
            count += 1
    return count


def _sphere_points(n: int, seed: int) -> np.ndarray:
    u = qmc.Halton(d=2, scramble=True, seed=seed).random(n)
    z = 2 * u[:, 0] - 1
    phi = 2 * np.pi * u[:, 1]
    r = np.sqrt(1 - z * z)
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def _float_eval(f: TernaryQuartic):
    terms = [(float(c), e) for e, c in f.poly.terms.items()]

    def ev(pts):
        pts = np.atleast_2d(pts)
        return sum(c * pts[:, 0] ** e[0] * pts[:, 1] ** e[1] * pts[:, 2] ** e[2] for c, e in terms)

    return ev


def sign_change_witness(f: TernaryQuartic, seed: int = 0,
                        profile: ToleranceProfile = DEFAULT_PROFILE) -> tuple | None:
    """A real point where ``f`` takes the minority sign, or None when no sign change is found.

    Quasi-random sampling of the sphere, then local minimization of the
    majority-signed ``f`` from the best samples.  The sign at the returned
    point is confirmed in exact arithmetic.
    """
    ev = _float_eval(f)
    pts = _sphere_points(SIGN_SAMPLES, seed)
    vals = ev(pts)
    majority = 1.0 if np.sum(vals > 0) >= np.sum(vals < 0) else -1.0

    def confirmed(p):
        q = [Fraction(float(c)) for c in p]
        return majority * float(f(*q)) < 0 and (f(*q) != 0)

    for k in np.argsort(majority * vals):
        if majority * vals[k] >= 0:
            break
        if confirmed(pts[k]):
            return tuple(float(c) for c in pts[k])
    order = np.argsort(majority * vals)[:LOCAL_STARTS]
    objective = lambda u: majority * ev(u / np.linalg.norm(u))[0]
    for k in order:
        res = minimize(objective, pts[k], method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000})
        if res.fun < 0:
            p = res.x / np.linalg.norm(res.x)
            if confirmed(p):
                return tuple(float(c) for c in p)
    return None


def _evidence(f: TernaryQuartic, rep: DetRep | None, profile, seed):
    from .dixon import dixon_detrep

    bitangents = compute_bitangents(f, profile, seed=seed)
    real_bt = sum(b.is_real for b in bitangents)
    work_rep = rep if rep is not None else dixon_detrep(f, profile, seed=seed, bitangents=bitangents)
    octad = cayley_octad(work_rep, profile, seed=seed)
    bm = bitangent_matrix(work_rep, octad, bitangents, profile)
    steiner = real_steiner_count(bm, profile)
    octad_real = len(octad.real_points) if rep is not None and rep.is_real() else None
    return real_bt, octad_real, steiner


def _decide(real_bt, steiner, f, seed, profile):
    by_bitangents = {28: Topology.FOUR_OVALS, 16: Topology.THREE_OVALS, 8: Topology.TWO_NON_NESTED}
    if real_bt in by_bitangents:
        return by_bitangents[real_bt], None
    if real_bt != 4:
        raise CertificateError(f"{real_bt} real bitangents is not a possible count")
    if steiner == 7:
        return Topology.ONE_OVAL, None
    if steiner != 15:
        raise CertificateError(f"{steiner} real Steiner complexes with 4 real bitangents")
    witness = sign_change_witness(f, seed, profile)
    return (Topology.TWO_NESTED if witness is not None else Topology.EMPTY), witness


def classify_topology(f: TernaryQuartic, rep: DetRep | None = None,
                      profile: ToleranceProfile = DEFAULT_PROFILE, seed: int = 0) -> TopologyClass:
    """The real topological type with its evidence.

    A real determinantal representation ``rep`` is optional; when given, its
    octad supplies the real-point count and is checked against the table.
    Inconsistent evidence is retried at doubled precision before failing.
    """
    f.ensure_smooth()
    last = None
    for prof in profile.ladder():
        try:
            real_bt, octad_real, steiner = _evidence(f, rep, prof, seed)
            topology, witness = _decide(real_bt, steiner, f, seed, prof)
            expected = TABLE[topology]
            if steiner != expected[2] or (octad_real is not None and octad_real != expected[1]):
                raise CertificateError(f"evidence {(real_bt, octad_real, steiner)} contradicts {topology.value}")
            return TopologyClass(topology, real_bt, octad_real, steiner, witness)
        except CertificateError as exc:
            last = exc
    raise PrecisionExhausted(f"inconsistent topological evidence: {last}")


# -- real nets of quadrics --------------------------------------------------------------------

class NetClass(enum.Enum):
    COMMON_REAL_POINT = "a"
    DEFINITE = "b"
    VINNIKOV_NONDEFINITE = "c"
    NO_SINGULAR_QUADRIC = "d"


@dataclass(frozen=True)
class NetClassification:
    net_class: NetClass
    topology: TopologyClass
    definite_point: tuple | None = None
    low_confidence: bool = False


def _net_eval(mats):
    a, b, c = (np.array([[float(v) for v in row] for row in m]) for m in mats)
    return lambda u: u[0] * a + u[1] * b + u[2] * c


def definite_member(mats, seed: int = 0, profile: ToleranceProfile = DEFAULT_PROFILE) -> tuple | None:
    """A rational point (x, y, z) with xA + yB + zC positive definite, certified by Cholesky.

    Maximizes the smallest eigenvalue over the unit sphere from seeded random
    starts; None when no certified point is found.
    """
    net = _net_eval(mats)
    rng = np.random.default_rng(seed)
    objective = lambda u: -np.linalg.eigvalsh(net(u / np.linalg.norm(u)))[0]
    best = None
    for _ in range(LOCAL_STARTS):
        start = rng.normal(size=3)
        res = minimize(objective, start, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-12})
        if best is None or res.fun < best.fun:
            best = res
    if best.fun >= 0:
        return None
    u = best.x / np.linalg.norm(best.x)
    point = tuple(Fraction(float(c)).limit_denominator(10**6) for c in u)
    with profile.workprec():
        m = [[sum(p * to_mp(mat[i][j]) for p, mat in zip(point, mats)) for j in range(4)] for i in range(4)]
        try:
            mpmath.cholesky(mpmath.matrix(m))
        except ValueError:
            return None
    return point


def net_classify(A, B, C, f: TernaryQuartic | None = None, profile: ToleranceProfile = DEFAULT_PROFILE,
                 seed: int = 0) -> NetClassification:
    """Which of the four cases a real net of quadrics falls into.

    Numeric matrices need the (rational) quartic ``f`` they represent.
    """
    rep = from_matrices(A, B, C, f=f, profile=None if f is None else profile)
    if not rep.f.is_smooth():
        raise DegenerateError("Δ(N) = 0, classification undefined")
    topology = classify_topology(rep.f, rep if rep.is_real() else None, profile, seed)
    if topology.topology == Topology.EMPTY:
        return NetClassification(NetClass.NO_SINGULAR_QUADRIC, topology)
    if topology.topology != Topology.TWO_NESTED:
        return NetClassification(NetClass.COMMON_REAL_POINT, topology)
    point = definite_member(rep.matrices, seed, profile)
    if point is not None:
        return NetClassification(NetClass.DEFINITE, topology, point)
    return NetClassification(NetClass.VINNIKOV_NONDEFINITE, topology, low_confidence=True)


# -- boundary divisors ------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundaryFlags:
    pair_collision: bool
    coplanar_four: bool
    twisted_cubic: bool
    min_distance: object = None
    min_minor: object = None
    coplanar_sets: tuple = ()


def boundary_divisor_predicates(source, profile: ToleranceProfile = DEFAULT_PROFILE,
                                tol=None) -> BoundaryFlags:
    """Flags for colliding points, four coplanar points and eight points on a twisted cubic.

    ``source`` is a list of eight points, a :class:`CayleyOctad` or a
    :class:`DetRep`.  When the octad of a representation cannot be solved
    into eight isolated points, that is reported as a collision.
    """
    if isinstance(source, DetRep):
        try:
            source = cayley_octad(source, profile)
        except DegenerateError:
            return BoundaryFlags(True, False, False)
    points = source.points if isinstance(source, CayleyOctad) else source
    with profile.workprec():
        tol = tol if tol is not None else profile.eps_rank
        pts = [projective.normalize([to_mp(c) for c in p]) for p in points]
        dist = min(projective.chordal_distance(p, q) for p, q in combinations(pts, 2))
        if dist < tol:
            return BoundaryFlags(True, False, False, dist)
        minors = _normalized_plucker(pts, profile)
        small = tuple(k for k, v in minors.items() if abs(v) < tol)
        for k in small:
            rest = tuple(i for i in LABELS if i not in k)
            if abs(minors[rest]) >= tol:
                raise CertificateError("four coplanar points without a coplanar complement")
        cubic = max(twisted_cubic_residuals(pts, profile)) < tol
        return BoundaryFlags(False, bool(small), cubic, dist, min(abs(v) for v in minors.values()), small)


@dataclass(frozen=True)
class RankTwoWitness:
    point: tuple
    singular_values: tuple

    @property
    def found(self) -> bool:
        return self.singular_values[2] < 1e-8 * self.singular_values[0]


def rank_two_witness(mats, seed: int = 0) -> RankTwoWitness:
    """Minimize the two smallest singular values of xA + yB + zC over the unit sphere."""
    net = _net_eval(mats)
    rng = np.random.default_rng(seed)

    def objective(u):
        s = np.linalg.svd(net(u / np.linalg.norm(u)), compute_uv=False)
        return (s[2] ** 2 + s[3] ** 2) / s[0] ** 2

    best = None
    for _ in range(LOCAL_STARTS):
        res = minimize(objective, rng.normal(size=3), method="Nelder-Mead",
                       options={"xatol": 1e-14, "fatol": 1e-28, "maxiter": 4000})
        if best is None or res.fun < best.fun:
            best = res
    u = best.x / np.linalg.norm(best.x)
    s = np.linalg.svd(net(u), compute_uv=False)
    return RankTwoWitness(tuple(u), tuple(float(v) for v in s))


def quadric_resultant(q1: MPoly, q2: MPoly, q3: MPoly):
    """Resultant of three ternary quadrics; zero exactly when they share a projective zero."""
    return macaulay_resultant([q1, q2, q3])


# -- constructed boundary nets (exact) --------------------------------------------------------

def _quadric_matrix(vec) -> list[list[Fraction]]:
    m = [[Fraction(0)] * 4 for _ in range(4)]
    for c, e in zip(vec, _QUADRICS_P3):
        idx = [i for i in range(4) for _ in range(e[i])]
        if idx[0] == idx[1]:
            m[idx[0]][idx[0]] = c
        else:
            m[idx[0]][idx[1]] = m[idx[1]][idx[0]] = c / 2
    return m


def exact_quadrics_through(points) -> list[list[list[Fraction]]]:
    """Rational symmetric matrices spanning the quadrics through rational points of P^3."""
    rows = [[Fraction(p[0]) ** e[0] * Fraction(p[1]) ** e[1] * Fraction(p[2]) ** e[2] * Fraction(p[3]) ** e[3]
             for e in _QUADRICS_P3] for p in points]
    return [_quadric_matrix(v) for v in exact_nullspace(rows)]


def _net_rep(mats) -> DetRep:
    if len(mats) != 3:
        raise DegenerateError(f"expected a net, got a {len(mats)}-dimensional system of quadrics")
    return from_matrices(*mats, profile=None)


def coplanar_octad(seed: int = 0):
    """An octad with four coplanar points and its net; returns (points, rep).

    The first five points are the standard frame, the sixth lies in the
    plane of the first three coordinate points, so the points labelled
    1, 2, 3 and 6 (1-based) are coplanar.
    """
    from .octad import eighth_point

    rng = random.Random(seed)
    frame = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (1, 1, 1, 1)]
    while True:
        p6 = (rng.randint(-9, 9), rng.randint(-9, 9), rng.randint(-9, 9), 0)
        p7 = tuple(rng.randint(-9, 9) for _ in range(4))
        try:
            p8 = eighth_point(frame + [p6, p7])
        except DegenerateError:
            continue
        points = frame + [p6, p7, p8]
        mats = exact_quadrics_through(points)
        if len(mats) == 3:
            return points, _net_rep(mats)


def collision_net(seed: int = 0) -> DetRep:
    """A net whose base locus has a double point at (0:0:0:1).

    One member is a cone with vertex at that point; the others pass through it.
    """
    rng = random.Random(seed)

    def rand_sym(cone: bool):
        m = [[Fraction(0)] * 4 for _ in range(4)]
        for i in range(4):
            for j in range(i, 4):
                if (cone and 3 in (i, j)) or (i, j) == (3, 3):
                    continue
                m[i][j] = m[j][i] = Fraction(rng.randint(-5, 5))
        return m

    return _net_rep([rand_sym(True), rand_sym(False), rand_sym(False)])


def twisted_cubic_octad(params=(-3, -1, 0, 1, 2, 3, 5, 7)):
    """Eight points (1 : t : t^2 : t^3) and the net of quadrics containing the cubic."""
    points = [(1, t, t * t, t ** 3) for t in params]
    return points, _net_rep(exact_quadrics_through(points))
