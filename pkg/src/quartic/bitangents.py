"""The 28 bitangents of a smooth plane quartic and syzygy tests on them.

A line ``a*x + b*y + z = 0`` is a bitangent when the binary quartic
``f(x, y, -a*x - b*y)`` is a perfect square.  Writing its coefficients as
``c0..c4``, squareness (with ``c0 != 0``) is equivalent to

    E1 = 8 c0^2 c3 - 4 c0 c1 c2 + c1^3 = 0
    E2 = 64 c0^3 c4 - (4 c0 c2 - c1^2)^2 = 0.

The resultant of E1 and E2 in ``b`` is ``c0(a)^8`` times a degree-28
polynomial whose roots are the ``a``-coordinates of the bitangents.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import mpmath

from .curve import TernaryQuartic
from .errors import CertificateError, DegenerateError, PrecisionExhausted
from .kernel import projective
from .kernel.linalg import nullspace, rank_with_tolerance, solve
from .kernel.poly import QUADRIC_BASIS, MPoly, divmod_univariate, resultant
from .kernel.roots import roots_univariate, to_mp
from .kernel.tolerance import DEFAULT_PROFILE, ToleranceProfile

_NAMES = ("x", "y", "a", "b")
CHARTS = ("z", "y", "x")  # coordinate set to 1 in the line equation
_CHART_PERMUTATIONS = {"z": (0, 1, 2), "y": (0, 2, 1), "x": (2, 1, 0)}


@dataclass(frozen=True)
class Bitangent:
    """A bitangent line with its two contact points.

    ``line`` holds (alpha, beta, gamma), scaled so the coordinate of largest
    modulus equals 1.  ``residual`` is the relative defect of the
    perfect-square identity for ``f`` restricted to the line.
    """

    line: tuple
    is_real: bool
    contact_points: tuple
    chart: str
    is_hyperflex: bool
    residual: mpmath.mpf

    def form(self) -> MPoly:
        return MPoly.linear_form(self.line)

    def __call__(self, point):
        return sum(c * p for c, p in zip(self.line, point))

    def to_str(self, digits: int = 15) -> str:
        coeffs = [c.real if self.is_real else c for c in self.line]
        return MPoly.linear_form(coeffs).to_str(lambda c: mpmath.nstr(c, digits))


# -- restriction to a line ------------------------------------------------------

def _line_basis(line):
    """Two points spanning the line, built from its largest coordinate."""
    k = max(range(3), key=lambda i: abs(line[i]))
    i, j = [t for t in range(3) if t != k]
    p = [mpmath.mpc(0)] * 3
    q = [mpmath.mpc(0)] * 3
    p[i], p[k] = mpmath.mpc(1), -line[i] / line[k]
    q[j], q[k] = mpmath.mpc(1), -line[j] / line[k]
    return p, q


def _binary_restriction(fpoly: MPoly, p, q) -> list:
    s, t = MPoly.gens(("s", "t"))
    subs = [p[i] * s + q[i] * t for i in range(3)]
    g = fpoly.map_coeffs(to_mp).compose(subs)
    return [g.coefficient((4 - m, m)) for m in range(5)]


def _square_root(g):
    """Binary quadric h with h^2 closest to the binary quartic g (coefficients c0..c4)."""
    if abs(g[0]) >= abs(g[4]):
        k0 = mpmath.sqrt(g[0])
        k1 = g[1] / (2 * k0)
        k2 = (g[2] - k1**2) / (2 * k0)
    else:
        k2 = mpmath.sqrt(g[4])
        k1 = g[3] / (2 * k2)
        k0 = (g[2] - k1**2) / (2 * k2)
    return k0, k1, k2


def _square(k):
    k0, k1, k2 = k
    return [k0**2, 2 * k0 * k1, k1**2 + 2 * k0 * k2, 2 * k1 * k2, k2**2]


def square_certificate(f: TernaryQuartic, line):
    """Restriction data ``(p, q, h, residual)`` with ``f(sp+tq) ~ h(s,t)^2``."""
    fpoly = f.poly
    norm = to_mp(f.norm())
    p, q = _line_basis(line)
    for shift in (0, 1, 2, -3):
        pp = [a + shift * b for a, b in zip(p, q)] if shift else p
        g = _binary_restriction(fpoly, pp, q)
        gnorm = max(abs(c) for c in g)
        if gnorm == 0:
            raise DegenerateError("line is a component of the curve")
        if max(abs(g[0]), abs(g[4])) > gnorm * mpmath.mpf(2) ** -8:
            k = _square_root(g)
            residual = max(abs(a - b) for a, b in zip(g, _square(k))) / norm
            return pp, q, k, residual
    raise CertificateError("could not find a usable parametrisation of the line")


def contact_points(f: TernaryQuartic, b: Bitangent | tuple,
                   profile: ToleranceProfile = DEFAULT_PROFILE):
    """The two points where the line touches the curve (equal for a hyperflex)."""
    line = b.line if isinstance(b, Bitangent) else tuple(mpmath.mpc(to_mp(c)) for c in b)
    p, q, k, residual = square_certificate(f, line)
    if residual > profile.eps_residual:
        raise CertificateError(f"not a bitangent: square residual {mpmath.nstr(residual, 5)}")
    k0, k1, k2 = k
    disc = mpmath.sqrt(k1**2 - 4 * k0 * k2)
    pts = []
    if abs(k0) >= abs(k2):
        for sgn in (1, -1):
            sigma = (-k1 + sgn * disc) / (2 * k0)
            pts.append([sigma * a + b_ for a, b_ in zip(p, q)])
    else:
        for sgn in (1, -1):
            tau = (-k1 + sgn * disc) / (2 * k2)
            pts.append([a + tau * b_ for a, b_ in zip(p, q)])
    return tuple(projective.normalize(pt) for pt in pts), k, residual


# -- elimination in one chart -----------------------------------------------------

def _random_transform(rng: random.Random) -> list[list[int]]:
    while True:
        t = [[rng.randint(-12, 12) for _ in range(3)] for _ in range(3)]
        det = (t[0][0] * (t[1][1] * t[2][2] - t[1][2] * t[2][1])
               - t[0][1] * (t[1][0] * t[2][2] - t[1][2] * t[2][0])
               + t[0][2] * (t[1][0] * t[2][1] - t[1][1] * t[2][0]))
        if det != 0:
            return t


def _compose(t, perm):
    # u = T P v where P sends v-coordinate j to slot perm[j]
    return [[t[i][perm[j]] for j in range(3)] for i in range(3)]


def _square_conditions(fint: MPoly, m):
    """Coefficients c0..c4 of f(M (x, y, -a x - b y)) as polynomials in (a, b)."""
    X, Y, A, B = MPoly.gens(_NAMES)
    v = (X, Y, -A * X - B * Y)
    subs = [sum((m[i][j] * v[j] for j in range(3)), MPoly({}, _NAMES)) for i in range(3)]
    g = fint.compose(subs)
    coeffs = []
    for i in range(5):
        coeffs.append(MPoly({(0, 0, e[2], e[3]): c for e, c in g.terms.items()
                             if e[0] == 4 - i and e[1] == i}, _NAMES))
    return coeffs


def _chart_lines(f: TernaryQuartic, m, profile: ToleranceProfile) -> list[tuple]:
    """Bitangents ``(a, b, 1) M^{-1}`` found in the chart of the transformed quartic."""
    c = _square_conditions(f.integer_poly, m)
    e1 = 8 * c[0] ** 2 * c[3] - 4 * c[0] * c[1] * c[2] + c[1] ** 3
    e2 = 64 * c[0] ** 3 * c[4] - (4 * c[0] * c[2] - c[1] ** 2) ** 2
    if e1.degree_in("b") < 1 or e2.degree_in("b") < 1:
        return []
    res = resultant(e1, e2, "b").univariate("a")
    lead = c[0].univariate("a")
    if all(v == 0 for v in res):
        return []
    while len(lead) > 1:
        quot, rem = divmod_univariate(res, lead)
        if rem != [0]:
            break
        res = quot
    if len(res) < 2:
        return []
    e1b = e1.coeffs_in("b")
    e2_eval = e2
    inv = _inverse3(m)
    lines = []
    for alpha, mult in roots_univariate(res, profile):
        if mult > 1:
            continue  # two bitangents share this coordinate; another chart resolves them
        cubic = [poly.compose([0, 0, alpha, 0]) for poly in e1b]
        cubic = [_constant(p) for p in cubic]
        if all(abs(v) == 0 for v in cubic[1:]):
            continue
        while len(cubic) > 1 and cubic[-1] == 0:
            cubic.pop()
        if len(cubic) < 2:
            continue
        betas = [r for r, _ in roots_univariate(cubic, profile)]
        beta = min(betas, key=lambda bb: abs(_constant(e2_eval.compose([0, 0, alpha, bb]))))
        refined = _newton_refine(c, alpha, beta, profile)
        if refined is None:
            continue
        a_, b_ = refined
        line = [sum(((a_, b_, 1)[k] * inv[k][j] for k in range(3)), mpmath.mpc(0)) for j in range(3)]
        lines.append(tuple(line))
    return lines


def _constant(p):
    if isinstance(p, MPoly):
        return p.coefficient((0,) * p.nvars)
    return p


def _inverse3(m):
    frac = [[Fraction(v) for v in row] for row in m]
    a, b, c = frac
    det = (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
           + a[2] * (b[0] * c[1] - b[1] * c[0]))
    cof = [[(frac[(j + 1) % 3][(i + 1) % 3] * frac[(j + 2) % 3][(i + 2) % 3]
             - frac[(j + 1) % 3][(i + 2) % 3] * frac[(j + 2) % 3][(i + 1) % 3]) / det
            for j in range(3)] for i in range(3)]
    return [[to_mp(v) for v in row] for row in cof]


def _newton_refine(c, alpha, beta, profile):
    """Newton on c_i(a, b) = coefficients of (k0 s^2 + k1 s t + k2 t^2)^2."""
    grads = [(p.diff("a"), p.diff("b")) for p in c]

    def ev(p, a, b):
        return p(0, 0, a, b)

    vals = [ev(p, alpha, beta) for p in c]
    if vals[0] == 0:
        return None
    k0 = mpmath.sqrt(vals[0])
    k1 = vals[1] / (2 * k0)
    k2 = (vals[2] - k1**2) / (2 * k0)
    z = [mpmath.mpc(alpha), mpmath.mpc(beta), k0, k1, k2]
    for _ in range(8):
        a, b, k0, k1, k2 = z
        vals = [ev(p, a, b) for p in c]
        sq = _square((k0, k1, k2))
        fval = [v - s for v, s in zip(vals, sq)]
        jac = []
        dsq = [[2 * k0, 0, 0], [2 * k1, 2 * k0, 0], [2 * k2, 2 * k1, 2 * k0], [0, 2 * k2, 2 * k1], [0, 0, 2 * k2]]
        for i in range(5):
            ga, gb = grads[i]
            jac.append([ev(ga, a, b), ev(gb, a, b)] + [-d for d in dsq[i]])
        try:
            step = solve(jac, fval)
        except CertificateError:
            return None
        z = [zi - si for zi, si in zip(z, step)]
        if max(abs(s) for s in step) < mpmath.ldexp(1, -profile.precision_bits) * max(1, max(abs(v) for v in z)):
            break
    return z[0], z[1]


# -- public API ----------------------------------------------------------------------

def _make_bitangent(f, line, chart, profile):
    line = projective.normalize(line)
    pts, k, residual = contact_points(f, line, profile)
    real = all(abs(v.imag) <= profile.eps_residual for v in line)
    if real:
        line = projective.realify(line)
    k0, k1, k2 = k
    hyper = abs(k1**2 - 4 * k0 * k2) < profile.cluster_radius * max(abs(k0), abs(k1), abs(k2)) ** 2
    return Bitangent(line=line, is_real=real, contact_points=pts, chart=chart,
                     is_hyperflex=hyper, residual=residual)


def _attempt(f: TernaryQuartic, rng: random.Random, profile: ToleranceProfile):
    t = _random_transform(rng)
    found: list[Bitangent] = []
    for chart in CHARTS:
        m = _compose(t, _CHART_PERMUTATIONS[chart])
        for line in _chart_lines(f, m, profile):
            try:
                cand = _make_bitangent(f, line, chart, profile)
            except CertificateError:
                continue
            if all(projective.chordal_distance(cand.line, b.line) > profile.cluster_radius for b in found):
                found.append(cand)
        if len(found) >= 28:
            break
    return found


def compute_bitangents(f: TernaryQuartic, profile: ToleranceProfile = DEFAULT_PROFILE,
                       seed: int = 0, attempts: int = 3) -> list[Bitangent]:
    """All 28 bitangents, sorted by their normalized coordinates."""
    f.ensure_smooth()
    counts = []
    for prof in profile.ladder():
        with prof.workprec():
            rng = random.Random(seed)
            for _ in range(attempts):
                found = _attempt(f, rng, prof)
                counts.append(len(found))
                if len(found) == 28:
                    return sorted(found, key=lambda b: (not b.is_real, projective.sort_key(b.line)))
    raise PrecisionExhausted(f"degenerate quartic or precision exhausted (counts {counts})")


# -- syzygies -------------------------------------------------------------------------

def _quadric_row(point):
    return [point[0] ** e[0] * point[1] ** e[1] * point[2] ** e[2] for e in QUADRIC_BASIS]


def _check_distinct(points, profile):
    for p, q in combinations(points, 2):
        if projective.chordal_distance(p, q) < profile.cluster_radius:
            raise DegenerateError("non-generic contact")


def points_on_conic(points, profile: ToleranceProfile = DEFAULT_PROFILE) -> bool:
    """True when the points lie on a common conic (rank of the evaluation matrix <= 5)."""
    rows = [_quadric_row(p) for p in points]
    return rank_with_tolerance(rows, profile) <= 5


def is_syzygetic_triple(f, b1: Bitangent, b2: Bitangent, b3: Bitangent,
                        profile: ToleranceProfile = DEFAULT_PROFILE) -> bool:
    """Whether the six contact points of three bitangents lie on a conic."""
    pts = [p for b in (b1, b2, b3) for p in b.contact_points]
    _check_distinct(pts, profile)
    return points_on_conic(pts, profile)


def is_syzygetic_quadruple(f, quad, profile: ToleranceProfile = DEFAULT_PROFILE) -> bool:
    pts = [p for b in quad for p in b.contact_points]
    _check_distinct(pts, profile)
    return points_on_conic(pts, profile)


def syzygetic_completion(f, bitangents: list[Bitangent], triple: tuple[int, int, int],
                         profile: ToleranceProfile = DEFAULT_PROFILE) -> int:
    """Index of the fourth bitangent whose contact points lie on the conic of a syzygetic triple."""
    pts = [p for i in triple for p in bitangents[i].contact_points]
    basis = nullspace([_quadric_row(p) for p in pts], profile)
    if len(basis) != 1:
        raise DegenerateError("triple is not syzygetic")
    conic = basis[0]
    scale = max(abs(c) for c in conic)
    hits = []
    for idx, b in enumerate(bitangents):
        if idx in triple:
            continue
        vals = [abs(mpmath.fsum(c * m for c, m in zip(conic, _quadric_row(p)))) for p in b.contact_points]
        if max(vals) < profile.cluster_radius * scale:
            hits.append(idx)
    if len(hits) != 1:
        raise DegenerateError(f"expected one completing bitangent, found {len(hits)}")
    return hits[0]


def syzygy_census(f, bitangents: list[Bitangent], profile: ToleranceProfile = DEFAULT_PROFILE):
    """(syzygetic, azygetic) counts over all 3276 triples."""
    syz = azy = 0
    with profile.workprec():
        rows = [[_quadric_row(p) for p in b.contact_points] for b in bitangents]
        for i, j, k in combinations(range(len(bitangents)), 3):
            if rank_with_tolerance(rows[i] + rows[j] + rows[k], profile) <= 5:
                syz += 1
            else:
                azy += 1
    return syz, azy
