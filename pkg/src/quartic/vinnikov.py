"""The normal form det(xI + yD + zR) and spectrahedral descriptions of nested-oval quartics."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .curve import TernaryQuartic
from .detrep import DetRep, determinant_of, from_matrices
from .errors import DegenerateError
from .kernel.linalg import inverse, matmul, transpose
from .kernel.poly import MPoly, divmod_univariate, resultant
from .kernel.roots import to_mp
from .kernel.tolerance import DEFAULT_PROFILE, ToleranceProfile

MAX_FRAMES = 100


@dataclass(frozen=True)
class IdrForm:
    """``f = det(xI + yD + zR)``; ``D`` is stored as its diagonal."""

    D: tuple
    R: tuple
    is_real: bool
    residual: object
    source_class: int | None = None

    def matrix(self) -> list[list[MPoly]]:
        return [[MPoly.linear_form((int(i == j), self.D[i] if i == j else 0, self.R[i][j]))
                 for j in range(4)] for i in range(4)]

    def as_detrep(self, f: TernaryQuartic) -> DetRep:
        ident = [[int(i == j) for j in range(4)] for i in range(4)]
        diag = [[self.D[i] if i == j else 0 for j in range(4)] for i in range(4)]
        return from_matrices(ident, diag, [list(r) for r in self.R], f=f, profile=None)


# -- coordinates ---------------------------------------------------------------------------

def _binary_squarefree(f: TernaryQuartic) -> bool:
    """f(x, y, 0) has four distinct roots on P^1."""
    coeffs = [f.coefficient(4 - k, k, 0) for k in range(5)]  # coefficient of t^k in f(1, t, 0)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) < 4:  # a root of multiplicity >= 2 at infinity
        return False
    t = MPoly.gen(0, ("t",))
    g = sum((MPoly.constant(c, ("t",)) * t**k for k, c in enumerate(coeffs)), MPoly({}, ("t",)))
    return resultant(g, g.diff(0), "t").coefficient((0,)) != 0


def _admissible(f: TernaryQuartic) -> bool:
    return f.coefficient(4, 0, 0) != 0 and _binary_squarefree(f)


def normalize_coordinates(f: TernaryQuartic, seed: int = 0):
    """(f_normalized, T) with ``f_normalized = f(T u) / f(T e1)`` admissible for the normal form.

    Admissible means ``f(x,0,0) = x^4`` and ``f(x,y,0)`` squarefree.  ``T`` is
    the identity when ``f`` already qualifies.
    """
    f.ensure_smooth()
    ident = [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]
    candidates = [ident]
    rng = random.Random(seed)
    for _ in range(MAX_FRAMES - 1):
        t = [[Fraction(rng.randint(-3, 3)) for _ in range(3)] for _ in range(3)]
        if _det3(t) != 0:
            candidates.append(t)
    for t in candidates:
        g = f if t is ident else f.transform(t)
        if _admissible(g):
            return g.scaled(1 / g.coefficient(4, 0, 0)), t
    raise DegenerateError(f"no admissible frame among {MAX_FRAMES} candidates")


def _det3(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


# -- normal form ---------------------------------------------------------------------------

def _sort_key(z):
    return (float(mpmath.re(z)), float(mpmath.im(z)))


def idr_form(rep: DetRep, profile: ToleranceProfile = DEFAULT_PROFILE, source_class: int | None = None,
             order=None) -> IdrForm:
    """Simultaneously diagonalize A and B and rescale to ``xI + yD + zR``.

    Eigenvalues are sorted by (real, imaginary) part unless ``order`` gives a
    permutation; column signs are fixed so the first row of R has positive
    real parts.
    """
    with profile.workprec():
        a, b, c = ([[to_mp(v) for v in row] for row in m] for m in rep.matrices)
        ainv_b = matmul(inverse(a), b)
        evals, evecs = mpmath.eig(mpmath.matrix(ainv_b))
        idx = sorted(range(4), key=lambda i: _sort_key(evals[i]))
        for i in range(4):
            for j in range(i + 1, 4):
                gap = abs(evals[idx[i]] - evals[idx[j]])
                if gap < profile.cluster_radius * max(1, abs(evals[idx[i]])):
                    raise DegenerateError("repeated eigenvalues: apply normalize_coordinates first")
        if order is not None:
            idx = [idx[k] for k in order]
        u = [[evecs[r, k] for k in idx] for r in range(4)]
        ut = transpose(u)
        d2 = matmul(matmul(ut, a), u)
        d3 = matmul(matmul(ut, b), u)
        scale = max(abs(d2[i][i]) for i in range(4))
        off = max(abs(d2[i][j]) + abs(d3[i][j]) for i in range(4) for j in range(4) if i != j)
        if off > profile.eps_residual * scale * 1e3:
            raise DegenerateError("eigenvectors do not diagonalize the pencil")
        d4 = [1 / mpmath.sqrt(d2[i][i]) for i in range(4)]
        diag = [d3[i][i] * d4[i] ** 2 for i in range(4)]
        rmat = matmul(matmul(ut, c), u)
        r = [[rmat[i][j] * d4[i] * d4[j] for j in range(4)] for i in range(4)]
        for j in range(1, 4):
            if mpmath.re(r[0][j]) < 0:
                for k in range(4):
                    r[j][k] = -r[j][k]
                    r[k][j] = -r[k][j]
        det = determinant_of([[MPoly.linear_form((int(i == j), diag[i] if i == j else 0, r[i][j]))
                               for j in range(4)] for i in range(4)])
        fpoly = rep.f.poly
        lead = to_mp(rep.f.coefficient(4, 0, 0))
        residual = max(abs(det.coefficient(e) - to_mp(fpoly.coefficient(e)) / lead) for e in _QUARTIC_EXPS)
        residual /= max(abs(to_mp(v)) for v in rep.f.coefficients) / abs(lead)
        size = max([abs(v) for v in diag] + [abs(v) for row in r for v in row])
        real = max([abs(mpmath.im(v)) for v in diag] + [abs(mpmath.im(v)) for row in r for v in row]) \
            <= profile.eps_residual * max(size, 1)
        if real:
            diag = [mpmath.re(v) for v in diag]
            r = [[mpmath.re(v) for v in row] for row in r]
        return IdrForm(tuple(diag), tuple(tuple(row) for row in r), real, residual, source_class)


from .kernel.poly import QUARTIC_MONOMIALS as _QUARTIC_EXPS  # noqa: E402


def find_real_idr(classes, profile: ToleranceProfile = DEFAULT_PROFILE) -> IdrForm | None:
    """The real normal form from the lowest-indexed class that has one, else None.

    ``classes`` are representations (or objects with a ``rep`` attribute) of a
    quartic already passed through :func:`normalize_coordinates`.
    """
    for k, cls in enumerate(classes):
        rep = getattr(cls, "rep", cls)
        form = idr_form(rep, profile, source_class=k)
        if form.is_real:
            return form
    return None


def all_idr_forms(classes, profile: ToleranceProfile = DEFAULT_PROFILE) -> list[IdrForm]:
    return [idr_form(getattr(cls, "rep", cls), profile, source_class=k) for k, cls in enumerate(classes)]


# -- membership ------------------------------------------------------------------------------

@dataclass(frozen=True)
class Membership:
    inside: bool
    near_singular: bool


def _cholesky_ok(m) -> bool:
    try:
        mpmath.cholesky(mpmath.matrix(m))
        return True
    except ValueError:
        return False


def spectrahedron_membership(point, rep, profile: ToleranceProfile = DEFAULT_PROFILE) -> Membership:
    """Positive definiteness of ``xA + yB + zC`` with a relative margin.

    ``rep`` may be a real DetRep or an IdrForm.
    """
    with profile.workprec():
        if isinstance(rep, IdrForm):
            x, y, z = (to_mp(v) for v in point)
            m = [[(x if i == j else 0) + (y * rep.D[i] if i == j else 0) + z * rep.R[i][j]
                  for j in range(4)] for i in range(4)]
        else:
            m = [[mpmath.re(to_mp(v)) for v in row] for row in rep.at([to_mp(v) for v in point])]
        norm = max(abs(v) for row in m for v in row)
        tol = profile.eps_rank * max(norm, 1)
        shrink = [[m[i][j] - (tol if i == j else 0) for j in range(4)] for i in range(4)]
        grow = [[m[i][j] + (tol if i == j else 0) for j in range(4)] for i in range(4)]
        inside = _cholesky_ok(shrink)
        near = not inside and _cholesky_ok(grow)
        return Membership(inside, near)
