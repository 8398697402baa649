"""Symmetric linear determinantal representations det(xA + yB + zC) = gamma * f."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from .curve import TernaryQuartic
from .errors import CertificateError
from .kernel.linalg import default_denominator_bound, rationalize
from .kernel.poly import QUARTIC_MONOMIALS, MPoly, poly_det
from .kernel.roots import to_mp
from .kernel.tolerance import DEFAULT_PROFILE, ToleranceProfile


def _is_exact(v) -> bool:
    return isinstance(v, (int, Fraction))


def _freeze(m) -> tuple:
    return tuple(tuple(Fraction(v) if isinstance(v, int) else v for v in row) for row in m)


@dataclass(frozen=True)
class DetRep:
    """Three symmetric 4x4 matrices with ``det(xA+yB+zC) = gamma * f``.

    Entries are Fractions when the representation is known exactly and mpmath
    numbers otherwise.  ``residual`` is the largest coefficient of
    ``det - gamma*f`` relative to ``||gamma*f||``.
    """

    A: tuple
    B: tuple
    C: tuple
    gamma: object
    f: TernaryQuartic
    residual: object = 0

    @property
    def exact(self) -> bool:
        return all(_is_exact(v) for m in (self.A, self.B, self.C) for row in m for v in row)

    @property
    def matrices(self) -> tuple:
        return self.A, self.B, self.C

    def linear_matrix(self) -> list[list[MPoly]]:
        return linear_matrix(self.A, self.B, self.C)

    def at(self, point) -> list[list]:
        x, y, z = point
        return [[self.A[i][j] * x + self.B[i][j] * y + self.C[i][j] * z for j in range(4)]
                for i in range(4)]

    def determinant(self) -> MPoly:
        return determinant_of(self.linear_matrix())

    def is_real(self, tol=None) -> bool:
        if self.exact:
            return True
        tol = tol if tol is not None else DEFAULT_PROFILE.eps_residual
        scale = max(abs(to_mp(v)) for m in self.matrices for row in m for v in row)
        return all(abs(mpmath.im(to_mp(v))) <= tol * scale
                   for m in self.matrices for row in m for v in row)

    def congruent(self, u: Sequence[Sequence]) -> DetRep:
        """The representation ``U^T (xA+yB+zC) U`` (determinant scales by det(U)^2)."""
        mats = []
        for m in self.matrices:
            mats.append([[sum(u[k][i] * m[k][l] * u[l][j] for k in range(4) for l in range(4))
                          for j in range(4)] for i in range(4)])
        return from_matrices(*mats, f=self.f, profile=None)

    @classmethod
    def from_linear_matrix(cls, matrix, f: TernaryQuartic | None = None,
                           profile: ToleranceProfile | None = DEFAULT_PROFILE) -> DetRep:
        mats = []
        for k in range(3):
            e = tuple(int(i == k) for i in range(3))
            mats.append([[entry.coefficient(e) if isinstance(entry, MPoly) else 0 for entry in row]
                         for row in matrix])
        return from_matrices(*mats, f=f, profile=profile)


def linear_matrix(A, B, C) -> list[list[MPoly]]:
    return [[MPoly.linear_form((A[i][j], B[i][j], C[i][j])) for j in range(4)] for i in range(4)]


def determinant_of(matrix) -> MPoly:
    d = poly_det(matrix)
    return d if isinstance(d, MPoly) else MPoly.constant(d)


def _check_symmetric(m):
    for i in range(4):
        for j in range(i):
            a, b = m[i][j], m[j][i]
            if _is_exact(a) and _is_exact(b):
                if a != b:
                    raise ValueError("matrix is not symmetric")
            elif abs(to_mp(a) - to_mp(b)) > DEFAULT_PROFILE.eps_residual * max(1, abs(to_mp(a))):
                raise ValueError("matrix is not symmetric")


def from_matrices(A, B, C, f: TernaryQuartic | None = None,
                  profile: ToleranceProfile | None = DEFAULT_PROFILE) -> DetRep:
    """Build a certified representation; ``f`` defaults to the determinant itself.

    With ``profile=None`` the residual is computed but not enforced.
    """
    mats = [_freeze(m) for m in (A, B, C)]
    for m in mats:
        _check_symmetric(m)
    det = determinant_of(linear_matrix(*mats))
    if f is None:
        if not all(_is_exact(v) for m in mats for row in m for v in row):
            raise ValueError("an inexact representation needs its quartic")
        f = TernaryQuartic.from_poly(det)
        return DetRep(*mats, gamma=Fraction(1), f=f, residual=0)
    gamma, residual = proportionality(det, f)
    if profile is not None and residual > profile.eps_residual:
        raise CertificateError(f"determinant is not proportional to f (residual {mpmath.nstr(residual, 5)})")
    return DetRep(*mats, gamma=gamma, f=f, residual=residual)


def proportionality(poly: MPoly, f: TernaryQuartic):
    """(gamma, relative residual) for ``poly ~ gamma * f``."""
    fv = list(f.coefficients)
    pv = [poly.coefficient(e) for e in QUARTIC_MONOMIALS]
    if all(_is_exact(v) for v in pv):
        k = max(range(15), key=lambda i: abs(fv[i]))
        gamma = Fraction(pv[k]) / fv[k]
        diff = max(abs(Fraction(p) - gamma * c) for p, c in zip(pv, fv))
        scale = max(abs(gamma) * max(abs(c) for c in fv), Fraction(1, 10**300))
        residual = 0 if diff == 0 else mpmath.mpf(diff.numerator) / diff.denominator / to_mp(scale)
        return gamma, residual
    fm = [to_mp(c) for c in fv]
    pm = [to_mp(v) for v in pv]
    num = mpmath.fsum(mpmath.conj(a) * b for a, b in zip(fm, pm))
    den = mpmath.fsum(abs(a) ** 2 for a in fm)
    gamma = num / den
    scale = abs(gamma) * max(abs(a) for a in fm)
    if scale == 0:
        return gamma, mpmath.inf
    residual = max(abs(b - gamma * a) for a, b in zip(fm, pm)) / scale
    return gamma, residual


def try_rationalize_matrices(mats, profile: ToleranceProfile):
    """Exact copies of the matrices when every entry rationalizes, else None."""
    bound = default_denominator_bound(profile)
    out = []
    for m in mats:
        rows = []
        for row in m:
            vals = []
            for v in row:
                q = v if _is_exact(v) else rationalize(v, bound, profile)
                if q is None:
                    return None
                vals.append(q)
            rows.append(vals)
        out.append(rows)
    return out


def rational_fourth_root(q: Fraction):
    from math import isqrt

    if q <= 0:
        return None
    num, den = q.numerator, q.denominator
    rn, rd = isqrt(isqrt(num)), isqrt(isqrt(den))
    if rn**4 == num and rd**4 == den:
        return Fraction(rn, rd)
    return None


def normalize_scale(mats, f: TernaryQuartic, profile: ToleranceProfile) -> DetRep:
    """Rescale so gamma = 1 when a suitable fourth root exists, preferring exact entries."""
    scale = max((to_mp(v) for m in mats for row in m for v in row), key=abs)
    mats = [[[to_mp(v) / scale for v in row] for row in m] for m in mats]
    exact = try_rationalize_matrices(mats, profile)
    if exact is not None:
        rep = from_matrices(*exact, f=f, profile=profile)
        root = rational_fourth_root(Fraction(rep.gamma))
        if root is not None:
            exact = [[[v / root for v in row] for row in m] for m in exact]
            rep = from_matrices(*exact, f=f, profile=profile)
        return rep
    rep = from_matrices(*mats, f=f, profile=profile)
    gamma = to_mp(rep.gamma)
    if rep.is_real(profile.eps_residual):
        if mpmath.re(gamma) > 0:
            root = mpmath.re(gamma) ** (mpmath.mpf(1) / 4)
            mats = [[[mpmath.re(v) / root for v in row] for row in m] for m in mats]
            return from_matrices(*mats, f=f, profile=profile)
        return rep
    root = mpmath.root(gamma, 4)
    mats = [[[v / root for v in row] for row in m] for m in mats]
    return from_matrices(*mats, f=f, profile=profile)
