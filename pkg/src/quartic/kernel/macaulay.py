"""Macaulay resultant of n homogeneous polynomials in n variables."""

from __future__ import annotations

import random
from fractions import Fraction
from math import lcm, prod

import mpmath

from ..errors import QuarticError
from .poly import MPoly, monomials


def bareiss_det(matrix: list[list[int]]) -> int:
    """Fraction-free exact determinant of an integer matrix."""
    a = [list(r) for r in matrix]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1] if n else 1


def _is_exact(c) -> bool:
    return isinstance(c, (int, Fraction))


def _macaulay_matrices(polys: list[MPoly]):
    n = len(polys)
    degs = [p.degree() for p in polys]
    big_d = sum(d - 1 for d in degs) + 1
    cols = monomials(big_d, n)
    index = {m: k for k, m in enumerate(cols)}
    rows = []
    divisible_count = []
    for m in cols:
        hits = [i for i in range(n) if m[i] >= degs[i]]
        divisible_count.append(len(hits))
        i = hits[0]
        shift = list(m)
        shift[i] -= degs[i]
        row = [0] * len(cols)
        for e, c in polys[i].terms.items():
            row[index[tuple(a + b for a, b in zip(e, shift))]] = c
        rows.append(row)
    extraneous = [k for k, cnt in enumerate(divisible_count) if cnt >= 2]
    return rows, extraneous


def _det(rows, exact: bool):
    if not rows:
        return 1
    if exact:
        return bareiss_det(rows)
    return mpmath.det(mpmath.matrix(rows))


def _unimodular(n: int, rng: random.Random) -> list[list[int]]:
    t = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(2 * n):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        for r in range(n):
            t[r][i] += c * t[r][j]
    return t


def macaulay_resultant(polys: list[MPoly], seed: int = 0, max_retries: int = 8):
    """Resultant normalised so that Res(x1^d1, ..., xn^dn) = 1.

    Exact (int or Fraction) coefficients give an exact answer; otherwise the
    answer is computed in mpmath at the current precision.  When the
    extraneous minor vanishes, the variables are changed by a random
    determinant-one integer matrix, which leaves the resultant unchanged.
    """
    n = len(polys)
    if n == 0 or any(p.nvars != n for p in polys):
        raise ValueError("need n polynomials in n variables")
    if any(p.is_zero() for p in polys):
        return 0
    if any(not p.is_homogeneous() for p in polys):
        raise ValueError("polynomials must be homogeneous")
    exact = all(_is_exact(c) for p in polys for c in p.terms.values())
    scale = Fraction(1)
    if exact:
        # clear denominators; the resultant has degree prod(d_j, j != i) in p_i
        degs = [p.degree() for p in polys]
        scaled = []
        for i, p in enumerate(polys):
            den = lcm(*(Fraction(c).denominator for c in p.terms.values()))
            weight = prod(d for j, d in enumerate(degs) if j != i)
            scale /= Fraction(den) ** weight
            scaled.append(p.map_coeffs(lambda c, den=den: int(Fraction(c) * den)))
        polys = scaled
    rng = random.Random(seed)
    current = polys
    gens = MPoly.gens(polys[0].names)
    for _ in range(max_retries + 1):
        rows, extraneous = _macaulay_matrices(current)
        ext = _det([[rows[i][j] for j in extraneous] for i in extraneous], exact)
        if ext != 0:
            full = _det(rows, exact)
            if exact:
                value = Fraction(full, ext) * scale
                return int(value) if value.denominator == 1 else value
            return full / ext
        t = _unimodular(n, rng)
        subs = [sum((t[i][j] * gens[j] for j in range(n)), MPoly({}, gens[0].names)) for i in range(n)]
        current = [p.compose(subs) for p in polys]
    if exact and _has_common_zero(polys):
        return 0
    raise QuarticError("extraneous Macaulay minor vanished for every change of variables")


def _has_common_zero(polys: list[MPoly]) -> bool:
    """Column-rank deficiency of the matrix of all multiples in the Macaulay degree."""
    from .linalg import exact_nullspace

    n = len(polys)
    big_d = sum(p.degree() - 1 for p in polys) + 1
    cols = monomials(big_d, n)
    index = {m: k for k, m in enumerate(cols)}
    rows = []
    for p in polys:
        for shift in monomials(big_d - p.degree(), n):
            row = [0] * len(cols)
            for e, c in p.terms.items():
                row[index[tuple(a + b for a, b in zip(e, shift))]] = c
            rows.append(row)
    return len(exact_nullspace(rows)) > 0
