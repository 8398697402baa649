"""Sparse multivariate polynomials with generic coefficients.

Coefficients may be ``int``, ``fractions.Fraction`` or mpmath numbers; the
arithmetic never converts between them, so exact inputs stay exact.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import mpmath

from ..errors import QuarticError

XYZ = ("x", "y", "z")


def monomials(degree: int, nvars: int = 3) -> list[tuple[int, ...]]:
    """Exponent vectors of the given degree, degrevlex-descending."""
    exps = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        exps.append(tuple(e))
    return sorted(set(exps), key=degrevlex_key, reverse=True)


def degrevlex_key(exp: tuple[int, ...]):
    # larger key = larger monomial; ties in degree broken by smaller trailing exponents
    return (sum(exp), tuple(-e for e in reversed(exp)))


# Coefficient order of a ternary quartic used for input and output.
QUARTIC_MONOMIALS: tuple[tuple[int, int, int], ...] = tuple(
    sorted(((a, b, 4 - a - b) for a in range(5) for b in range(5 - a)), reverse=True)
)

# Basis of ternary quadrics used for Gram matrices.
QUADRIC_BASIS: tuple[tuple[int, int, int], ...] = (
    (2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 0), (1, 0, 1), (0, 1, 1),
)


def _is_zero(c) -> bool:
    return c == 0


class MPoly:
    """Immutable sparse polynomial ``{exponent tuple: coefficient}``."""

    __slots__ = ("names", "_terms")

    def __init__(self, terms: Mapping[tuple[int, ...], object] | None = None,
                 names: Sequence[str] = XYZ):
        self.names = tuple(names)
        n = len(self.names)
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != n:
                raise ValueError(f"exponent {exp} does not match variables {self.names}")
            if not _is_zero(c):
                clean[exp] = c
        self._terms = clean

    # -- construction -----------------------------------------------------
    @classmethod
    def gen(cls, var: int | str, names: Sequence[str] = XYZ) -> MPoly:
        names = tuple(names)
        i = names.index(var) if isinstance(var, str) else var
        exp = [0] * len(names)
        exp[i] = 1
        return cls({tuple(exp): 1}, names)

    @classmethod
    def gens(cls, names: Sequence[str] = XYZ) -> tuple[MPoly, ...]:
        return tuple(cls.gen(i, names) for i in range(len(names)))

    @classmethod
    def constant(cls, c, names: Sequence[str] = XYZ) -> MPoly:
        return cls({(0,) * len(names): c}, names)

    @classmethod
    def from_vector(cls, coeffs: Iterable, basis: Sequence[tuple[int, ...]],
                    names: Sequence[str] = XYZ) -> MPoly:
        return cls(dict(zip(basis, coeffs)), names)

    @classmethod
    def linear_form(cls, coeffs: Sequence, names: Sequence[str] = XYZ) -> MPoly:
        n = len(names)
        basis = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        return cls.from_vector(coeffs, basis, names)

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> Mapping[tuple[int, ...], object]:
        return MappingProxyType(self._terms)

    @property
    def nvars(self) -> int:
        return len(self.names)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, var: int | str) -> int:
        i = self._index(var)
        return max((e[i] for e in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def coefficient(self, exp: tuple[int, ...]):
        return self._terms.get(tuple(exp), 0)

    def vector(self, basis: Sequence[tuple[int, ...]]) -> list:
        """Coefficients on ``basis``; raises if a term falls outside it."""
        extra = set(self._terms) - set(basis)
        if extra:
            raise ValueError(f"terms {sorted(extra)} outside the given basis")
        return [self._terms.get(b, 0) for b in basis]

    def norm(self):
        """Largest coefficient modulus."""
        return max((abs(c) for c in self._terms.values()), default=0)

    def _index(self, var: int | str) -> int:
        return self.names.index(var) if isinstance(var, str) else var

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> MPoly:
        if isinstance(other, MPoly):
            if other.names != self.names:
                raise ValueError("polynomials over different variables")
            return other
        return MPoly.constant(other, self.names)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return MPoly(out, self.names)

    __radd__ = __add__

    def __neg__(self):
        return MPoly({e: -c for e, c in self._terms.items()}, self.names)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            if _is_zero(other):
                return MPoly({}, self.names)
            return MPoly({e: c * other for e, c in self._terms.items()}, self.names)
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MPoly(out, self.names)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, MPoly):
            raise TypeError("use divide_exact for polynomial division")
        if isinstance(scalar, int):
            scalar = Fraction(scalar)
        return MPoly({e: c / scalar for e, c in self._terms.items()}, self.names)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = MPoly.constant(1, self.names)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            other = MPoly.constant(other, self.names)
        return self.names == other.names and self._terms == other._terms

    def __hash__(self):
        return hash((self.names, frozenset(self._terms.items())))

    # -- evaluation and transforms ------------------------------------------
    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (tuple, list)):
            point = tuple(point[0])
        if len(point) != self.nvars:
            raise ValueError("point has wrong dimension")
        powers: list[dict[int, object]] = [{0: 1} for _ in point]
        total = 0
        for exp, c in self._terms.items():
            term = c
            for i, k in enumerate(exp):
                if k:
                    cache = powers[i]
                    if k not in cache:
                        cache[k] = point[i] ** k
                    term = term * cache[k]
            total = total + term
        return total

    def diff(self, var: int | str) -> MPoly:
        i = self._index(var)
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return MPoly(out, self.names)

    def map_coeffs(self, fn) -> MPoly:
        return MPoly({e: fn(c) for e, c in self._terms.items()}, self.names)

    def compose(self, subs: Sequence) -> MPoly:
        """Substitute ``subs[i]`` (polynomials or scalars) for variable ``i``."""
        if len(subs) != self.nvars:
            raise ValueError("need one substitute per variable")
        first = next((s for s in subs if isinstance(s, MPoly)), None)
        names = first.names if first is not None else self.names
        subs = [s if isinstance(s, MPoly) else MPoly.constant(s, names) for s in subs]
        powers: list[dict[int, MPoly]] = [{0: MPoly.constant(1, names), 1: s} for s in subs]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = power(i, k - 1) * subs[i]
            return cache[k]

        total = MPoly({}, names)
        for exp, c in self._terms.items():
            term = MPoly.constant(c, names)
            for i, k in enumerate(exp):
                if k:
                    term = term * power(i, k)
            total = total + term
        return total

    def coeffs_in(self, var: int | str) -> list[MPoly]:
        """Coefficients of ``var**k`` for k = 0..deg, as polynomials free of ``var``."""
        i = self._index(var)
        d = self.degree_in(i)
        buckets: list[dict] = [{} for _ in range(max(d, 0) + 1)]
        for e, c in self._terms.items():
            ne = list(e)
            ne[i] = 0
            buckets[e[i]][tuple(ne)] = c
        return [MPoly(b, self.names) for b in buckets]

    def univariate(self, var: int | str = 0) -> list:
        """Coefficient list (low to high) when ``var`` is the only variable present."""
        i = self._index(var)
        d = self.degree_in(i)
        out = [0] * (max(d, 0) + 1)
        for e, c in self._terms.items():
            if any(k for j, k in enumerate(e) if j != i):
                raise ValueError("polynomial involves other variables")
            out[e[i]] = c
        return out

    # -- display ------------------------------------------------------------
    def __repr__(self):
        return f"MPoly({self.to_str()!r})"

    def to_str(self, fmt=None) -> str:
        if not self._terms:
            return "0"
        fmt = fmt or _format_coefficient
        parts = []
        for e in sorted(self._terms, key=degrevlex_key, reverse=True):
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(self.names, e) if k
            )
            c = fmt(self._terms[e])
            if mono:
                if c == "1":
                    parts.append(mono)
                elif c == "-1":
                    parts.append("-" + mono)
                else:
                    parts.append(f"{c}*{mono}")
            else:
                parts.append(c)
        return " + ".join(parts).replace("+ -", "- ")


def _format_coefficient(c) -> str:
    if isinstance(c, (mpmath.mpf, mpmath.mpc)):
        return mpmath.nstr(c, 20)
    s = str(c)
    if isinstance(c, Fraction) and c.denominator != 1:
        return f"({s})"
    return s


# -- determinants and resultants ------------------------------------------------

def poly_det(matrix: Sequence[Sequence]):
    """Division-free determinant (Laplace expansion with memoised minors).

    Works for any commutative coefficient ring, in particular matrices of
    polynomials.  Cost is about ``n * 2**n`` products, fine for n <= 12.
    """
    n = len(matrix)
    if n == 0:
        return 1
    if any(len(row) != n for row in matrix):
        raise ValueError("matrix must be square")
    memo: dict[int, object] = {}

    def minor(cols: int):
        # determinant of rows r..n-1 restricted to the column bitmask
        if cols in memo:
            return memo[cols]
        r = n - bin(cols).count("1")
        if r == n - 1:
            j = cols.bit_length() - 1
            val = matrix[r][j]
        else:
            val = 0
            sign = 1
            for j in range(n):
                if cols >> j & 1:
                    entry = matrix[r][j]
                    if not _entry_is_zero(entry):
                        sub = minor(cols & ~(1 << j))
                        term = entry * sub
                        val = val + term if sign > 0 else val - term
                    sign = -sign
        memo[cols] = val
        return val

    return minor((1 << n) - 1)


def _entry_is_zero(entry) -> bool:
    return entry.is_zero() if isinstance(entry, MPoly) else entry == 0


def sylvester_matrix(a: MPoly, b: MPoly, var: int | str) -> list[list[MPoly]]:
    ca = a.coeffs_in(var)[::-1]  # leading coefficient first
    cb = b.coeffs_in(var)[::-1]
    m, n = len(ca) - 1, len(cb) - 1
    zero = MPoly({}, a.names)
    size = m + n
    rows = []
    for i in range(n):
        rows.append([zero] * i + ca + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + cb + [zero] * (size - n - 1 - i))
    return rows


def resultant(a: MPoly, b: MPoly, var: int | str) -> MPoly:
    """Sylvester resultant of ``a`` and ``b`` with respect to ``var``."""
    if a.names != b.names:
        raise ValueError("polynomials over different variables")
    da, db = a.degree_in(var), b.degree_in(var)
    if da <= 0 and db <= 0:
        raise QuarticError("nothing to eliminate")
    if da < 0 or db < 0:
        return MPoly({}, a.names)
    res = poly_det(sylvester_matrix(a, b, var))
    return res if isinstance(res, MPoly) else MPoly.constant(res, a.names)


# -- univariate helpers on coefficient lists (low to high) -----------------------

def trim(coeffs: list) -> list:
    out = list(coeffs)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def divmod_univariate(num: list, den: list) -> tuple[list, list]:
    """Polynomial long division; exact for Fraction/int data."""
    num, den = trim(num), trim(den)
    if den == [0]:
        raise ZeroDivisionError("division by the zero polynomial")
    lead = den[-1]
    if isinstance(lead, int):
        lead = Fraction(lead)
    rem = list(num)
    quot = [0] * max(len(num) - len(den) + 1, 1)
    for k in range(len(num) - len(den), -1, -1):
        q = rem[k + len(den) - 1] / lead
        if isinstance(q, Fraction) and q.denominator == 1:
            q = int(q)
        quot[k] = q
        if q != 0:
            for j, d in enumerate(den):
                rem[k + j] -= q * d
    rem = trim(rem[: len(den) - 1] or [0])
    return trim(quot), rem
