"""Ternary quartics with exact rational coefficients."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Sequence

from .errors import SingularCurveError
from .kernel.macaulay import macaulay_resultant
from .kernel.poly import QUARTIC_MONOMIALS, MPoly

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(token: str) -> Fraction:
    token = token.strip()
    if not _RATIONAL.match(token):
        raise ValueError(f"malformed rational {token!r}")
    return Fraction(token)


@dataclass(frozen=True)
class TernaryQuartic:
    """Quartic form given by its 15 coefficients c400 c310 ... c004.

    The order is lexicographic in the exponent of x, then y:
    ``c400 c310 c301 c220 c211 c202 c130 c121 c112 c103 c040 c031 c022 c013 c004``.
    """

    coefficients: tuple[Fraction, ...]
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.coefficients)
        if len(coeffs) != 15:
            raise ValueError("a ternary quartic has 15 coefficients")
        if not any(coeffs):
            raise ValueError("the zero polynomial is not a quartic")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_string(cls, text: str) -> TernaryQuartic:
        """Parse 15 whitespace- or comma-separated rationals, optionally after ``quartic:``."""
        text = text.strip()
        if text.lower().startswith("quartic:"):
            text = text[len("quartic:"):]
        tokens = [t for t in re.split(r"[\s,]+", text) if t]
        if len(tokens) != 15:
            raise ValueError(f"expected 15 coefficients, got {len(tokens)}")
        return cls(tuple(parse_rational(t) for t in tokens))

    @classmethod
    def from_poly(cls, poly: MPoly) -> TernaryQuartic:
        if poly.nvars != 3 or not poly.is_homogeneous() or poly.degree() != 4:
            raise ValueError("need a homogeneous quartic in three variables")
        return cls(tuple(Fraction(c) for c in poly.vector(QUARTIC_MONOMIALS)))

    def coefficient(self, i: int, j: int, k: int) -> Fraction:
        return self.coefficients[QUARTIC_MONOMIALS.index((i, j, k))]

    @cached_property
    def poly(self) -> MPoly:
        return MPoly.from_vector(self.coefficients, QUARTIC_MONOMIALS)

    @cached_property
    def integer_poly(self) -> MPoly:
        """Primitive integer multiple of the form."""
        den = lcm(*(c.denominator for c in self.coefficients))
        ints = [int(c * den) for c in self.coefficients]
        g = 0
        for v in ints:
            g = gcd(g, v)
        return MPoly.from_vector([v // g for v in ints], QUARTIC_MONOMIALS)

    def __call__(self, x, y, z):
        return self.poly(x, y, z)

    def norm(self) -> Fraction:
        return max(abs(c) for c in self.coefficients)

    def transform(self, matrix: Sequence[Sequence]) -> TernaryQuartic:
        """The quartic ``f(T u)`` for a 3x3 rational matrix ``T``."""
        gens = MPoly.gens()
        subs = [sum((Fraction(matrix[i][j]) * gens[j] for j in range(3)), MPoly()) for i in range(3)]
        return TernaryQuartic.from_poly(self.poly.compose(subs))

    def scaled(self, factor) -> TernaryQuartic:
        return TernaryQuartic(tuple(c * Fraction(factor) for c in self.coefficients))

    def discriminant(self):
        """Macaulay resultant of the three partial derivatives (exact)."""
        if "disc" not in self._cache:
            p = self.poly
            self._cache["disc"] = macaulay_resultant([p.diff(i) for i in range(3)])
        return self._cache["disc"]

    def is_smooth(self) -> bool:
        return self.discriminant() != 0

    def ensure_smooth(self) -> TernaryQuartic:
        if not self.is_smooth():
            raise SingularCurveError("the quartic is singular (discriminant vanishes)")
        return self

    def to_str(self) -> str:
        return self.poly.to_str()

    def __str__(self):
        return self.to_str()

    def __hash__(self):
        return hash(self.coefficients)

    def __eq__(self, other):
        return isinstance(other, TernaryQuartic) and self.coefficients == other.coefficients
