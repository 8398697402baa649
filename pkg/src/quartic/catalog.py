"""Named quartics and representations used in examples, tests and the CLI."""

from __future__ import annotations

from fractions import Fraction

from .curve import TernaryQuartic
from .kernel.poly import MPoly

x, y, z = MPoly.gens()

# Four ovals; all 28 bitangents are rational.
EDGE = TernaryQuartic.from_poly(25 * (x**4 + y**4 + z**4) - 34 * (x**2 * y**2 + x**2 * z**2 + y**2 * z**2))

# Linear symmetric 4x4 matrix whose determinant is EDGE.
EDGE_MATRIX = [
    [0, x + 2 * y, 2 * x + z, y - 2 * z],
    [x + 2 * y, 0, y + 2 * z, -2 * x + z],
    [2 * x + z, y + 2 * z, 0, x - 2 * y],
    [y - 2 * z, -2 * x + z, x - 2 * y, 0],
]

# Two nested ovals with (1:0:0) inside the inner one.
NESTED_OVALS = TernaryQuartic.from_poly(
    2 * x**4 + y**4 + z**4 - 3 * x**2 * y**2 - 3 * x**2 * z**2 + y**2 * z**2
)

# Positive quartic whose octad and Gram matrices are defined over Q(i).
EMPTY_MATRIX = [
    [52 * x + 12 * y - 60 * z, -26 * x - 6 * y + 30 * z, 48 * z, 48 * y],
    [-26 * x - 6 * y + 30 * z, 26 * x + 6 * y - 30 * z, -6 * x + 6 * y - 30 * z, -45 * x - 27 * y - 21 * z],
    [48 * z, -6 * x + 6 * y - 30 * z, -96 * x, 48 * x],
    [48 * y, -45 * x - 27 * y - 21 * z, 48 * x, -48 * x],
]

FERMAT = TernaryQuartic.from_poly(x**4 + y**4 + z**4)


def matrix_coefficients(matrix) -> tuple[list, list, list]:
    """Split a 4x4 matrix of linear forms into the coefficient matrices of x, y, z."""
    out = []
    for k in range(3):
        e = tuple(int(i == k) for i in range(3))
        out.append([[Fraction(entry.coefficient(e)) if isinstance(entry, MPoly) else Fraction(0)
                     for entry in row] for row in matrix])
    return out[0], out[1], out[2]
