"""Small helpers for points and hyperplanes of projective space."""

from __future__ import annotations

import mpmath

from .roots import to_mp


def normalize(vec, tie_tol=None) -> tuple:
    """Scale so the coordinate of largest modulus becomes 1.

    Coordinates whose moduli agree within the relative ``tie_tol`` count as
    tied and the first of them is chosen, which keeps the choice stable
    under rounding noise.
    """
    v = [mpmath.mpc(to_mp(c)) for c in vec]
    mods = [abs(c) for c in v]
    top = max(mods)
    if top == 0:
        raise ValueError("the zero vector is not a projective point")
    if tie_tol is None:
        tie_tol = mpmath.ldexp(1, -(mpmath.mp.prec // 4))
    k = next(i for i, m in enumerate(mods) if m >= top * (1 - tie_tol))
    pivot = v[k]
    out = [c / pivot for c in v]
    out[k] = mpmath.mpc(1)
    return tuple(out)


def is_real(vec, tol) -> bool:
    """True when the normalized vector has imaginary parts below ``tol``."""
    return all(abs(c.imag) <= tol for c in normalize(vec))


def realify(vec) -> tuple:
    return tuple(mpmath.mpc(mpmath.re(c), 0) for c in vec)


def conj(vec) -> tuple:
    return tuple(mpmath.conj(c) for c in vec)


def chordal_distance(p, q):
    """sin of the angle between two vectors of C^n (0 iff proportional)."""
    p = [to_mp(c) for c in p]
    q = [to_mp(c) for c in q]
    pp = mpmath.fsum(abs(c) ** 2 for c in p)
    qq = mpmath.fsum(abs(c) ** 2 for c in q)
    pq = abs(mpmath.fsum(mpmath.conj(a) * b for a, b in zip(p, q))) ** 2
    val = 1 - pq / (pp * qq)
    return mpmath.sqrt(max(val, 0))


def sort_key(vec) -> tuple:
    """Deterministic ordering key: real parts first, then imaginary parts."""
    v = normalize(vec)
    return tuple(float(c.real) for c in v) + tuple(float(c.imag) for c in v)


def cross(u, v) -> tuple:
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])
