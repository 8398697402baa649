"""Univariate root finding: Aberth-Ehrlich iteration at arbitrary precision."""

from __future__ import annotations

from fractions import Fraction

import mpmath
import numpy as np

from ..errors import ConvergenceError, PrecisionExhausted
from .poly import MPoly, trim
from .tolerance import DEFAULT_PROFILE, ToleranceProfile


def to_mp(c):
    """Convert an exact or numeric scalar to an mpmath number at current precision."""
    if isinstance(c, Fraction):
        return mpmath.mpf(c.numerator) / c.denominator
    if isinstance(c, (mpmath.mpf, mpmath.mpc)):
        return +c
    if isinstance(c, complex):
        return mpmath.mpc(c)
    return mpmath.mpf(c)


def horner(coeffs: list, z):
    """Value and derivative of sum(coeffs[k] z^k)."""
    p = coeffs[-1]
    dp = 0
    for c in reversed(coeffs[:-1]):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _initial_guesses(coeffs: list) -> list:
    """Double-precision roots of the scaled polynomial as starting values."""
    n = len(coeffs) - 1
    scale = max(abs(c) for c in coeffs)
    approx = []
    for c in reversed(coeffs):
        r = c / scale
        approx.append(complex(float(mpmath.re(r)), float(mpmath.im(r))))
    try:
        guess = np.roots(approx)
        if len(guess) == n and np.all(np.isfinite(guess)):
            # nudge exact repeats apart so the Aberth sums stay finite
            out = []
            for k, g in enumerate(guess):
                g = complex(g) + complex(1e-9 * (k + 1), 1e-9 * (k + 2))
                out.append(mpmath.mpc(g))
            return out
    except np.linalg.LinAlgError:
        pass
    radius = max(abs(c / coeffs[-1]) ** (mpmath.mpf(1) / (n - k))
                 for k, c in enumerate(coeffs[:-1]) if c != 0) if n else 1
    return [radius * mpmath.expj(2 * mpmath.pi * (k + 0.25) / n) for k in range(n)]


def _aberth(coeffs: list, tol, max_iter: int = 400) -> tuple[list, bool]:
    """Gauss-Seidel Aberth sweeps; a root freezes once its correction or its
    residual (relative to the Horner rounding bound) is negligible."""
    n = len(coeffs) - 1
    z = _initial_guesses(coeffs)
    abs_coeffs = [abs(c) for c in coeffs]
    done = [False] * n
    for _ in range(max_iter):
        for k in range(n):
            if done[k]:
                continue
            p, dp = horner(coeffs, z[k])
            bound, _ = horner(abs_coeffs, abs(z[k]))
            if abs(p) <= tol * bound:
                done[k] = True
                continue
            s = mpmath.fsum(1 / (z[k] - z[j]) for j in range(n) if j != k and z[k] != z[j])
            ratio = p / dp if dp != 0 else p
            denom = 1 - ratio * s
            w = ratio / denom if denom != 0 else ratio
            z[k] -= w
            if abs(w) < tol * max(1, abs(z[k])):
                done[k] = True
        if all(done):
            return z, True
    return z, False


def _derivative(coeffs: list, order: int) -> list:
    for _ in range(order):
        coeffs = [k * coeffs[k] for k in range(1, len(coeffs))]
    return coeffs


def _cluster(z: list, radius) -> list[list[int]]:
    parent = list(range(len(z)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(z)):
        for j in range(i + 1, len(z)):
            if abs(z[i] - z[j]) < radius * max(1, abs(z[i])):
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(len(z)):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def _coefficients(poly) -> list:
    if isinstance(poly, MPoly):
        present = {i for e in poly.terms for i, k in enumerate(e) if k}
        if len(present) > 1:
            raise ValueError("polynomial is not univariate")
        var = present.pop() if present else 0
        return poly.univariate(var)
    return list(poly)


def roots_univariate(poly, profile: ToleranceProfile = DEFAULT_PROFILE
                     ) -> list[tuple[mpmath.mpc, int]]:
    """All complex roots with multiplicities, sorted by (real, imaginary) part.

    ``poly`` is a univariate ``MPoly`` or a coefficient list (low to high).
    Each reported root satisfies ``|p(r)| < eps_residual * ||p|| * max(1,|r|)^n``.
    """
    coeffs = trim(_coefficients(poly))
    n = len(coeffs) - 1
    if n < 1:
        raise ValueError("polynomial must have degree at least 1")
    candidates = None
    for prof in profile.ladder():
        with prof.workprec():
            c = [to_mp(x) for x in coeffs]
            if c[-1] == 0:
                raise ValueError("leading coefficient vanishes")
            tol = mpmath.ldexp(1, -(prof.precision_bits - 16))
            with mpmath.workprec(prof.precision_bits + 32):
                z, _ = _aberth(c, tol)
            candidates = z
            result = _finish(c, z, prof)
            # clustered multiple roots converge slowly; the residual test decides
            if result is not None:
                return result
    raise PrecisionExhausted(f"root finding failed: best candidates {candidates}") \
        from ConvergenceError("Aberth iteration did not converge", candidates)


def _finish(c: list, z: list, prof: ToleranceProfile):
    n = len(c) - 1
    norm = max(abs(x) for x in c)
    out = []
    for group in _cluster(z, prof.cluster_radius):
        r = mpmath.fsum(z[i] for i in group) / len(group)
        # a root of multiplicity m is a simple root of the (m-1)-th derivative
        d = _derivative(c, len(group) - 1)
        for _ in range(4):
            p, dp = horner(d, r)
            if dp == 0:
                break
            r -= p / dp
        p, _ = horner(c, r)
        if abs(p) > prof.eps_residual * norm * max(1, abs(r)) ** n:
            return None
        out.append((mpmath.mpc(r), len(group)))
    out.sort(key=lambda rm: (float(mpmath.re(rm[0])), float(mpmath.im(rm[0]))))
    return out
