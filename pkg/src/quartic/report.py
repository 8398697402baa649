"""Lossless JSON encoding of results and re-checking of their certificates."""

from __future__ import annotations

import math
import re
from fractions import Fraction

import mpmath

from .curve import TernaryQuartic
from .detrep import from_matrices
from .kernel.poly import QUARTIC_MONOMIALS, MPoly
from .kernel.roots import to_mp
from .kernel.tolerance import ToleranceProfile

SCHEMA = 1
_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def digits_for(bits: int) -> int:
    return max(15, int(bits * math.log10(2)))


def encode(value, digits: int):
    """Exact rationals as ``"p/q"``, reals and complexes as decimal strings at full precision."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, (int, Fraction)):
        return str(Fraction(value))
    if isinstance(value, (list, tuple)):
        return [encode(v, digits) for v in value]
    if isinstance(value, dict):
        return {str(k): encode(v, digits) for k, v in value.items()}
    if isinstance(value, float):
        value = mpmath.mpf(value)
    if isinstance(value, mpmath.mpc):
        if value.imag == 0:
            value = value.real
        else:
            re_part = mpmath.nstr(value.real, digits, min_fixed=-math.inf, max_fixed=math.inf)
            im_part = mpmath.nstr(abs(value.imag), digits, min_fixed=-math.inf, max_fixed=math.inf)
            return f"{re_part}{'-' if value.imag < 0 else '+'}{im_part}j"
    if isinstance(value, mpmath.mpf):
        return mpmath.nstr(value, digits, min_fixed=-math.inf, max_fixed=math.inf)
    if hasattr(value, "item"):  # numpy scalar
        return encode(value.item(), digits)
    raise TypeError(f"cannot encode {type(value).__name__}")


def decode(value):
    """Inverse of :func:`encode` for scalars and nested lists."""
    if isinstance(value, list):
        return [decode(v) for v in value]
    if isinstance(value, str):
        if _RATIONAL.match(value):
            return Fraction(value)
        return mpmath.mpmathify(value)
    return value


def make_report(command: str, f: TernaryQuartic | None, profile: ToleranceProfile, seed: int,
                payload: dict, certificates: dict | None = None) -> dict:
    digits = digits_for(profile.precision_bits)
    return {
        "schema": SCHEMA,
        "command": command,
        "quartic": [str(c) for c in f.coefficients] if f is not None else None,
        "precision_bits": profile.precision_bits,
        "seed": seed,
        "payload": encode(payload, digits),
        "certificates": encode(certificates or {}, digits),
    }


# -- verification -----------------------------------------------------------------------------

def _matrix(m):
    return [[decode(v) for v in row] for row in m]


def _rep_residual(f, mats):
    rep = from_matrices(*(_matrix(m) for m in mats), f=f, profile=None)
    return rep.residual


def _gram_residual(f, gram):
    from .steiner import gram_polynomial

    poly = gram_polynomial(_matrix(gram))
    norm = max(abs(to_mp(c)) for c in f.coefficients)
    return max(abs(to_mp(poly.coefficient(e)) - to_mp(f.poly.coefficient(e))) for e in QUARTIC_MONOMIALS) / norm


def _sos_residual(f, quadrics):
    from .steiner import GRAM_BASIS

    total = MPoly({})
    for q in quadrics:
        poly = MPoly({e: decode(c) for e, c in zip(GRAM_BASIS, q)})
        total = total + poly * poly
    norm = max(abs(to_mp(c)) for c in f.coefficients)
    return max(abs(to_mp(total.coefficient(e)) - to_mp(f.poly.coefficient(e))) for e in QUARTIC_MONOMIALS) / norm


def _bitangent_residual(f, line):
    from .bitangents import square_certificate

    return square_certificate(f, tuple(mpmath.mpc(to_mp(decode(c))) for c in line))[3]


def verify_report(report: dict) -> list[tuple[str, bool, object]]:
    """Re-check every residual certificate in a report; returns (name, ok, value) triples."""
    if report.get("schema") != SCHEMA:
        raise ValueError(f"unsupported report schema {report.get('schema')!r}")
    profile = ToleranceProfile(precision_bits=int(report["precision_bits"]))
    f = TernaryQuartic(tuple(Fraction(c) for c in report["quartic"])) if report.get("quartic") else None
    payload = report["payload"]
    command = report["command"]
    checks = []
    with profile.workprec():
        tol = profile.eps_residual
        if command == "bitangents":
            for k, b in enumerate(payload["bitangents"]):
                r = _bitangent_residual(f, b["line"])
                checks.append((f"bitangent {k}", r < tol, r))
        elif command in ("detrep", "octad"):
            r = _rep_residual(f, payload["representation"]["matrices"])
            checks.append(("determinant", r < tol, r))
        elif command == "reps36":
            for k, cls in enumerate(payload["classes"]):
                r = _rep_residual(f, cls["matrices"])
                checks.append((f"class {k}", r < tol, r))
        elif command == "gram63":
            for g in payload["grams"]:
                r = _gram_residual(f, g["G"])
                checks.append((f"gram {g['complex']}", r < tol, r))
        elif command == "sos":
            r = _sos_residual(f, payload["quadrics"])
            checks.append(("sum of squares", r < tol, r))
        elif command == "vinnikov" and payload.get("form") is not None:
            normalized = TernaryQuartic(tuple(Fraction(c) for c in payload["normalized_quartic"]))
            form = payload["form"]
            diag = [decode(v) for v in form["D"]]
            ident = [[int(i == j) for j in range(4)] for i in range(4)]
            dmat = [[diag[i] if i == j else 0 for j in range(4)] for i in range(4)]
            r = from_matrices(ident, dmat, _matrix(form["R"]), f=normalized, profile=None).residual
            checks.append(("normal form", r < tol, r))
        elif command == "spectrahedron-opt":
            from .spectrahedron import gram_param

            lam = [decode(v) for v in payload["lambda"]]
            g = gram_param(f, lam)
            given = _matrix(payload["G"])
            scale = max(abs(to_mp(v)) for row in g for v in row)
            r = max(abs(to_mp(a) - to_mp(b)) for ra, rb in zip(g, given) for a, b in zip(ra, rb)) / scale
            checks.append(("gram structure", r < tol, r))
            eig = min(mpmath.eigsy(mpmath.matrix([[to_mp(v) for v in row] for row in g]), eigvals_only=True))
            checks.append(("positive semidefinite", eig > -profile.eps_rank * scale, eig))
    return checks
