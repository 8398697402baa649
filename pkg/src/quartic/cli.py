"""Command-line front end: ``quartic <command> [--in FILE | --coeffs "..."] [options]``."""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction

from .curve import TernaryQuartic, parse_rational
from .errors import DegenerateError, QuarticError
from .kernel.tolerance import ToleranceProfile
from .report import decode, make_report, verify_report

USAGE_ERROR = 1
DEGENERATE = 2

QUARTIC_COMMANDS = ("bitangents", "classify", "detrep", "reps36", "octad", "steiner", "gram63", "sos",
                    "vinnikov", "spectrahedron-opt")
OTHER_COMMANDS = ("octad-check", "rank-stats", "net-classify", "verify")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- input ------------------------------------------------------------------------------------

def read_quartic(args) -> TernaryQuartic:
    if args.coeffs:
        text = args.coeffs
    elif args.input:
        with open(args.input) as fh:
            lines = [ln for ln in fh.read().splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not lines:
            raise UsageError(f"{args.input}: no quartic line")
        text = lines[0]
    else:
        raise UsageError("a quartic is required: use --in FILE or --coeffs")
    try:
        return TernaryQuartic.from_string(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _read_rows(path: str, width: int) -> list[list[Fraction]]:
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#")[0].strip()
            if ":" in line:
                line = line.split(":", 1)[1]
            tokens = line.replace(",", " ").split()
            if not tokens:
                continue
            if len(tokens) != width:
                raise UsageError(f"{path}: expected {width} rationals per line, got {len(tokens)}")
            try:
                rows.append([parse_rational(t) for t in tokens])
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
    return rows


def read_points(path: str) -> list[list[Fraction]]:
    rows = _read_rows(path, 4)
    if len(rows) != 8:
        raise UsageError(f"{path}: expected 8 points, got {len(rows)}")
    return rows


def read_net(path: str):
    """Three lines ``A: ...``, ``B: ...``, ``C: ...`` of 16 rationals (row-major 4x4)."""
    rows = _read_rows(path, 16)
    if len(rows) != 3:
        raise UsageError(f"{path}: expected three 4x4 matrices")
    return [[row[4 * i:4 * i + 4] for i in range(4)] for row in rows]


# -- commands ---------------------------------------------------------------------------------

def _rep_payload(rep) -> dict:
    return {"matrices": [list(map(list, m)) for m in rep.matrices], "gamma": rep.gamma,
            "exact": rep.exact, "residual": rep.residual}


def cmd_bitangents(f, profile, args):
    from .bitangents import compute_bitangents

    bts = compute_bitangents(f, profile, seed=args.seed)
    payload = {"count": len(bts), "real": sum(b.is_real for b in bts),
               "bitangents": [{"line": list(b.line), "real": b.is_real, "hyperflex": b.is_hyperflex,
                               "contact_points": [list(p) for p in b.contact_points], "residual": b.residual}
                              for b in bts]}
    text = [f"{len(bts)} bitangents, {payload['real']} real"]
    text += [f"  {'R' if b.is_real else 'C'}  {b.to_str(12)}" for b in bts]
    return payload, {"max_residual": max(b.residual for b in bts)}, text


def cmd_classify(f, profile, args):
    from .classify import classify_topology

    c = classify_topology(f, profile=profile, seed=args.seed)
    payload = {"topology": c.topology.value, "real_bitangents": c.real_bitangents,
               "real_octad_points": c.real_octad_points, "real_steiner": c.real_steiner,
               "sign_witness": list(c.sign_witness) if c.sign_witness else None}
    return payload, {}, [f"{c.topology.value}  (real bitangents {c.real_bitangents}, "
                         f"real Steiner complexes {c.real_steiner})"]


def cmd_detrep(f, profile, args):
    from .dixon import dixon_detrep

    rep = dixon_detrep(f, profile, seed=args.seed)
    text = [f"det(xA+yB+zC) = gamma f, gamma = {rep.gamma}, exact = {rep.exact}"]
    return {"representation": _rep_payload(rep)}, {"residual": rep.residual}, text


def cmd_reps36(f, profile, args):
    from .dixon import dixon_detrep
    from .octad import all_36_reps

    classes = all_36_reps(dixon_detrep(f, profile, seed=args.seed), profile)
    payload = {"classes": [dict(_rep_payload(c.rep), label=c.label) for c in classes]}
    text = ["36 classes"] + [f"  {c.label}  exact={c.rep.exact}" for c in classes]
    return payload, {"max_residual": max(c.rep.residual for c in classes)}, text


def cmd_octad(f, profile, args):
    from .dixon import dixon_detrep
    from .octad import cayley_octad

    rep = dixon_detrep(f, profile, seed=args.seed)
    octad = cayley_octad(rep, profile, seed=args.seed)
    payload = {"representation": _rep_payload(rep), "points": [list(p) for p in octad.points],
               "conjugation": list(octad.conjugation) if octad.conjugation else None}
    return payload, {"quadric_residual": octad.residual}, [f"octad residual {octad.residual}"]


def cmd_steiner(f, profile, args):
    from .bitangents import compute_bitangents
    from .classify import _conjugate_index
    from .dixon import dixon_detrep
    from .octad import bitangent_matrix, cayley_octad
    from .steiner import enumerate_steiner

    bts = compute_bitangents(f, profile, seed=args.seed)
    rep = dixon_detrep(f, profile, seed=args.seed, bitangents=bts)
    bm = bitangent_matrix(rep, cayley_octad(rep, profile, seed=args.seed), bts, profile)
    with profile.workprec():
        conj = _conjugate_index(bts, profile)
    out = []
    for cx in enumerate_steiner():
        pairs = [tuple(sorted(p)) for p in cx.bitangent_pairs(bm)]
        real = {frozenset(conj[i] for i in p) for p in pairs} == {frozenset(p) for p in pairs}
        out.append({"complex": cx.name, "kind": cx.kind, "bitangent_pairs": [list(p) for p in pairs],
                    "real": real})
    payload = {"complexes": out, "real": sum(c["real"] for c in out)}
    return payload, {}, [f"63 Steiner complexes, {payload['real']} real"]


def _grams(f, profile, args):
    from .spectrahedron import steiner_grams

    return steiner_grams(f, profile=profile, seed=args.seed)[0]


def _gram_payload(g) -> dict:
    return {"complex": g.complex_label.name, "G": [list(r) for r in g.G], "rank": g.rank, "real": g.is_real,
            "psd": g.is_psd, "exact": g.exact, "residual": g.residual}


def cmd_gram63(f, profile, args):
    grams = _grams(f, profile, args)
    payload = {"grams": [_gram_payload(g) for g in grams], "real": sum(g.is_real for g in grams),
               "psd": sum(g.is_psd for g in grams)}
    text = [f"63 Gram matrices of rank 3: {payload['real']} real, {payload['psd']} positive semidefinite"]
    text += [f"  {g.complex_label.name:>10}  real={g.is_real} psd={g.is_psd}" for g in grams if g.is_real]
    return payload, {"max_residual": max(g.residual for g in grams)}, text


def cmd_sos(f, profile, args):
    from .steiner import GRAM_BASIS, sos_decompose

    grams = _grams(f, profile, args)
    if args.complex:
        chosen = [g for g in grams if g.complex_label.name == args.complex]
        if not chosen:
            raise UsageError(f"unknown Steiner complex {args.complex!r}")
    else:
        chosen = [g for g in grams if g.is_psd] or grams
    g = chosen[0]
    quads = sos_decompose(g, profile)
    payload = {"complex": g.complex_label.name, "real": g.is_psd,
               "quadrics": [[q.coefficient(e) for e in GRAM_BASIS] for q in quads]}
    text = [f"f = q1^2 + q2^2 + q3^2 from complex {g.complex_label.name}"]
    text += [f"  q{k + 1} = {q.to_str()}" for k, q in enumerate(quads)]
    return payload, {}, text


def cmd_vinnikov(f, profile, args):
    from .dixon import dixon_detrep
    from .octad import all_36_reps
    from .vinnikov import find_real_idr, normalize_coordinates

    g, transform = normalize_coordinates(f, seed=args.seed)
    classes = all_36_reps(dixon_detrep(g, profile, seed=args.seed), profile)
    form = find_real_idr(classes, profile)
    payload = {"normalized_quartic": [str(c) for c in g.coefficients], "transform": transform,
               "form": None if form is None else {"D": list(form.D), "R": [list(r) for r in form.R],
                                                  "class": form.source_class}}
    text = ["no class gives a real normal form" if form is None
            else f"real normal form from class {form.source_class}: D = {[str(d) for d in form.D]}"]
    return payload, {"residual": None if form is None else form.residual}, text


def cmd_spectrahedron(f, profile, args):
    from .spectrahedron import sdp_maximize

    if not args.objective:
        raise UsageError("--objective \"c1 ... c6\" is required")
    try:
        objective = [parse_rational(t) for t in args.objective.replace(",", " ").split()]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if len(objective) != 6:
        raise UsageError("the objective has six coefficients")
    res = sdp_maximize(f, objective, profile)
    lam = res.lambda_exact if res.lambda_exact is not None else res.lambda_opt
    payload = {"lambda": lam, "lambda_decimal": res.lambda_opt, "G": res.G_opt, "rank": res.rank,
               "objective_value": res.objective_value, "exact": res.lambda_exact is not None}
    text = [f"rank {res.rank}, value {res.objective_value}", "lambda = " + ", ".join(str(v) for v in lam)]
    return payload, {"duality_gap": res.duality_gap}, text


def cmd_rank_stats(args, profile):
    from .spectrahedron import rank_statistics

    st = rank_statistics(args.samples, seed=args.seed)
    payload = {"samples": st.total, "counts": {str(k): v for k, v in st.counts.items()},
               "fractions": {str(k): st.fraction(k) for k in st.counts}}
    text = [f"rank {k}: {v} ({100 * st.fraction(k):.2f}%)" for k, v in sorted(st.counts.items())]
    return None, payload, {}, text


def cmd_octad_check(args, profile):
    from .octad import equation_text, octad_check

    if not args.points:
        raise UsageError("--points FILE is required")
    res = octad_check(read_points(args.points), profile)
    payload = {"is_octad": res.is_octad, "violated": [equation_text(k) for k in res.violated],
               "residuals": list(res.residuals)}
    text = ["a Cayley octad" if res.is_octad else "not a Cayley octad"]
    text += [f"  violated: {equation_text(k)}" for k in res.violated]
    return None, payload, {}, text


def cmd_net_classify(args, profile):
    from .classify import net_classify

    if not args.net:
        raise UsageError("--net FILE is required")
    mats = read_net(args.net)
    res = net_classify(*mats, profile=profile, seed=args.seed)
    from .detrep import from_matrices

    f = from_matrices(*mats, profile=None).f
    payload = {"class": res.net_class.value, "topology": res.topology.topology.value,
               "definite_point": list(res.definite_point) if res.definite_point else None,
               "low_confidence": res.low_confidence}
    return f, payload, {}, [f"case ({res.net_class.value}), curve {res.topology.topology.value}"]


QUARTIC_HANDLERS = {
    "bitangents": cmd_bitangents, "classify": cmd_classify, "detrep": cmd_detrep, "reps36": cmd_reps36,
    "octad": cmd_octad, "steiner": cmd_steiner, "gram63": cmd_gram63, "sos": cmd_sos,
    "vinnikov": cmd_vinnikov, "spectrahedron-opt": cmd_spectrahedron,
}
OTHER_HANDLERS = {"rank-stats": cmd_rank_stats, "octad-check": cmd_octad_check, "net-classify": cmd_net_classify}


# -- driver -----------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="quartic", description=__doc__)
    parser.add_argument("command", choices=QUARTIC_COMMANDS + OTHER_COMMANDS)
    parser.add_argument("--in", dest="input", metavar="FILE")
    parser.add_argument("--coeffs", help="15 rationals c400 c310 ... c004")
    parser.add_argument("--precision", type=int, default=256, metavar="BITS")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--format", choices=("json", "text"), default="text")
    parser.add_argument("--out", metavar="FILE")
    parser.add_argument("--points", metavar="FILE", help="octad-check: eight points, one per line")
    parser.add_argument("--net", metavar="FILE", help="net-classify: lines A:, B:, C: of 16 rationals")
    parser.add_argument("--objective", help="spectrahedron-opt: six rationals")
    parser.add_argument("--complex", help="sos: Steiner complex name, e.g. 1358|2467")
    parser.add_argument("--samples", type=int, default=500, help="rank-stats: number of samples")
    parser.add_argument("--report", metavar="FILE", help="verify: a JSON report")
    return parser


def _write(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".quartic-")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def run(argv: list[str]) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.precision < 53:
            raise UsageError("--precision must be at least 53 bits")
        profile = ToleranceProfile(precision_bits=args.precision)
        if args.command == "verify":
            return _verify(args)
        if args.command in QUARTIC_HANDLERS:
            f = read_quartic(args)
            payload, certs, text = QUARTIC_HANDLERS[args.command](f, profile, args)
        else:
            f, payload, certs, text = OTHER_HANDLERS[args.command](args, profile)
        report = make_report(args.command, f, profile, args.seed, payload, certs)
        if args.format == "json":
            _write(json.dumps(report, indent=2) + "\n", args.out)
        else:
            _write("\n".join(text) + "\n", args.out)
        return 0
    except UsageError as exc:
        print(f"quartic: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (OSError, ValueError) as exc:
        print(f"quartic: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (DegenerateError, QuarticError) as exc:
        print(f"quartic: {exc}", file=sys.stderr)
        return DEGENERATE


def _verify(args) -> int:
    if not args.report:
        raise UsageError("--report FILE is required")
    with open(args.report) as fh:
        report = json.load(fh)
    checks = verify_report(report)
    ok = all(c[1] for c in checks)
    lines = [f"{'ok  ' if passed else 'FAIL'} {name}: {value}" for name, passed, value in checks]
    lines.append(f"{len(checks)} certificates checked, {'all passed' if ok else 'FAILURES'}")
    _write("\n".join(lines) + "\n", args.out)
    return 0 if ok else DEGENERATE


def main(argv: list[str] | None = None) -> None:
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
