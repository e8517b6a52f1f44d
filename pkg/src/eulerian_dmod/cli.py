"""Command-line front end.

Exit codes: 0 success verdict, 1 witness or mismatch verdict, 2 input error.
Reports are dicts with a fixed key order, printed as text or JSON.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import _kernels
from .cech import decompose_as_E, hilbert_box, iterated_local_cohomology, socle, socle_excluded
from .frob import check_fmodule_eulerian, consistency_battery, localization_family
from .inj import MonomialPrime, a_invariant, ann_min_degree, eulerian_shift
from .parse import format_laurent, format_spec, parse_laurent, parse_module, parse_operator, parse_spec
from .region import default_r_max, format_module, is_eulerian_witness, make_module
from .scalars import CharSpec, FieldScalar, InputError
from .weyl import dop_apply, dop_degree, euler_op, format_dop, is_member, reduce_by

EXIT_OK, EXIT_WITNESS, EXIT_INPUT = 0, 1, 2


def num(v, char: CharSpec):
    """Exact JSON number: residues and integers as ints, other rationals as "p/q"."""
    if isinstance(v, FieldScalar):
        v = v.value
    if char.p:
        return int(v)
    v = Fraction(v)
    return int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def parse_box(text: str, n: int) -> list:
    """``lo..hi`` for every axis, or a comma list of n such ranges."""
    parts = [p.strip() for p in text.split(",")]
    out = []
    for p in parts:
        lo, sep, hi = p.partition("..")
        try:
            if not sep:
                raise ValueError
            out.append((int(lo), int(hi)))
        except ValueError:
            raise InputError(f"bad box range {p!r}; expected lo..hi") from None
    if len(out) == 1:
        out = out * n
    if len(out) != n:
        raise InputError(f"box has {len(out)} ranges, expected 1 or {n}")
    if any(lo > hi for lo, hi in out):
        raise InputError(f"empty box range in {text!r}")
    return out


def parse_prime(text: str, n: int) -> MonomialPrime:
    vs = []
    for tok in text.split(","):
        tok = tok.strip()
        if not (tok.startswith("x") and tok[1:].isdigit()):
            raise InputError(f"bad prime variable {tok!r}; expected x1,x2,...")
        vs.append(int(tok[1:]))
    return MonomialPrime(n, tuple(vs))


def _dop_json(A, ch):
    return {
        "text": format_dop(A),
        "terms": [{"alpha": list(a), "beta": list(b), "coeff": num(c, ch)} for (a, b), c in sorted(A.items())],
    }


# commands ------------------------------------------------------------------------------


def cmd_euler(args, ch, n):
    if args.r < 0:
        raise InputError("--r must be >= 0")
    E = euler_op(n, args.r, ch)
    return {"operator": _dop_json(E, ch), "degree": str(dop_degree(E))}, EXIT_OK


def cmd_mul(args, ch, n):
    A, B = parse_operator(args.a, n, ch), parse_operator(args.b, n, ch)
    return {"a": format_dop(A), "b": format_dop(B), "product": _dop_json(A * B, ch)}, EXIT_OK


def cmd_apply(args, ch, n):
    A = parse_operator(args.op, n, ch)
    f = parse_laurent(args.f, n, ch)
    g = dop_apply(A, f)
    return {"op": format_dop(A), "f": format_laurent(f, ch), "result": format_laurent(g, ch)}, EXIT_OK


def cmd_reduce(args, ch, n):
    gens = [parse_operator(g, n, ch) for g in args.gens.split(";") if g.strip()]
    T = parse_operator(args.target, n, ch)
    rem = reduce_by(gens, T)
    return {
        "gens": [format_dop(g) for g in gens],
        "target": format_dop(T),
        "remainder": format_dop(rem),
        "verdict": is_member(gens, T),
    }, EXIT_OK


def _module(args, ch, n):
    M = parse_module(args.module, n, ch)
    if getattr(args, "shift", None) is not None:
        M = M.with_shift(args.shift)
    return M


def cmd_check_eulerian(args, ch, n, box, rmax):
    M = _module(args, ch, n)
    v = is_eulerian_witness(M, box, rmax)
    rep = {
        "module": format_module(M),
        "box": [list(b) for b in v.box],
        "r_max": v.r_max,
        "checked": v.checked,
        "verdict": "Eulerian" if v.eulerian else "Witness",
        "witness": None,
    }
    if v.witness:
        w = v.witness
        rep["witness"] = {"alpha": list(w.alpha), "r": w.r, "lhs": num(w.lhs, ch), "rhs": num(w.rhs, ch)}
    return rep, EXIT_OK if v.eulerian else EXIT_WITNESS


def _lc(args, ch, n, box):
    spec = parse_spec(args.spec, n)
    amb = parse_module(args.module, n, ch) if args.module else make_module("R", n, ch)
    return iterated_local_cohomology(spec, box, amb)


def _cech_report(L, ch, with_socle=True, with_decomp=True):
    rep = {
        "spec": format_spec(L.spec),
        "box": [list(b) for b in L.box],
        "pieces": [{"mu": list(mu), "dim": d} for mu, d in L.pieces()],
    }
    if with_socle:
        rep["socle"] = [{"mu": list(p.mu), "dim": p.dim, "total_degree": p.total_degree} for p in socle(L)]
    if with_decomp:
        d = decompose_as_E(L)
        rep["decomposition"] = {"verdict": d.verdict, "copies": d.copies}
        if d.mu is not None:
            rep["decomposition"]["mu"] = list(d.mu)
    return rep


def cmd_localcoh(args, ch, n, box):
    L = _lc(args, ch, n, box)
    rep = _cech_report(L, ch)
    rep["char"] = ch.p
    return rep, EXIT_OK


def cmd_socle(args, ch, n, box):
    L = _lc(args, ch, n, box)
    rep = _cech_report(L, ch)
    rep["undecided"] = [list(mu) for mu in socle_excluded(L)]
    degs = sorted({p.total_degree for p in socle(L)})
    rep["socle_total_degrees"] = degs
    return rep, EXIT_OK


def cmd_decompose(args, ch, n, box):
    L = _lc(args, ch, n, box)
    rep = _cech_report(L, ch)
    return rep, EXIT_WITNESS if rep["decomposition"]["verdict"] == "Mismatch" else EXIT_OK


def cmd_hilbert(args, ch, n, box):
    L = _lc(args, ch, n, box)
    rep = _cech_report(L, ch, with_socle=False, with_decomp=False)
    H = hilbert_box(L)
    rep["totals"] = [{"total_degree": t, "dim": d} for t, d in H.totals.items()]
    return rep, EXIT_OK


def cmd_frob_check(args, ch, n, box, rmax):
    if not ch.p:
        raise InputError("frob-check needs --char p with p prime")
    mods = [parse_module(args.module, n, ch)] if args.module else localization_family(n, ch)
    es = range(1, args.emax + 1)
    rows, bad = [], False
    for M in mods:
        for e in es:
            b = consistency_battery(M, e, box)
            rows.append({"module": format_module(M), "e": e, "triples": b.triples,
                         "mismatches": b.mismatches,
                         "first": None if b.first is None else [list(x) for x in b.first]})
            bad |= not b.ok
        v = check_fmodule_eulerian(M, box, rmax)
        rows.append({"module": format_module(M), "eulerian": v.eulerian,
                     "witness": None if v.witness is None else
                     {"alpha": list(v.witness[0]), "r": v.witness[1],
                      "lhs": num(v.witness[2], ch), "rhs": num(v.witness[3], ch)}})
        bad |= not v.eulerian
    return {"char": ch.p, "box": [list(b) for b in box], "results": rows,
            "verdict": "Mismatch" if bad else "Consistent"}, EXIT_WITNESS if bad else EXIT_OK


def cmd_a_inv(args, ch, n):
    P = parse_prime(args.prime, n)
    return {"prime": str(P), "n": n, "a_invariant": a_invariant(P, ch)}, EXIT_OK


def cmd_ann_min_degree(args, ch, n):
    P = parse_prime(args.prime, n)
    return {"prime": str(P), "n": n, "ann_min_degree": ann_min_degree(P, ch)}, EXIT_OK


def cmd_eulerian_shift(args, ch, n, box, rmax):
    M = parse_module(args.module, n, ch)
    lo, hi = parse_box(args.range, 1)[0] if args.range else (-3, n + 3)
    v = eulerian_shift(M, range(lo, hi + 1), box, rmax)
    return {"module": format_module(M.with_shift(0)), "range": [lo, hi], "verdict": str(v),
            "passing": list(v.passing)}, EXIT_OK if v.kind == "Unique" else EXIT_WITNESS


# argument handling ---------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--n", type=int, default=2, help="number of variables (default 2)")
    p.add_argument("--char", type=int, default=0, help="0 or a prime (default 0)")
    p.add_argument("--box", default=None, help="lo..hi, uniform or comma list per axis (default -6..2)")
    p.add_argument("--rmax", type=int, default=None, help="largest r for Euler checks")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, default=0, help="echoed in the report; all commands are deterministic")
    p.add_argument("--threads", type=int, default=None, help="kernel threads (or EULERIAN_DMOD_THREADS)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="eulerian-dmod", description="Divided-power operators, Eulerian checks and local cohomology.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    add("euler", "print the Euler operator E_r").add_argument("--r", type=int, required=True)
    s = add("mul", "normal form of a product")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s = add("apply", "apply an operator to a Laurent polynomial")
    s.add_argument("--op", required=True)
    s.add_argument("--f", required=True)
    s = add("reduce", "reduce a target by left multiples of generators")
    s.add_argument("--gens", required=True, help="operators separated by ';'")
    s.add_argument("--target", required=True)
    s = add("check-eulerian", "Eulerian check of a region module on a box")
    s.add_argument("--module", required=True)
    s.add_argument("--shift", type=int, default=None)
    for name, h in (("localcoh", "iterated local cohomology on a box"),
                    ("socle", "socle of a computed module"),
                    ("decompose", "compare with copies of *E"),
                    ("hilbert", "Hilbert table on a box")):
        s = add(name, h)
        s.add_argument("--spec", required=True)
        s.add_argument("--module", default=None, help="ambient localization (default R)")
    s = add("frob-check", "Frobenius consistency battery")
    s.add_argument("--module", default=None, help="default: R and every localization")
    s.add_argument("--emax", type=int, default=2)
    add("a-inv", "a-invariant of R/P").add_argument("--prime", required=True)
    add("ann-min-degree", "lowest P-torsion degree of H^h_P(R)").add_argument("--prime", required=True)
    s = add("eulerian-shift", "scan shifts for the Eulerian one")
    s.add_argument("--module", required=True)
    s.add_argument("--range", default=None, help="lo..hi (default -3..n+3)")
    return ap


def _fix_negative_values(argv: list) -> list:
    # argparse reads "--box -6..2" as two flags
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in ("--box", "--range", "--shift", "--r", "--f", "--op", "--a", "--b", "--target") \
                and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


_BOXED = {
    "check-eulerian": cmd_check_eulerian, "frob-check": cmd_frob_check, "eulerian-shift": cmd_eulerian_shift,
}
_CECH = {"localcoh": cmd_localcoh, "socle": cmd_socle, "decompose": cmd_decompose, "hilbert": cmd_hilbert}
_PLAIN = {
    "euler": cmd_euler, "mul": cmd_mul, "apply": cmd_apply, "reduce": cmd_reduce,
    "a-inv": cmd_a_inv, "ann-min-degree": cmd_ann_min_degree,
}


def run(argv: list) -> tuple:
    """Parse and dispatch; returns (report dict, exit code, output format)."""
    args = build_parser().parse_args(_fix_negative_values(list(argv)))
    if args.n < 1:
        raise InputError("--n must be >= 1")
    ch = CharSpec(args.char)
    threads = args.threads or int(os.environ.get("EULERIAN_DMOD_THREADS", "0") or 0)
    if threads:
        _kernels.set_threads(threads)
    n = args.n
    if args.command in ("check-eulerian", "frob-check", "eulerian-shift"):
        default = "-3..3" if args.command != "check-eulerian" else "-6..2"
    else:
        default = "-6..2"
    box = parse_box(args.box or default, n)
    if args.rmax is not None and args.rmax < 1:
        raise InputError("--rmax must be >= 1")
    rmax = args.rmax if args.rmax is not None else default_r_max(ch)
    head = {"command": args.command, "n": n, "char": ch.p, "seed": args.seed}
    if args.command in _PLAIN:
        body, code = _PLAIN[args.command](args, ch, n)
    elif args.command in _CECH:
        body, code = _CECH[args.command](args, ch, n, box)
    else:
        body, code = _BOXED[args.command](args, ch, n, box, rmax)
    body.pop("char", None)
    return {**head, **body}, code, args.format


def render_json(rep: dict) -> str:
    """One top-level key per line, values compact."""
    body = ",\n".join(f"  {json.dumps(k)}: {json.dumps(v)}" for k, v in rep.items())
    return "{\n" + body + "\n}"


def render_text(rep: dict) -> str:
    lines = []
    for k, v in rep.items():
        if isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{k}:")
            for row in v:
                lines.append("  " + "  ".join(f"{a}={_txt(b)}" for a, b in row.items()))
        elif isinstance(v, dict):
            lines.append(f"{k}: " + "  ".join(f"{a}={_txt(b)}" for a, b in v.items()))
        else:
            lines.append(f"{k}: {_txt(v)}")
    return "\n".join(lines)


def _txt(v) -> str:
    if isinstance(v, list):
        return "(" + ",".join(_txt(x) for x in v) + ")"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{a}={_txt(b)}" for a, b in v.items()) + "}"
    return "-" if v is None else str(v)


def main(argv: list | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        rep, code, fmt = run(argv)
    except InputError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    if fmt == "json":
        print(render_json(rep))
    else:
        print(render_text(rep))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
