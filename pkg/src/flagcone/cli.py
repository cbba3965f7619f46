"""Batch command-line interface.

Subcommands: build, analyze, flag, lvector, moebius, check, validate, limit,
certify-rank8, fuzz.  Exit codes: 0 pass, 1 property violated (witness
printed), 2 usage or input error.  Reports embed the tool version, the seed,
and sha256 digests of file inputs.
"""

import argparse
import hashlib
import json
import re
import sys
from fractions import Fraction

from . import __version__
from .cone import (limit_l_vector, rank8_certificate, validate_functional)
from .errors import FlagconeError, ParseError
from .eulerian import (EULERIAN_METHODS, ds_residuals, is_half_eulerian_parity,
                       is_k_eulerian, moebius_k, moebius_k_hall)
from .exprs import parse_expr
from .flags import (KParam, LinearFunctional, ce_index, f_from_l,
                    flag_f_vector, is_c_ee_polynomial, l_vector)
from .posets import load_poset, save_poset, to_json_dict
from .subsets import subset_label


def _digest(path):
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _report(command, payload, seed=None, inputs=()):
    doc = {"tool": "flagcone", "version": __version__, "command": command}
    if seed is not None:
        doc["seed"] = seed
    if inputs:
        doc["inputs"] = {p: _digest(p) for p in inputs}
    doc.update(payload)
    return doc


def _emit(doc, fmt, text_lines=None):
    if fmt == "json":
        print(json.dumps(doc, indent=2, default=str))
    elif fmt == "csv" and "csv" in doc:
        for row in doc["csv"]:
            print(",".join(str(c) for c in row))
    else:
        for line in (text_lines if text_lines is not None else
                     [json.dumps(doc, default=str)]):
            print(line)


def parse_functional_text(text, rank):
    """Inline f-basis functional, e.g. "f13 - f1" (single-digit ranks) or
    "2 f135 - 3/2 f3"."""
    tokens = re.findall(r"([+-])|(\d+/\d+|\d+)|f_?(\d*)|(\S)", text)
    coeffs = []
    sign = 1
    pending = None
    open_term = False
    for op, num, fsub, bad in tokens:
        if bad:
            raise ParseError(f"unexpected {bad!r} in functional {text!r}")
        if op:
            if open_term:
                raise ParseError(f"dangling coefficient in {text!r}")
            sign = 1 if op == "+" else -1
            open_term = True
        elif num:
            if pending is not None:
                raise ParseError(f"two coefficients in a row in {text!r}")
            pending = Fraction(num)
            open_term = True
        else:
            subset = tuple(int(ch) for ch in fsub)
            value = sign * (pending if pending is not None else 1)
            coeffs.append((subset, Fraction(value)))
            sign, pending, open_term = 1, None, False
    if open_term:
        raise ParseError(f"dangling term in {text!r}")
    if not coeffs:
        raise ParseError(f"no terms in functional {text!r}")
    return LinearFunctional.make(rank, "f", coeffs)


def load_functional(source, rank=None):
    """A functional from a JSON file path or inline f-expression text."""
    try:
        with open(source) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError):
        if rank is None:
            raise ParseError("inline functionals need --n")
        return parse_functional_text(source, rank + 1), ()
    k = KParam.parse(doc["k"]) if doc.get("k") else None
    coeffs = [(tuple(c["subset"]), Fraction(c["value"]))
              for c in doc["coefficients"]]
    return (LinearFunctional.make(doc["rank"], doc.get("basis", "f"),
                                  coeffs, k), (source,))


def _value_rows(entries):
    return [(subset_label(m), str(v)) for m, v in sorted(entries.items())]


def cmd_build(args):
    expr = parse_expr(args.expr)
    P = expr.build(N=args.N, order=args.order)
    lines = [f"rank {P.rank}, {P.m} elements, {P.num_covers()} covers"]
    if args.out:
        save_poset(P, args.out)
        lines.append(f"wrote {args.out}")
    doc = _report("build", {"expr": str(expr), "rank": P.rank,
                            "elements": P.m, "covers": P.num_covers()})
    if not args.out and args.format == "json":
        doc["poset"] = to_json_dict(P)
    _emit(doc, args.format, lines)
    return 0


def cmd_analyze(args):
    P = load_poset(args.poset)
    k = KParam.parse(args.k)
    F = flag_f_vector(P)
    L = l_vector(F, k)
    mu = moebius_k(P, k).whole()
    verdicts = {m: is_k_eulerian(P, k, m) for m in EULERIAN_METHODS}
    agree = len({v[0] for v in verdicts.values()}) == 1
    eulerian = verdicts["definition"][0]
    half = is_half_eulerian_parity(P)
    ce = ce_index(F, k)
    payload = {
        "rank": P.rank, "elements": P.m, "k": str(k),
        "flag_vector": dict(_value_rows(F.entries)),
        "l_vector": dict(_value_rows(L.entries)),
        "moebius_k_bottom_top": str(mu),
        "moebius_k_hall": str(moebius_k_hall(P, k)),
        "thickness": P.thickness(),
        "k_eulerian": eulerian,
        "methods_agree": agree,
        "half_eulerian": half[0],
        "ce_words": {w: str(v) for w, v in sorted(ce.items()) if v},
        "c_ee_polynomial": is_c_ee_polynomial(F, k),
    }
    lines = [f"rank {P.rank}, {P.m} elements",
             f"thickness: {P.thickness()}",
             f"mu_{k}(P) = {mu}",
             f"{k}-Eulerian: {'yes' if eulerian else 'no'} "
             f"({sum(v[0] for v in verdicts.values())}/3 methods)",
             f"half-Eulerian: {'yes' if half[0] else 'no'}"]
    if not eulerian:
        witness = verdicts["definition"][1]
        payload["witness"] = witness
        lines.append(f"witness interval: {witness}")
    _emit(_report("analyze", payload, inputs=(args.poset,)), args.format,
          lines)
    return 0 if agree else 1


def cmd_flag(args):
    P = load_poset(args.poset)
    F = flag_f_vector(P)
    rows = _value_rows(F.entries)
    doc = _report("flag", {"rank": P.rank, "entries": dict(rows),
                           "csv": [("subset", "value")] + rows},
                  inputs=(args.poset,))
    _emit(doc, args.format, [f"{s or 'empty'},{v}" for s, v in rows])
    return 0


def cmd_lvector(args):
    P = load_poset(args.poset)
    k = KParam.parse(args.k)
    L = l_vector(flag_f_vector(P), k)
    rows = _value_rows(L.entries)
    doc = _report("lvector", {"rank": P.rank, "k": str(k),
                              "entries": dict(rows),
                              "csv": [("subset", "value")] + rows},
                  inputs=(args.poset,))
    _emit(doc, args.format, [f"{s or 'empty'},{v}" for s, v in rows])
    return 0


def cmd_moebius(args):
    P = load_poset(args.poset)
    k = KParam.parse(args.k)
    table = moebius_k(P, k)
    pairs = [{"x": P.bottom, "y": y, "value": str(table.value(P.bottom, y))}
             for y in range(P.m) if P.leq(P.bottom, y)]
    doc = _report("moebius", {"k": str(k), "bottom_row": pairs,
                              "whole": str(table.whole())},
                  inputs=(args.poset,))
    _emit(doc, args.format,
          [f"mu({P.bottom},{p['y']}) = {p['value']}" for p in pairs])
    return 0


def cmd_check(args):
    P = load_poset(args.poset)
    if args.what == "thick":
        r = args.r or 2
        ok = P.is_r_thick(r)
        payload = {"r": r, "r_thick": ok, "thickness": P.thickness()}
        lines = [f"{r}-thick: {'yes' if ok else 'no'} "
                 f"(thickness {P.thickness()})"]
        witness = None
    elif args.what == "half":
        ok, witness = is_half_eulerian_parity(P)
        payload = {"half_eulerian": ok, "witness": witness}
        lines = [f"half-Eulerian: {'yes' if ok else 'no'}"]
    elif args.what == "eulerian":
        k = KParam.parse(args.k or "1")
        results = {m: is_k_eulerian(P, k, m) for m in EULERIAN_METHODS}
        ok = results["definition"][0]
        agree = len({v[0] for v in results.values()}) == 1
        witness = results["definition"][1]
        payload = {"k": str(k), "k_eulerian": ok, "methods_agree": agree,
                   "witness": witness}
        lines = [f"{k}-Eulerian: {'yes' if ok else 'no'} "
                 f"({sum(v[0] for v in results.values())}/3 methods)"]
        ok = ok and agree
    else:  # ds
        k = KParam.parse(args.k or "1/2")
        report = ds_residuals(flag_f_vector(P), k)
        ok = report.all_zero_f and report.all_zero_l
        witness = next(((subset_label(m), gap, str(v))
                        for m, gap, v in report.residuals if v), None)
        payload = report.to_json_dict()
        lines = [f"DS_{k} equations: {'all hold' if ok else 'violated'}",
                 f"f-form and L-form agree: {report.agree}"]
        if witness:
            lines.append(f"witness: S={witness[0] or 'empty'} "
                         f"gap={witness[1]} residual={witness[2]}")
    if witness is not None and not ok:
        lines.append(f"witness: {witness}")
    _emit(_report(f"check {args.what}", payload, inputs=(args.poset,)),
          args.format, lines)
    return 0 if ok else 1


def cmd_validate(args):
    functional, inputs = load_functional(args.functional, args.n)
    mode = "r_thick" if args.mode == "thick" else "graded"
    verdict = validate_functional(functional, mode=mode, r=args.r,
                                  include_empty_system=args.include_empty_system)
    payload = {
        "rank": functional.rank,
        "mode": args.mode,
        "valid": verdict.valid,
        "systems_checked": verdict.systems_checked,
    }
    lines = [f"valid: {'yes' if verdict.valid else 'no'} "
             f"({verdict.systems_checked} interval systems)"]
    if not verdict.valid:
        payload["violating_system"] = str(verdict.system)
        payload["blocking_sum"] = str(verdict.value)
        lines.append(f"violating system {verdict.system} "
                     f"(blocking sum {verdict.value})")
    _emit(_report("validate", payload, inputs=inputs), args.format, lines)
    return 0 if verdict.valid else 1


def cmd_limit(args):
    expr = parse_expr(args.expr)
    k = KParam.parse(args.k)
    vec = limit_l_vector(expr, k, args.m, order=args.order)
    rows = [(subset_label(m), str(v)) for m, v in sorted(vec.items()) if v]
    doc = _report("limit", {"expr": str(expr), "k": str(k), "m": args.m,
                            "entries": dict(rows),
                            "csv": [("subset", "value")] + rows})
    _emit(doc, args.format, [f"{s or 'empty'},{v}" for s, v in rows])
    return 0


def cmd_certify(args):
    lines = []

    def progress(name, ok, detail):
        lines.append(f"{'PASS' if ok else 'FAIL'} {name}")

    report = rank8_certificate(corpus_size=args.corpus_size, seed=args.seed,
                               order=args.order, progress=progress)
    doc = _report("certify-rank8", report, seed=args.seed)
    matched = report["checks"]["limit_vectors_match_fixture_rows"]["detail"]
    hits = sum(1 for v in matched.values() if v is not None)
    rank = report["checks"]["fixture_matrix_rank"]["detail"]["rank"]
    corpus = report["checks"]["f_form_nonnegative_on_corpus"]["detail"]
    lines.append(f"{hits}/{len(matched)} constructed limit vectors matched "
                 f"to fixture rows; matrix rank {rank}")
    lines.append(f"f-form nonnegative on {corpus['corpus_size']} "
                 f"half-Eulerian rank-8 posets")
    lines.append(f"certificate: {'PASS' if report['ok'] else 'FAIL'}")
    _emit(doc, args.format, lines)
    return 0 if report["ok"] else 1


def _fuzz_one(job):
    seed, index = job
    import random

    from .constructions import thicken
    from .corpus import random_graded_poset
    rng = random.Random(seed * 1_000_003 + index)
    P = random_graded_poset(rng, rng.randint(2, 5), max_layer=3)
    failures = []
    F = flag_f_vector(P)
    for two_k in (1, 2, 3, 4):
        k = KParam(two_k)
        if moebius_k(P, k).whole() != moebius_k_hall(P, k):
            failures.append((index, f"hall disagreement at k={k}"))
        if f_from_l(l_vector(F, k)) != F:
            failures.append((index, f"L round trip failed at k={k}"))
    for r in (2, 3):
        T = flag_f_vector(thicken(P, r))
        if any(T.entries[m] != r ** m.bit_count() * v
               for m, v in F.entries.items()):
            failures.append((index, f"thickening law failed at r={r}"))
    k = KParam(1)
    verdicts = {m: is_k_eulerian(P, k, m)[0] for m in EULERIAN_METHODS}
    if len(set(verdicts.values())) != 1:
        failures.append((index, f"method disagreement: {verdicts}"))
    return failures


def cmd_fuzz(args):
    jobs = [(args.seed, i) for i in range(args.count)]
    if args.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_fuzz_one, jobs))
    else:
        results = [_fuzz_one(j) for j in jobs]
    failures = [f for r in results for f in r]
    payload = {"count": args.count, "failures": failures}
    lines = [f"fuzz: {args.count} posets, {len(failures)} failures"]
    lines += [f"  poset #{i}: {msg}" for i, msg in failures]
    _emit(_report("fuzz", payload, seed=args.seed), args.format, lines)
    return 0 if not failures else 1


def make_parser():
    parser = argparse.ArgumentParser(
        prog="flagcone",
        description="Exact flag-vector, Moebius and cone computations for "
                    "graded posets")
    parser.add_argument("--format", choices=("text", "json", "csv"),
                        default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a poset from a construction "
                                     "expression")
    p.add_argument("expr")
    p.add_argument("-o", "--out")
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--order", choices=("inner_first", "outer_first"),
                   default="inner_first")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("analyze", help="full report for a poset file")
    p.add_argument("poset")
    p.add_argument("--k", default="1")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("flag", help="flag f-vector")
    p.add_argument("poset")
    p.set_defaults(func=cmd_flag)

    p = sub.add_parser("lvector", help="flag L^k-vector")
    p.add_argument("poset")
    p.add_argument("--k", default="1")
    p.set_defaults(func=cmd_lvector)

    p = sub.add_parser("moebius", help="k-Moebius values over [bottom, y]")
    p.add_argument("poset")
    p.add_argument("--k", default="1")
    p.set_defaults(func=cmd_moebius)

    p = sub.add_parser("check", help="decide a property, exit 1 with witness "
                                     "if violated")
    p.add_argument("what", choices=("eulerian", "half", "thick", "ds"))
    p.add_argument("poset")
    p.add_argument("--k", default=None)
    p.add_argument("--r", type=int, default=None)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("validate", help="blocking-criterion validity of a "
                                        "flag functional")
    p.add_argument("functional",
                   help="JSON file or inline text like 'f13 - f1'")
    p.add_argument("--n", type=int, default=None,
                   help="subset universe size for inline functionals "
                        "(rank - 1)")
    p.add_argument("--mode", choices=("graded", "thick"), default="graded")
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--include-empty-system", dest="include_empty_system",
                   action="store_true", default=True)
    p.add_argument("--exclude-empty-system", dest="include_empty_system",
                   action="store_false")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("limit", help="exact normalized limit L-vector of a "
                                     "one-parameter family")
    p.add_argument("expr")
    p.add_argument("--k", default="1/2")
    p.add_argument("--m", type=int, required=True,
                   help="normalization exponent")
    p.add_argument("--order", choices=("inner_first", "outer_first"),
                   default="inner_first")
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("certify-rank8", help="full rank-8 facet certificate")
    p.add_argument("--corpus-size", type=int, default=500)
    p.add_argument("--seed", type=int, default=20260810)
    p.add_argument("--order", choices=("inner_first", "outer_first"),
                   default="inner_first")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("fuzz", help="randomized agreement suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_fuzz)
    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FlagconeError, FileNotFoundError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
