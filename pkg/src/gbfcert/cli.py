"""Command-line front end.

Exit codes: 0 success, 1 internal error, 2 not applicable, 3 bad input, 4 over budget.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import secrets
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .gbf import (
    FAMILIES,
    CertificateError,
    FunctionFileError,
    NonexistenceCertificate,
    NotApplicable,
    cell_census,
    counting_contradiction,
    fourier,
    is_gbf,
    load_function,
    nonexistence_certificate,
)
from .modular import applicability, is_prime, primes_7_mod_8
from .quadforms import RouteDisagreement, class_group, tp_certificate
from .search import BudgetExceeded, SearchSpec, run

EXIT_OK, EXIT_INTERNAL, EXIT_NOT_APPLICABLE, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3, 4

SCAN_COLUMNS = ("p", "t_p", "h", "ord2", "residue_ok", "half_order_ok", "wieferich_ok",
                "max_e", "applicable")


def scan_row(p: int) -> dict:
    rep = applicability(p)
    cert = tp_certificate(p)
    return {
        "p": p,
        "t_p": cert.t_p,
        "h": class_group(p).h,
        "ord2": rep.ord2,
        "residue_ok": rep.residue_ok,
        "half_order_ok": rep.half_order_ok,
        "wieferich_ok": rep.wieferich_ok,
        "max_e": rep.max_e,
        "applicable": rep.applicable,
        "witness": [cert.witness_x, cert.witness_y],
    }


def scan_rows(limit: int, jobs: int = 1) -> list[dict]:
    primes = primes_7_mod_8(limit)
    if jobs > 1 and len(primes) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(scan_row, primes, chunksize=8))
    return [scan_row(p) for p in primes]


def _cell(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def render_table(rows: list[dict], columns) -> str:
    cells = [[_cell(r[c]) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(columns, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(x.rjust(w) for x, w in zip(row, widths)).rstrip() for row in cells]
    return "\n".join(lines) + "\n"


def render_csv(rows: list[dict], columns) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r[c]) for c in columns])
    return buf.getvalue()


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _fail(msg: str, code: int) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


# --- subcommands ---------------------------------------------------------------


def cmd_scan(args) -> int:
    try:
        rows = scan_rows(args.limit, args.jobs)
    except RouteDisagreement as exc:
        return _fail(str(exc), EXIT_INTERNAL)
    if args.json:
        sys.stdout.write(_dump({"limit": args.limit, "rows": rows}))
    elif args.csv:
        sys.stdout.write(render_csv(rows, SCAN_COLUMNS))
    else:
        sys.stdout.write(render_table(rows, SCAN_COLUMNS))
    if args.plot:
        from .plotting import plot_scan

        plot_scan(rows, args.plot)
        print(f"figure written to {args.plot}", file=sys.stderr)
    return EXIT_OK


def cmd_tp(args) -> int:
    p = args.p
    if p % 8 != 7 or not is_prime(p):
        return _refuse(p, [f"t_p is defined here only for primes p = 7 (mod 8); got {p}"], args)
    try:
        row = scan_row(p)
    except RouteDisagreement as exc:
        return _fail(str(exc), EXIT_INTERNAL)
    if args.json:
        sys.stdout.write(_dump(row))
    else:
        x, y = row["witness"]
        print(f"p = {p}")
        print(f"t_p = {row['t_p']}  (class order and Diophantine routes agree)")
        print(f"witness: {x}^2 + {p}*{y}^2 = 2^{row['t_p'] + 2}")
        print(f"class number h(-{p}) = {row['h']}")
        print(f"theorem hypotheses: {row['max_e']}")
    return EXIT_OK


def _refuse(p: int, failed, args) -> int:
    doc = NotApplicable(p, tuple(failed)).to_dict()
    if args.json:
        sys.stdout.write(_dump(doc))
    else:
        print(f"p = {p}: not applicable")
        for reason in failed:
            print(f"  - {reason}")
    return EXIT_NOT_APPLICABLE


def cmd_certify(args) -> int:
    if args.check:
        try:
            with open(args.check) as fh:
                cert = NonexistenceCertificate.from_json(fh.read())
        except (OSError, ValueError) as exc:
            return _fail(f"{args.check}: {exc}", EXIT_INPUT)
        print(f"certificate for p = {cert.p} is valid (t_p = {cert.t_p})")
        return EXIT_OK
    if args.p is None:
        return _fail("certify needs a prime p or --check FILE", EXIT_INPUT)
    try:
        cert = nonexistence_certificate(args.p)
    except RouteDisagreement as exc:
        return _fail(str(exc), EXIT_INTERNAL)
    if isinstance(cert, NotApplicable):
        return _refuse(args.p, cert.failed, args)
    text = cert.to_json() + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    if args.json or not args.out:
        sys.stdout.write(text)
    else:
        print(f"p = {cert.p}, t_p = {cert.t_p}, e range: {cert.e_range}; written to {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        f = load_function(args.path)
    except FunctionFileError as exc:
        return _fail(str(exc), EXIT_INPUT)
    spec = fourier(f)
    verdict = is_gbf(f, spec)
    if args.json:
        doc = {"family": f.type.family, "n": f.type.n, "modulus": f.type.modulus, "gbf": verdict}
        if args.spectrum:
            doc["spectrum"] = [list(F.coeffs) for F in spec.entries]
        sys.stdout.write(_dump(doc))
    else:
        print(f"type {f.type}")
        print(f"GBF: {'yes' if verdict else 'no'}")
        if args.spectrum:
            for i, F in enumerate(spec.entries):
                print(f"F[{i}] = {list(F.coeffs)}  |F|^2 ~ {abs(F.float_approx()) ** 2:.6g}")
    return EXIT_OK


def cmd_search(args) -> int:
    from .gbf import GbfType

    try:
        t = GbfType(args.family, args.n, args.q)
    except ValueError as exc:
        return _fail(str(exc), EXIT_INPUT)
    mode = "random" if args.random else "exhaustive"
    seed = args.seed
    if mode == "random" and seed is None:
        seed = secrets.randbits(63)
        print(f"seed: {seed}", file=sys.stderr)
    spec = SearchSpec(t, mode, args.normalize, args.samples, seed or 0, args.budget, args.cap)
    try:
        result = run(spec, args.shards, args.jobs)
    except BudgetExceeded as exc:
        if args.json:
            sys.stdout.write(_dump({"status": "budget exceeded", "required": exc.required,
                                    "budget": exc.budget}))
        return _fail(f"{exc} (raise --budget to run anyway)", EXIT_BUDGET)
    if args.json:
        sys.stdout.write(_dump(result.to_dict()))
        return EXIT_OK
    noun = "candidates" if mode == "exhaustive" else "samples"
    print(f"type {t}, {mode}{', normalized f(0)=0' if spec.normalize else ''}")
    print(f"{result.witness_count} witnesses / {result.candidates} {noun}")
    if result.float_mismatches:
        print(f"warning: {result.float_mismatches} exact/float disagreements", file=sys.stderr)
    for w in result.witnesses[: args.show]:
        print("  " + " ".join(map(str, w.values)))
    if len(result.witnesses) > args.show:
        print(f"  ... {len(result.witnesses) - args.show} more (use --json)")
    return EXIT_OK


def _counting_block(t: int, p: int, e: int) -> dict:
    out = counting_contradiction(t, p, e)
    return out.to_dict()


def _matching_counting(f) -> dict | None:
    """Counting outcome when the function's type has the form [t, 2p^e], t odd."""
    from .modular import factorize

    t, q = f.type.n, f.type.modulus
    if t % 2 == 0 or q % 2 or q < 6:
        return None
    fac = factorize(q // 2)
    if len(fac) != 1:
        return None
    (p, e), = fac.items()
    return _counting_block(t, p, e)


def cmd_diagnose(args) -> int:
    doc: dict = {}
    if args.counting:
        if None in (args.t, args.p, args.e):
            return _fail("--counting needs --t, --p and --e", EXIT_INPUT)
        try:
            doc["counting"] = _counting_block(args.t, args.p, args.e)
        except ValueError as exc:
            return _fail(str(exc), EXIT_INPUT)
    census = None
    if args.path:
        try:
            f = load_function(args.path)
        except FunctionFileError as exc:
            return _fail(str(exc), EXIT_INPUT)
        if f.type.base % 2:
            msg = f"Z_{f.type.base}^{f.type.n} has no order-2 elements; nothing to diagnose"
            if args.json:
                sys.stdout.write(_dump({"status": "no order-2 elements", "message": msg}))
            else:
                print(msg)
            return EXIT_INPUT
        census = cell_census(f)
        doc["census"] = census.to_dict()
        doc["gbf"] = is_gbf(f)
        match = _matching_counting(f)
        if match and "counting" not in doc:
            doc["counting"] = match
    if not doc:
        return _fail("nothing to do: give a function file and/or --counting", EXIT_INPUT)
    if args.json:
        sys.stdout.write(_dump(doc))
    else:
        _print_diagnosis(doc)
    if args.plot and census is not None:
        from .plotting import plot_census

        plot_census(census, args.plot)
        print(f"figure written to {args.plot}", file=sys.stderr)
    return EXIT_OK


def _print_diagnosis(doc: dict) -> None:
    if "census" in doc:
        c = doc["census"]
        ty = c["type"]
        print(f"type [{ty['n']}, {ty['modulus']}] ({ty['family']}), GBF: {'yes' if doc['gbf'] else 'no'}")
        rows = [{"shift": "(" + ",".join(map(str, s["shift"])) + ")", "n_v": s["n_v"],
                 "m_v": s["m_v"], "o_v": s["o_v"]} for s in c["shifts"]]
        sys.stdout.write(render_table(rows, ("shift", "n_v", "m_v", "o_v")))
        print(f"unclassified points: {c['unclassified']}")
        if c["cells"]:
            print("cells by N-set (shift numbers):")
            cells = [{"n_set": "{" + ",".join(map(str, x["n_set"])) + "}", "size": x["size"],
                      "kind": x["kind"]} for x in c["cells"]]
            sys.stdout.write(render_table(cells, ("n_set", "size", "kind")))
        if c["triples"]:
            print("triples u+v+w=0:")
            sys.stdout.write(render_table(c["triples"], ("u", "v", "w", "one_M", "all_M")))
        print(f"n_G = {c['n_G']}")
    if "counting" in doc:
        k = doc["counting"]
        verdict = "contradiction" if k["contradiction"] else "no contradiction"
        print(f"counting [t={k['t']}, q=2*{k['p']}^{k['e']}]: n_G = {k['n_G']}, "
              f"2^t | n_G: {'yes' if k['divisible_by_2t'] else 'no'} -> {verdict}")


# --- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                        help="worker processes (default: available CPUs)")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized commands")
    common.add_argument("--budget", type=int, default=10**8, help="max search candidates")

    ap = argparse.ArgumentParser(prog="gbfcert", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"gbfcert {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("scan", parents=[common], help="t_p and hypotheses for p = 7 mod 8")
    s.add_argument("--limit", type=int, default=200)
    s.add_argument("--csv", action="store_true", help="comma-delimited output")
    s.add_argument("--plot", metavar="PNG", help="also write a t_p figure")
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("tp", parents=[common], help="compute t_p by both routes")
    s.add_argument("p", type=int)
    s.set_defaults(func=cmd_tp)

    s = sub.add_parser("certify", parents=[common], help="emit a nonexistence certificate")
    s.add_argument("p", type=int, nargs="?")
    s.add_argument("--out", metavar="FILE", help="write the certificate JSON here")
    s.add_argument("--check", metavar="FILE", help="re-validate a stored certificate")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("verify", parents=[common], help="exact bent test of a function file")
    s.add_argument("path")
    s.add_argument("--spectrum", action="store_true", help="dump exact spectrum")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", parents=[common], help="exhaustive or random search")
    s.add_argument("--family", choices=FAMILIES, default="qq")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--q", "--modulus", dest="q", type=int, required=True)
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true", default=True)
    mode.add_argument("--random", action="store_true")
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--normalize", action="store_true", help="fix f(0) = 0")
    s.add_argument("--shards", type=int, default=1)
    s.add_argument("--cap", type=int, default=1000, help="max witnesses kept")
    s.add_argument("--show", type=int, default=10, help="witnesses printed in text mode")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("diagnose", parents=[common], help="order-2 shift partitions and counting")
    s.add_argument("path", nargs="?")
    s.add_argument("--counting", action="store_true")
    s.add_argument("--t", type=int)
    s.add_argument("--p", type=int)
    s.add_argument("--e", type=int)
    s.add_argument("--plot", metavar="PNG", help="also write a partition figure")
    s.set_defaults(func=cmd_diagnose)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        return _fail("--jobs must be >= 1", EXIT_INPUT)
    if getattr(args, "shards", 1) < 1:
        return _fail("--shards must be >= 1", EXIT_INPUT)
    try:
        return args.func(args)
    except BrokenPipeError:  # pragma: no cover
        return EXIT_OK
    except (CertificateError, AssertionError, ArithmeticError) as exc:
        return _fail(f"internal: {exc}", EXIT_INTERNAL)


if __name__ == "__main__":
    sys.exit(main())
