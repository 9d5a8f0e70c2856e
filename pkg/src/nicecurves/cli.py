"""nicecurves command line: verification campaigns with JSON or text reports.

Exit codes: 0 all PASS/TRUSTED-INPUT, 2 any FAIL, 3 PARTIAL only, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import campaigns
from .arith import squarefree_part
from .chabauty import DEFAULT_PRECISION
from .elliptic import DomainError, nice_curve, quadratic_twist, torsion_decomposition_check, twist_transport, two_torsion
from .nice import DEFAULT_SEED, DegenerateParameter, NotNice, sample_nice_L, torsion_classification
from .report import SCHEMA_VERSION, VerificationReport, exit_code, to_jsonable

EX_USAGE = 64
CSV_COLUMNS = ("t", "L", "W", "r", "s", "torsion_class_d", "j_num", "j_den")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EX_USAGE)


def rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def squarefree(text: str) -> int:
    try:
        d = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if d == 0 or squarefree_part(d) != d:
        raise argparse.ArgumentTypeError(f"{d} is not a nonzero squarefree integer")
    return d


def prime_choice(text: str):
    if text == "auto":
        return None
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a prime or 'auto', got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json", help="output format")
    common.add_argument("--timing", action="store_true", help="include wall-clock timings (breaks byte-identity)")
    ap = _Parser(prog="nicecurves", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, help: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, help=help, parents=[common])

    p = add("param", help="L, W, r, s, torsion label and j for t or u values")
    p.add_argument("--t", type=rational, nargs="*", default=[], help="t values for param_L")
    p.add_argument("--u", type=rational, nargs="*", default=[], help="u values for special_L")
    p.add_argument("--samples", type=int, default=0, help="add this many sampled t values")
    p.add_argument("--height", type=int, default=50)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--csv", metavar="PATH", help="also write the rows as CSV ('-' for stdout)")

    p = add("torsion", help="torsion of E_L over Q(sqrt d)")
    p.add_argument("L", type=rational)
    p.add_argument("d", type=squarefree)

    p = add("verify-theorem", help="sampled campaigns for the nice-curve statements and the auxiliary curves")
    p.add_argument("--samples", type=int, default=None, help="cap on every sample count")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = add("search", help="bounded-height point search")
    p.add_argument("curve", choices=("H", "Hq"))
    p.add_argument("--bound", type=int, default=100)
    p.add_argument("--workers", type=int, default=1)

    p = add("chabauty", help="Coleman bounds for H_q")
    p.add_argument("--prime", type=prime_choice, default=None, help="a good prime >= 5, or 'auto' to sweep")
    p.add_argument("--precision", type=int, default=DEFAULT_PRECISION)

    p = add("twist", help="quadratic twist E_L^D and the 3-torsion decomposition")
    p.add_argument("L", type=rational)
    p.add_argument("D", type=squarefree)

    p = add("report", help="every campaign")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--bound", type=int, default=1000)
    p.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    return ap


def _param(args) -> list[VerificationReport]:
    ts = list(args.t)
    if args.samples:
        ts += [t for t, _ in sample_nice_L(args.samples, args.height, args.seed)]
    rows = campaigns.param_rows(ts, args.u)
    if args.csv:
        _write_csv(rows, args.csv)
    rep = VerificationReport("param", parameters={"t": ts, "u": list(args.u)}, witnesses={"rows": rows})
    for row in rows:
        rep.check(f"W^2 = L^2 - L + 1 at L = {row['L']}", row["W"] ** 2 == row["L"] ** 2 - row["L"] + 1, row)
    return [rep]


def _write_csv(rows: list[dict], path: str):
    fh = sys.stdout if path == "-" else open(path, "w", newline="")
    try:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for row in rows:
            w.writerow([str(row[c]) for c in CSV_COLUMNS])
    finally:
        if fh is not sys.stdout:
            fh.close()


def _torsion(args) -> list[VerificationReport]:
    code = torsion_classification(args.L, args.d)
    rep = VerificationReport("thm1.ii", parameters={"L": args.L, "d": args.d},
                             witnesses={"torsion": code, "distinguished_d": squarefree_part(1 - args.L)})
    for w in code.witnesses:
        rep.check("witness has order 4", (w * 4).is_infinity and not (w * 2).is_infinity, w)
    return [rep]


def _twist(args) -> list[VerificationReport]:
    E = nice_curve(args.L)
    Et = quadratic_twist(args.L, args.D)
    dec = torsion_decomposition_check(args.L, args.D)
    rep = VerificationReport("twist", parameters={"L": args.L, "D": args.D},
                             witnesses={"E": E, "twist": Et, "three_torsion_counts": dec})
    rep.check("|E(K)[3]| = |E(Q)[3]| |E^D(Q)[3]|", dec["ok"], dec)
    for P in two_torsion(E):
        Pt = twist_transport(P, args.D)
        rep.check(f"transport of {P.to_json()} lies on the twist", Et.contains(Pt.x, Pt.y), Pt)
    return [rep]


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.command == "param":
            reports = _param(args)
        elif args.command == "torsion":
            reports = _torsion(args)
        elif args.command == "verify-theorem":
            reports = campaigns.theorem_reports(args.samples, args.seed)
        elif args.command == "search":
            if args.bound < 1:
                raise UsageError("--bound must be >= 1")
            reports = [campaigns.search_report(args.curve, args.bound, args.workers)]
        elif args.command == "chabauty":
            if args.prime is not None and args.prime < 5:
                raise UsageError("--prime must be >= 5")
            reports = campaigns.chabauty_reports(args.prime, args.precision)
        elif args.command == "twist":
            reports = _twist(args)
        else:
            reports = campaigns.all_reports(args.samples, args.seed, args.bound, args.precision)
    except (UsageError, DegenerateParameter, NotNice, DomainError) as exc:
        print(f"nicecurves: error: {exc}", file=sys.stderr)
        return EX_USAGE
    _emit(reports, args.format, args.timing, out)
    return exit_code(reports)


def _emit(reports, fmt: str, timing: bool, out):
    if fmt == "json":
        doc = {"version": SCHEMA_VERSION, "reports": [r.to_dict(include_timing=timing) for r in reports]}
        out.write(json.dumps(to_jsonable(doc), sort_keys=True, indent=2) + "\n")
        return
    for r in reports:
        line = f"{r.status:<14} {r.claim}"
        verdict = r.witnesses.get("verdict")
        if verdict:
            line += f"  [{verdict}]"
        out.write(line + "\n")
        for c in r.checks:
            if not c.ok:
                out.write(f"    FAILED {c.name}: {json.dumps(to_jsonable(c.operands), sort_keys=True)}\n")
        bounds = r.witnesses.get("bounds")
        if bounds:
            out.write(f"    p = {r.witnesses.get('prime')}: certified bound {bounds['certified_bound']} "
                      f"(refined {bounds['refined_bound']}, Coleman {bounds['coleman_bound']})\n")
            for d in bounds["disks"]:
                res = d["residue"] if d["residue"] == "inf" else tuple(d["residue"])
                out.write(f"    disk {str(res):<10} known {len(d['known_points'])}  bound {d['bound']}  {d['method']}\n")
        for n in r.notes:
            out.write(f"    note: {n}\n")


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
