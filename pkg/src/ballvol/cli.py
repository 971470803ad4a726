"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 a ``verify`` run found a certified
failure inside a claimed range (documented discrepancy audits excluded),
3 some margin stayed undecided at the precision cap.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from fractions import Fraction

from . import __version__
from .ball import omega_exact
from .catalog import bound_catalog, get_case
from .evaluate import DEFAULT_PREC, PREC_CAP, Evaluator, PrecInterval
from .exact import PiExpression, format_rational
from .harness import (DEFAULT_SCAN_TO, UNDECIDED, decay_order, discrepancy_audit,
                      monotonicity_check, sharpness_compare, verify_case)
from .series import CoeffSeries, get_series

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_UNDECIDED = 0, 1, 2, 3

SERIES_CHOICES = ("b", "mu", "c", "s", "lambda", "d", "t", "psi", "tshift")


class UsageError(Exception):
    pass


def _default_prec() -> int:
    raw = os.environ.get("BALLVOL_PREC")
    if not raw:
        return DEFAULT_PREC
    try:
        prec = int(raw)
    except ValueError:
        raise UsageError(f"BALLVOL_PREC must be an integer, got {raw!r}")
    if prec < 16:
        raise UsageError("BALLVOL_PREC must be >= 16")
    return prec


def exact_text(value) -> str:
    return str(value) if isinstance(value, PiExpression) else str(Fraction(value))


def decimal_text(value, digits: int = 20) -> str:
    """Decimal rendering of an exact rational or PiExpression, taken from a
    certified enclosure with enough guard bits to fix every printed digit."""
    if not isinstance(value, PiExpression):
        value = PiExpression.const(value)
    prec = int(digits * 3.33) + 64
    return PrecInterval.from_iv(value.evaluate(Evaluator(prec).ctx), prec).render(digits)


def _series_rows(series: CoeffSeries, count: int) -> list[tuple[int, object]]:
    return [(j, series.coeffs[j]) for j in range(series.start_index, min(count, len(series.coeffs)))]


def _series_json(series: CoeffSeries, count: int) -> dict:
    def enc(c):
        return c.to_json_obj() if isinstance(c, PiExpression) else format_rational(c)

    return {
        "series": series.id,
        "variable": series.variable,
        "start_index": series.start_index,
        "coeffs": [{"j": j, "value": enc(c)} for j, c in _series_rows(series, count)],
    }


def cmd_coeffs(args, out) -> int:
    if args.count < 1:
        raise UsageError("--count must be >= 1")
    name = args.series.lower()
    internal_count = max(args.count - 1, 3 if name == "psi" else 1)
    got = get_series(name, internal_count)
    families = list(got) if isinstance(got, tuple) else [got]
    if args.format == "json":
        payload = [_series_json(s, args.count) for s in families]
        out.write(json.dumps(payload[0] if len(payload) == 1 else payload, indent=2) + "\n")
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["series", "j", "exact", "decimal"])
        for s in families:
            for j, c in _series_rows(s, args.count):
                w.writerow([s.id, j, exact_text(c), decimal_text(c)])
    else:
        for s in families:
            out.write(f"# {s.id} (variable {s.variable})\n")
            for j, c in _series_rows(s, args.count):
                out.write(f"{j:>3}  {exact_text(c):>28}  {decimal_text(c)}\n")
    return EXIT_OK


def cmd_omega(args, out) -> int:
    if args.n < 0:
        raise UsageError("--n must be >= 0")
    w = omega_exact(args.n)
    dec = decimal_text(w.value, args.digits)
    if args.format == "json":
        out.write(json.dumps({"n": args.n, "exact": w.value.to_json_obj(), "decimal": dec}) + "\n")
    else:
        out.write(f"{exact_text(w.value)} ≈ {dec}\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    if not 1 <= args.n_from <= args.n_to:
        raise UsageError("need 1 <= --from <= --to")
    report = verify_case(args.case, args.n_from, args.n_to, args.prec, args.prec_cap, args.workers)
    if args.format == "json":
        out.write(report.to_json() + "\n")
    elif args.format == "csv":
        out.write(report.to_csv())
    else:
        s = report.summary
        out.write(f"case {report.case.label}: {report.case.source}\n")
        out.write(f"{'n':>6}  {'status':<15} {'lower side':<15} {'upper side':<15} {'margin_lo':>22} {'margin_hi':>22}\n")
        for r in report.records:
            row = r.to_json_obj(12)
            out.write(f"{r.n:>6}  {r.status:<15} {r.lower.status:<15} {r.upper.status:<15} "
                      f"{row['margin_lo'] or '-':>22} {row['margin_hi'] or '-':>22}\n")
        out.write(json.dumps(s, indent=2) + "\n")
    if report.violations:
        return EXIT_FAIL
    if report.summary["undecided"]:
        return EXIT_UNDECIDED
    return EXIT_OK


def cmd_sharpness(args, out) -> int:
    rows = sharpness_compare(args.new, args.classical, args.n_list, args.prec, args.prec_cap)
    _emit_rows(rows, args.format, out)
    return EXIT_UNDECIDED if any(r["status"] == UNDECIDED for r in rows) else EXIT_OK


def cmd_order(args, out) -> int:
    res = decay_order(args.series, args.trunc, args.n1, args.n2, args.prec, args.prec_cap)
    _emit_rows([res], args.format, out)
    return EXIT_UNDECIDED if res["status"] == UNDECIDED else EXIT_OK


def cmd_catalog(args, out) -> int:
    rows = []
    for c in bound_catalog():
        rows.append({
            "case": c.id,
            "quantity": c.quantity.value,
            "claimed_lower_from": c.lower_from,
            "claimed_upper_from": c.upper_from,
            "variants": ",".join(sorted(c.variants)),
            "source": c.source,
        })
    _emit_rows(rows, args.format, out)
    return EXIT_OK


def cmd_audit(args, out) -> int:
    out.write(json.dumps(discrepancy_audit(args.n_to, args.prec, args.prec_cap, args.workers), indent=2) + "\n")
    return EXIT_OK


def cmd_monotonicity(args, out) -> int:
    res = monotonicity_check(args.n_from, args.n_to, args.prec, args.prec_cap)
    out.write(json.dumps(res, indent=2) + "\n")
    if res["direct"]["failures"]:
        return EXIT_FAIL
    return EXIT_UNDECIDED if res["direct"]["undecided"] else EXIT_OK


def _emit_rows(rows: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(rows, indent=2) + "\n")
        return
    keys = list(dict.fromkeys(k for r in rows for k in r))
    if fmt == "csv":
        w = csv.DictWriter(out, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return
    for r in rows:
        out.write("  ".join(f"{k}={r.get(k)}" for k in keys) + "\n")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser(default_prec: int) -> argparse.ArgumentParser:
    p = _Parser(prog="ballvol", description="Exact unit-ball volumes, their asymptotic series, "
                                            "and certified checks of two-sided bounds.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("-o", "--output", help="write to this file instead of stdout")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    # -o is also accepted after the subcommand; SUPPRESS keeps the global value otherwise
    common = _Parser(add_help=False)
    common.add_argument("-o", "--output", default=argparse.SUPPRESS, help=argparse.SUPPRESS)

    def command(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    def fmt(sp, default="table"):
        sp.add_argument("--format", choices=("table", "csv", "json"), default=default)

    def prec(sp):
        sp.add_argument("--prec", type=int, default=default_prec, help="starting precision in bits")
        sp.add_argument("--prec-cap", type=int, default=PREC_CAP)

    sp = command("coeffs", help="exact coefficients of a series family")
    sp.add_argument("--series", required=True, type=str.lower, choices=SERIES_CHOICES)
    sp.add_argument("--count", type=int, default=12)
    fmt(sp)
    sp.set_defaults(func=cmd_coeffs)

    sp = command("omega", help="exact volume of the unit n-ball")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--digits", type=int, default=30)
    fmt(sp)
    sp.set_defaults(func=cmd_omega)

    sp = command("verify", help="certified scan of one bound case")
    sp.add_argument("--case", required=True)
    sp.add_argument("--from", dest="n_from", type=int, default=1)
    sp.add_argument("--to", dest="n_to", type=int, default=100)
    sp.add_argument("--workers", type=int, default=1)
    prec(sp)
    fmt(sp)
    sp.set_defaults(func=cmd_verify)

    sp = command("sharpness", help="compare bracket widths of two cases")
    sp.add_argument("--new", required=True)
    sp.add_argument("--classical", required=True)
    sp.add_argument("--n-list", type=int, nargs="+", required=True)
    prec(sp)
    fmt(sp)
    sp.set_defaults(func=cmd_sharpness)

    sp = command("order", help="decay order of a truncated series")
    sp.add_argument("--series", required=True, type=str.lower,
                    choices=("b", "mu", "c", "s", "lambda", "d", "t", "psi"))
    sp.add_argument("--trunc", type=int, required=True)
    sp.add_argument("--n1", type=int, default=100)
    sp.add_argument("--n2", type=int, default=200)
    prec(sp)
    fmt(sp)
    sp.set_defaults(func=cmd_order)

    sp = command("catalog", help="list bound cases")
    fmt(sp)
    sp.set_defaults(func=cmd_catalog)

    sp = command("audit", help="discrepancy records for the audited cases")
    sp.add_argument("--to", dest="n_to", type=int, default=DEFAULT_SCAN_TO)
    sp.add_argument("--workers", type=int, default=1)
    prec(sp)
    sp.set_defaults(func=cmd_audit)

    sp = command("monotonicity", help="certify that Omega_n^(1/n) decreases")
    sp.add_argument("--from", dest="n_from", type=int, default=1)
    sp.add_argument("--to", dest="n_to", type=int, default=DEFAULT_SCAN_TO)
    prec(sp)
    sp.set_defaults(func=cmd_monotonicity)
    return p


def _check_identifiers(args) -> None:
    for attr in ("case", "new", "classical"):
        value = getattr(args, attr, None)
        if value is not None:
            try:
                get_case(value)
            except KeyError as exc:
                raise UsageError(str(exc.args[0]))


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser(_default_prec()).parse_args(argv)
        _check_identifiers(args)
        if getattr(args, "prec", DEFAULT_PREC) < 16:
            raise UsageError("--prec must be >= 16")
    except UsageError as exc:
        stderr.write(f"ballvol: error: {exc}\n")
        return EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    buf = io.StringIO()
    try:
        code = args.func(args, buf)
    except UsageError as exc:
        stderr.write(f"ballvol: error: {exc}\n")
        return EXIT_USAGE
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(buf.getvalue())
    else:
        stdout.write(buf.getvalue())
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
