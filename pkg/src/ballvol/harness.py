"""Certified scans of bound cases over ranges of n.

A side is *certified* when its margin enclosure excludes zero.  Undecided
margins are retried at doubled precision up to the cap.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from .catalog import (AB_TAIL_CLOSED, AB_TAIL_PRINTED, BoundCase, psi_head, stirling_head,
                      ab_alpha, ab_beta, bound_catalog, get_case)
from .evaluate import (DEFAULT_PREC, PREC_CAP, DomainError, PrecInterval, Quantity,
                       evaluator)
from .series import get_series

log = logging.getLogger(__name__)

HOLD = "certified_hold"
FAIL = "certified_fail"
UNDEFINED = "undefined"
UNDECIDED = "undecided"
NOT_APPLICABLE = "n/a"

SIDES = ("lower", "upper")
DEFAULT_SCAN_TO = 5000


@dataclass
class SideResult:
    bound: Optional[PrecInterval] = None
    margin: Optional[PrecInterval] = None
    status: str = NOT_APPLICABLE
    prec_bits: int = 0


@dataclass
class NRecord:
    n: int
    value: PrecInterval
    lower: SideResult
    upper: SideResult
    status: str

    @property
    def prec_bits(self) -> int:
        return max(self.value.prec_bits, self.lower.prec_bits, self.upper.prec_bits)

    def side(self, name: str) -> SideResult:
        return self.lower if name == "lower" else self.upper

    def to_json_obj(self, digits: int = 30) -> dict:
        def txt(x):
            return None if x is None else x.render(digits)

        return {
            "n": self.n,
            "lower": txt(self.lower.bound),
            "value": txt(self.value),
            "upper": txt(self.upper.bound),
            "margin_lo": txt(self.lower.margin),
            "margin_hi": txt(self.upper.margin),
            "status": self.status,
            "lower_status": self.lower.status,
            "upper_status": self.upper.status,
            "prec_bits": self.prec_bits,
        }


def _combine(lower: str, upper: str) -> str:
    statuses = {lower, upper} - {NOT_APPLICABLE}
    for s in (FAIL, UNDEFINED, UNDECIDED):
        if s in statuses:
            return s
    return HOLD


def _margin_status(margin: PrecInterval) -> Optional[str]:
    sign = margin.sign()
    if sign == 1:
        return HOLD
    if sign == -1:
        return FAIL
    return None


def evaluate_point(case: BoundCase, n: int, prec_bits: int = DEFAULT_PREC,
                   prec_cap: int = PREC_CAP) -> NRecord:
    """Certify both sides of ``case`` at one ``n``, escalating precision per side."""
    results = {name: SideResult() for name in SIDES}
    pending = [name for name in SIDES if case.side(name) is not None]
    prec = prec_bits
    value = None
    while True:
        ev = evaluator(prec)
        target = ev.quantity(case.quantity, n)
        value = PrecInterval.from_iv(target, prec)
        still = []
        for name in pending:
            res = results[name]
            res.prec_bits = prec
            try:
                bound = ev.ctx.mpf(case.side(name)(ev, n))
            except DomainError as exc:
                res.bound = res.margin = None
                if exc.indeterminate:
                    res.status = UNDECIDED
                    still.append(name)
                else:
                    res.status = UNDEFINED
                continue
            margin = target - bound if name == "lower" else bound - target
            res.bound = PrecInterval.from_iv(bound, prec)
            res.margin = PrecInterval.from_iv(margin, prec)
            decided = _margin_status(res.margin)
            res.status = decided or UNDECIDED
            if decided is None:
                still.append(name)
        pending = still
        if not pending or prec >= prec_cap:
            break
        prec = min(2 * prec, prec_cap)
    return NRecord(n, value, results["lower"], results["upper"],
                   _combine(results["lower"].status, results["upper"].status))


@dataclass
class VerifyReport:
    case: BoundCase
    n_from: int
    n_to: int
    prec_bits: int
    records: list[NRecord]
    summary: dict = field(default_factory=dict)

    def to_json_obj(self, digits: int = 30) -> dict:
        return {
            "case": self.case.label,
            "n_from": self.n_from,
            "n_to": self.n_to,
            "prec_bits": self.prec_bits,
            "records": [r.to_json_obj(digits) for r in self.records],
            "summary": self.summary,
        }

    def to_json(self, digits: int = 30) -> str:
        return json.dumps(self.to_json_obj(digits), indent=2)

    def to_csv(self, digits: int = 30) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cols = ["lower", "value", "upper", "margin_lo", "margin_hi", "status"]
        w.writerow(["case", "n"] + cols)
        for r in self.records:
            row = r.to_json_obj(digits)
            w.writerow([self.case.label, r.n] + ["" if row[c] is None else row[c] for c in cols])
        return buf.getvalue()

    @property
    def violations(self) -> list[dict]:
        return self.summary["violations"]

    @property
    def audit_failures(self) -> list[dict]:
        return self.summary["audit_failures"]


def _first_stable(records: Sequence[NRecord], side: str) -> Optional[int]:
    """Smallest n0 with the side certified for every scanned n >= n0."""
    first = None
    for r in reversed(records):
        if r.side(side).status != HOLD:
            break
        first = r.n
    return first


def summarize(case: BoundCase, records: Sequence[NRecord]) -> dict:
    violations, audit_failures, below_claim = [], [], []
    undefined, undecided = [], []
    min_margin = None
    for r in records:
        for name in SIDES:
            res = r.side(name)
            claimed = case.claimed_from(name)
            in_claim = claimed is not None and r.n >= claimed
            entry = {"n": r.n, "side": name}
            if res.status == FAIL:
                if not in_claim:
                    below_claim.append(entry)
                elif name in case.audit_sides:
                    audit_failures.append(entry)
                else:
                    violations.append(entry)
            elif res.status == UNDEFINED:
                undefined.append({**entry, "in_claimed_range": in_claim})
            elif res.status == UNDECIDED:
                undecided.append({**entry, "in_claimed_range": in_claim,
                                  "equality_point": (name, r.n) in case.equality_points})
            elif res.status == HOLD and (min_margin is None or res.margin.lo < min_margin):
                min_margin = res.margin.lo
    first = {name: (_first_stable(records, name) if case.side(name) else None) for name in SIDES}
    both = [v for name, v in first.items() if case.side(name)]
    overall = None if any(v is None for v in both) else max(both)
    return {
        "first_certified_n": overall,
        "first_certified_n_lower": first["lower"],
        "first_certified_n_upper": first["upper"],
        "claimed_lower_from": case.lower_from,
        "claimed_upper_from": case.upper_from,
        "violations": violations,
        "audit_failures": audit_failures,
        "failures_below_claim": below_claim,
        "undefined": undefined,
        "undecided": undecided,
        "min_positive_margin": None if min_margin is None else mpmath.nstr(min_margin, 10),
        "prec_bits": max((r.prec_bits for r in records), default=0),
        "counts": {s: sum(r.status == s for r in records) for s in (HOLD, FAIL, UNDEFINED, UNDECIDED)},
    }


def _scan_chunk(args) -> list[NRecord]:
    case_id, lo, hi, prec, cap = args
    case = get_case(case_id)
    return [evaluate_point(case, n, prec, cap) for n in range(lo, hi + 1)]


def _scan(case: BoundCase, n_from, n_to, prec_bits, prec_cap, workers, chunk) -> list[NRecord]:
    jobs = [(case.label, lo, min(lo + chunk - 1, n_to), prec_bits, prec_cap)
            for lo in range(n_from, n_to + 1, chunk)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_scan_chunk, jobs))
    else:
        parts = [_scan_chunk(j) for j in jobs]
    return [r for part in parts for r in part]


def _discrepancy(case: BoundCase, records: Sequence[NRecord], summary: dict,
                 rescan) -> Optional[dict]:
    """Discrepancy record for an audited side that fails or is undefined in range."""
    out = {}
    for name in case.audit_sides:
        fails = [a["n"] for a in summary["audit_failures"] if a["side"] == name]
        undefined = [u["n"] for u in summary["undefined"] if u["side"] == name]
        if not fails and not undefined:
            continue
        entry = {
            "side": name,
            "failures": len(fails),
            "first_failure_n": fails[0] if fails else None,
            "last_failure_n": fails[-1] if fails else None,
            "undefined_n": undefined,
            "first_defined_n": next((r.n for r in records if r.side(name).status != UNDEFINED), None),
            f"first_certified_n_{name}": summary[f"first_certified_n_{name}"],
        }
        if case.audit_alternate and fails:
            alt = rescan(case.with_variant(case.audit_alternate))
            entry["alternate_variant"] = case.audit_alternate
            entry[f"alternate_first_certified_n_{name}"] = alt.summary[f"first_certified_n_{name}"]
            entry["alternate_violations"] = alt.summary["violations"] + alt.summary["audit_failures"]
        out[name] = entry
    return out or None


def verify_case(case_id: str | BoundCase, n_from: int, n_to: int,
                prec_bits: int = DEFAULT_PREC, prec_cap: int = PREC_CAP,
                workers: int = 1, chunk: int = 250) -> VerifyReport:
    """Scan ``case_id`` (``ID`` or ``ID:VARIANT``) over ``n_from..n_to``."""
    case = case_id if isinstance(case_id, BoundCase) else get_case(case_id)
    if not 1 <= n_from <= n_to:
        raise ValueError("need 1 <= n_from <= n_to")
    records = _scan(case, n_from, n_to, prec_bits, prec_cap, workers, chunk)
    summary = summarize(case, records)

    def rescan(alt):
        return verify_case(replace(alt, audit_sides=()), n_from, n_to, prec_bits, prec_cap, workers, chunk)

    discrepancy = _discrepancy(case, records, summary, rescan)
    if discrepancy:
        summary["discrepancy"] = discrepancy
    log.debug("scanned %s over %d..%d", case.label, n_from, n_to)
    return VerifyReport(case, n_from, n_to, prec_bits, records, summary)


# --- monotonicity of Omega_n^(1/n) -----------------------------------------

def _certify_sign(fn, n: int, prec_bits: int, prec_cap: int) -> tuple[str, PrecInterval]:
    prec = prec_bits
    while True:
        ev = evaluator(prec)
        x = PrecInterval.from_iv(ev.ctx.mpf(fn(ev, n)), prec)
        status = _margin_status(x)
        if status or prec >= prec_cap:
            return status or UNDECIDED, x
        prec *= 2


def monotonicity_check(n_from: int = 1, n_to: int = DEFAULT_SCAN_TO,
                       prec_bits: int = DEFAULT_PREC, prec_cap: int = PREC_CAP,
                       sufficient: bool = True) -> dict:
    """Certify ``Omega_n^(1/n) > Omega_{n+1}^(1/(n+1))`` directly, and the
    sufficient condition ``alpha(n) - beta(n+1) > 0`` for both tail variants."""
    if n_from < 1:
        raise ValueError("n_from must be >= 1")

    def direct(ev, n):
        return ev.quantity(Quantity.LOG_OMEGA_DIFF, n)

    out: dict = {"n_from": n_from, "n_to": n_to}
    fails, undecided = [], []
    for n in range(n_from, n_to + 1):
        status, _ = _certify_sign(direct, n, prec_bits, prec_cap)
        if status == FAIL:
            fails.append(n)
        elif status != HOLD:
            undecided.append(n)
    out["direct"] = {"holds": not fails and not undecided, "failures": fails, "undecided": undecided}

    if sufficient:
        for name, tail in (("printed", AB_TAIL_PRINTED), ("closed", AB_TAIL_CLOSED)):
            def gap(ev, n, tail=tail):
                return ab_alpha(ev, n, tail) - ab_beta(ev, n + 1)
            statuses = {n: _certify_sign(gap, n, prec_bits, prec_cap)[0] for n in range(n_from, n_to + 1)}
            first = None
            for n in range(n_to, n_from - 1, -1):
                if statuses[n] != HOLD:
                    break
                first = n
            out[f"sufficient_{name}"] = {
                "first_certified_n": first,
                "failures": [n for n, s in statuses.items() if s == FAIL],
                "undecided": [n for n, s in statuses.items() if s == UNDECIDED],
            }
    return out


# --- truncation decay orders -------------------------------------------------

def truncation_error(series_id: str, trunc: int, ev, n: int):
    """``truncated series - exact target`` as an interval at ``n``."""
    sid = series_id.upper()
    series = get_series(sid, max(trunc, 1) + 2)
    if sid in ("B", "B_TAIL"):
        # stored by j; the term b_j multiplies n^(-2j)
        partial = sum((c / Fraction(n) ** (2 * j) for j, c in enumerate(series.coeffs[: trunc + 1]) if j),
                      Fraction(0))
        exact = stirling_head(ev, n) - ev.quantity(Quantity.LOG_OMEGA_PER_N, n)
        return ev.q(partial) - exact
    partial = series.truncated_value(n, trunc)
    if sid == "MU":
        exact = ev.quantity(Quantity.LOG_RATIO, n) - (ev.ln_rational(n) - ev.ln2 - ev.lnpi) / 2
    elif sid == "C":
        exact = ev.quantity(Quantity.RATIO, n) / ev.sqrt(ev.q(n) / (2 * ev.pi))
    elif sid == "LAMBDA":
        exact = ev.quantity(Quantity.GEO_LOG, n)
    elif sid == "D":
        exact = ev.quantity(Quantity.GEO_RATIO, n)
    elif sid == "S":
        r = ev.quantity(Quantity.RATIO, n)
        exact = r * r - (n + ev.q(Fraction(1, 2))) / (2 * ev.pi)
        # the index-0 slot holds the regrouped 1/(4 pi), already inside the head
        return ev.pi_expr(partial - series.coeffs[0]) - exact
    elif sid == "T":
        exact = ev.quantity(Quantity.GEO_LOG, n) / ev.ln_rational(Fraction(n + 1, n))
    elif sid == "PSI":
        exact = psi_head(ev, n) - ev.quantity(Quantity.LOG_OMEGA_DIFF, n)
    else:
        raise KeyError(f"no decay target for series {series_id!r}")
    return ev.q(partial) - exact


def decay_order(series_id: str, trunc: int, n1: int, n2: int,
                prec_bits: int = DEFAULT_PREC, prec_cap: int = PREC_CAP,
                tolerance: float = 0.01) -> dict:
    """Estimate rho in ``|truncated - exact| ~ n**(-rho)`` from ``n1`` and ``n2``."""
    if not (n2 >= 2 * n1 >= 2):
        raise ValueError("need n2 >= 2*n1 >= 2")
    prec = prec_bits
    while True:
        ev = evaluator(prec)
        e1 = truncation_error(series_id, trunc, ev, n1)
        e2 = truncation_error(series_id, trunc, ev, n2)
        try:
            est = (ev.ln(abs(e1)) - ev.ln(abs(e2))) / ev.ln_rational(Fraction(n2, n1))
            iv = PrecInterval.from_iv(est, prec)
            if iv.width < tolerance:
                return {"series": series_id.upper(), "trunc": trunc, "n1": n1, "n2": n2,
                        "order": float(iv.mid), "enclosure": str(iv), "prec_bits": prec,
                        "status": "certified"}
        except DomainError:
            pass
        if prec >= prec_cap:
            return {"series": series_id.upper(), "trunc": trunc, "n1": n1, "n2": n2,
                    "order": None, "prec_bits": prec, "status": UNDECIDED}
        prec *= 2


# --- sharpness -----------------------------------------------------------------

def _bracket(case: BoundCase, n: int, prec_bits: int, prec_cap: int):
    prec = prec_bits
    while True:
        ev = evaluator(prec)
        try:
            lo = case.lower(ev, n)
            hi = case.upper(ev, n)
        except DomainError as exc:
            if exc.indeterminate and prec < prec_cap:
                prec *= 2
                continue
            return None, ev
        return ev.ctx.mpf(hi - lo), ev


def sharpness_compare(new_case: str, classical_case: str, n_list: Sequence[int],
                      prec_bits: int = DEFAULT_PREC, prec_cap: int = PREC_CAP) -> list[dict]:
    """Per n, bracket widths of both cases and ``classical_width / new_width``."""
    new, cla = get_case(new_case), get_case(classical_case)
    if new.quantity != cla.quantity:
        raise ValueError(f"{new.label} bounds {new.quantity.value}, {cla.label} bounds {cla.quantity.value}")
    if new.lower is None or new.upper is None or cla.lower is None or cla.upper is None:
        raise ValueError("sharpness needs two-sided cases")
    rows = []
    for n in n_list:
        prec = prec_bits
        while True:
            w_new, ev = _bracket(new, n, prec, prec_cap)
            w_cla, _ = _bracket(cla, n, prec, prec_cap)
            if w_new is None or w_cla is None:
                rows.append({"n": n, "new": new.label, "classical": cla.label, "status": UNDEFINED})
                break
            diff = PrecInterval.from_iv(w_cla - w_new, prec)
            ratio = PrecInterval.from_iv(w_cla / w_new, prec) if PrecInterval.from_iv(w_new, prec).lo > 0 else None
            status = {1: "new_sharper", -1: "classical_sharper"}.get(diff.sign())
            if status or prec >= prec_cap:
                rows.append({
                    "n": n, "new": new.label, "classical": cla.label,
                    "new_width": PrecInterval.from_iv(w_new, prec).render(12),
                    "classical_width": PrecInterval.from_iv(w_cla, prec).render(12),
                    "width_ratio": None if ratio is None else ratio.render(12),
                    "status": status or UNDECIDED,
                })
                break
            prec *= 2
    return rows


# --- documented discrepancies --------------------------------------------------

def discrepancy_audit(n_to: int = DEFAULT_SCAN_TO, prec_bits: int = DEFAULT_PREC,
                      prec_cap: int = PREC_CAP, workers: int = 1) -> list[dict]:
    """Discrepancy records of every audited case over ``1..n_to``."""
    out = []
    for case in bound_catalog():
        if not case.audit_sides:
            continue
        report = verify_case(case, 1, n_to, prec_bits, prec_cap, workers)
        out.append({"case": case.label, "source": case.source,
                    "discrepancy": report.summary.get("discrepancy"),
                    "violations": report.violations})
    return out
