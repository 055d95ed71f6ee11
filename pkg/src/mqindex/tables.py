"""Knot-table ingestion, the per-knot pipeline, and the 8-10 crossing classification."""
from __future__ import annotations

import csv
import io
import json
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .fox import alexander_matrix, alexander_polynomial
from .indices import IndexReport, RULE_FIBERED, mq_bounds, nakanishi_bounds
from .laurent import LaurentPoly, associates, default_battery, parse_laurent
from .notation import DiagramError, parse_pd, wirtinger_presentation

# Knots whose MQ index the fibration corollary settles at 1 (Rolfsen numbering).
DETERMINED_BY_FIBRATION = (
    "8_16", "9_29", "9_32", "10_62", "10_64", "10_79", "10_81", "10_85", "10_89",
    "10_94", "10_96", "10_100", "10_105", "10_106", "10_109", "10_110", "10_112",
    "10_116", "10_148", "10_149", "10_150", "10_151", "10_152", "10_153", "10_154",
    "10_158",
)

# Prime knots up to 10 crossings whose MQ index stays in [1, 2].
STILL_OPEN = (
    "10_65", "10_66", "10_67", "10_68", "10_80", "10_83", "10_86", "10_87", "10_90",
    "10_92", "10_93", "10_97", "10_108", "10_111", "10_117", "10_120", "10_121",
    "10_163", "10_166",
)

_TABLE_NAME = re.compile(r"^(\d+)([an]?)_(\d+)$")


class DatasetError(ValueError):
    pass


def knot_sort_key(name: str):
    m = _TABLE_NAME.match(name)
    if m:
        return (0, int(m.group(1)), m.group(2), int(m.group(3)), "")
    return (1, 0, "", 0, name)


def crossing_number_from_name(name: str) -> int | None:
    m = _TABLE_NAME.match(name)
    return int(m.group(1)) if m else None


@dataclass(frozen=True)
class KnotRecord:
    name: str
    pd: str
    fibered: bool | None = None
    unknotting_number: int | None = None
    rank: int | None = None
    tunnel_number: int | None = None
    reference_delta: str | None = None
    source: str | None = None

    @property
    def prime_table_entry(self) -> bool:
        """Named in a prime knot table (``c_k``, ``c{a,n}_k`` with c >= 3)."""
        c = crossing_number_from_name(self.name)
        return c is not None and c >= 3

    @classmethod
    def from_json(cls, obj: dict) -> "KnotRecord":
        allowed = {"name", "pd", "fibered", "u", "rank", "tunnel", "delta", "source"}
        extra = set(obj) - allowed
        if extra:
            raise DatasetError(f"unknown keys {sorted(extra)}")
        for key in ("name", "pd"):
            if not isinstance(obj.get(key), str) or not obj[key].strip():
                raise DatasetError(f"{key!r} must be a nonempty string")
        if obj.get("fibered") is not None and not isinstance(obj["fibered"], bool):
            raise DatasetError("'fibered' must be a boolean or null")
        for key in ("u", "rank", "tunnel"):
            v = obj.get(key)
            if v is not None and (not isinstance(v, int) or isinstance(v, bool) or v < 0):
                raise DatasetError(f"{key!r} must be a non-negative integer or null")
        if obj.get("delta") is not None and not isinstance(obj["delta"], str):
            raise DatasetError("'delta' must be a string or null")
        return cls(obj["name"], obj["pd"], obj.get("fibered"), obj.get("u"), obj.get("rank"),
                   obj.get("tunnel"), obj.get("delta"), obj.get("source"))

    def to_json(self) -> dict:
        return {"name": self.name, "pd": self.pd, "fibered": self.fibered,
                "u": self.unknotting_number, "rank": self.rank, "tunnel": self.tunnel_number,
                "delta": self.reference_delta, "source": self.source}


def load_dataset(path) -> list[KnotRecord]:
    """Read one JSON object per line; blank lines are skipped."""
    records = []
    seen = set()
    with open(Path(path)) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = KnotRecord.from_json(json.loads(line))
                parse_pd(rec.pd, rec.name)
            except (json.JSONDecodeError, DatasetError, DiagramError) as exc:
                raise DatasetError(f"{path}:{lineno}: {exc}") from None
            if rec.name in seen:
                raise DatasetError(f"{path}:{lineno}: duplicate knot name {rec.name!r}")
            seen.add(rec.name)
            records.append(rec)
    return records


# -- pipeline -------------------------------------------------------------------------

def process_record(rec: KnotRecord, primes: Sequence[int] | None = None) -> IndexReport:
    try:
        d = parse_pd(rec.pd, rec.name)
        data = alexander_matrix(wirtinger_presentation(d))
        delta = alexander_polynomial(data)
        if rec.reference_delta is not None and not associates(delta, parse_laurent(rec.reference_delta)):
            raise ValueError(f"computed delta {delta} disagrees with reference {rec.reference_delta}")
        battery = default_battery(delta, primes) if primes is not None else None
        m = nakanishi_bounds(data, battery)
        u = rec.unknotting_number
        nontrivial = delta != LaurentPoly.const(1) or rec.prime_table_entry or (u is not None and u >= 1)
        c = crossing_number_from_name(rec.name)
        hint = 2 if rec.prime_table_entry and c <= 10 else None
        a, trace = mq_bounds(m, fibered=rec.fibered, u=u, r=rec.rank, nontrivial=nontrivial,
                             hint_upper=hint, tunnel=rec.tunnel_number)
        return IndexReport(rec.name, delta, m, a, rec.fibered, trace)
    except Exception as exc:  # isolate per-record failures
        return IndexReport(rec.name, None, None, None, rec.fibered, [], error=f"{type(exc).__name__}: {exc}")


def _process_star(args):
    return process_record(*args)


def run_pipeline(records: Iterable[KnotRecord], primes: Sequence[int] | None = None,
                 workers: int = 1) -> list[IndexReport]:
    """One report per record, ordered by knot name."""
    records = list(records)
    jobs = [(r, primes) for r in records]
    if workers > 1 and len(records) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_process_star, jobs, chunksize=8))
    else:
        reports = [process_record(*j) for j in jobs]
    return sorted(reports, key=lambda r: knot_sort_key(r.name))


# -- the 8-10 crossing classification --------------------------------------------------

@dataclass(frozen=True)
class Mismatch:
    name: str
    kind: str
    detail: str

    def __str__(self):
        return f"{self.name}: {self.kind} ({self.detail})"


@dataclass
class Section4Report:
    determined_one: list[str] = field(default_factory=list)
    determined_two: list[str] = field(default_factory=list)
    open: list[str] = field(default_factory=list)
    determined_other: list[str] = field(default_factory=list)
    failed: list[str] = field(default_factory=list)
    by_fibration: list[str] = field(default_factory=list)
    mismatches: list[Mismatch] = field(default_factory=list)

    def to_record(self) -> dict:
        return {
            "determined_one": self.determined_one,
            "determined_two": self.determined_two,
            "open": self.open,
            "determined_other": self.determined_other,
            "failed": self.failed,
            "by_fibration": self.by_fibration,
            "mismatches": [{"name": m.name, "kind": m.kind, "detail": m.detail} for m in self.mismatches],
        }


def reproduce_section4(reports: Sequence[IndexReport]) -> Section4Report:
    out = Section4Report()
    by_name = {r.name: r for r in reports}
    for r in sorted(reports, key=lambda r: knot_sort_key(r.name)):
        if r.error or r.a_bounds is None:
            out.failed.append(r.name)
        elif not r.a_bounds.tight:
            out.open.append(r.name)
        elif r.a_bounds.lower == 1:
            out.determined_one.append(r.name)
        elif r.a_bounds.lower == 2:
            out.determined_two.append(r.name)
        else:
            out.determined_other.append(r.name)
        if r.a_bounds is not None and r.a_bounds.tight and RULE_FIBERED in r.rule_trace:
            out.by_fibration.append(r.name)

    def describe(name):
        r = by_name[name]
        if r.error:
            return r.error
        return f"m={r.m_bounds}, a={r.a_bounds}, fibered={r.fibered}, rules={','.join(r.rule_trace)}"

    fib, opn = set(out.by_fibration), set(out.open)
    for name in DETERMINED_BY_FIBRATION:
        if name not in by_name:
            out.mismatches.append(Mismatch(name, "missing", "expected a=1 via fibration"))
        elif name not in fib or by_name[name].a_bounds.lower != 1:
            out.mismatches.append(Mismatch(name, "not determined by fibration", describe(name)))
    for name in STILL_OPEN:
        if name not in by_name:
            out.mismatches.append(Mismatch(name, "missing", "expected open [1,2]"))
        elif name not in opn or (by_name[name].a_bounds.lower, by_name[name].a_bounds.upper) != (1, 2):
            out.mismatches.append(Mismatch(name, "expected open", describe(name)))
    for name in out.by_fibration:
        if name not in DETERMINED_BY_FIBRATION:
            out.mismatches.append(Mismatch(name, "unexpected fibration determination", describe(name)))
    for name in out.open:
        if name not in STILL_OPEN:
            out.mismatches.append(Mismatch(name, "unexpected open", describe(name)))
    for name in out.failed:
        out.mismatches.append(Mismatch(name, "pipeline failure", by_name[name].error))
    return out


# -- emitters ---------------------------------------------------------------------------

REPORT_FIELDS = ("name", "delta", "m_lower", "m_upper", "a_lower", "a_upper", "fibered", "rules")


def report_emit(report, fmt: str = "json") -> bytes:
    """Serialize an IndexReport, a list of them, or a Section4Report."""
    if fmt not in ("json", "csv", "text"):
        raise ValueError(f"unknown format {fmt!r}")
    if isinstance(report, Section4Report):
        return _emit_section4(report, fmt)
    reports = [report] if isinstance(report, IndexReport) else list(report)
    if fmt == "json":
        payload = reports[0].to_record() if isinstance(report, IndexReport) else [r.to_record() for r in reports]
        return (json.dumps(payload, indent=2) + "\n").encode()
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(REPORT_FIELDS + ("error",))
        for r in reports:
            rec = r.to_record()
            w.writerow([_csv_cell(rec.get(k)) for k in REPORT_FIELDS] + [rec.get("error", "")])
        return buf.getvalue().encode()
    lines = []
    for r in reports:
        if r.error:
            lines.append(f"{r.name}: ERROR {r.error}")
        else:
            lines.append(f"{r.name}: delta = {r.delta}; m = {r.m_bounds}; a = {r.a_bounds}; "
                         f"fibered = {r.fibered}; rules = {', '.join(r.rule_trace) or '-'}")
    return ("\n".join(lines) + ("\n" if lines else "")).encode()


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, list):
        return ";".join(v)
    return v


def _wrap(names: Sequence[str], per_line: int = 9) -> list[str]:
    return ["  " + ", ".join(names[i:i + per_line]) for i in range(0, len(names), per_line)] or ["  (none)"]


def _emit_section4(s: Section4Report, fmt: str) -> bytes:
    if fmt == "json":
        return (json.dumps(s.to_record(), indent=2) + "\n").encode()
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("name", "classification"))
        rows = ([(n, "a=1") for n in s.determined_one] + [(n, "a=2") for n in s.determined_two]
                + [(n, "open") for n in s.open] + [(n, "other") for n in s.determined_other]
                + [(n, "failed") for n in s.failed])
        for row in sorted(rows, key=lambda x: knot_sort_key(x[0])):
            w.writerow(row)
        return buf.getvalue().encode()
    lines = [f"MQ index one by the fibration corollary ({len(s.by_fibration)} knots):"]
    lines += _wrap(s.by_fibration)
    lines.append(f"MQ index still open in [1, 2] ({len(s.open)} knots):")
    lines += _wrap(s.open)
    lines.append(f"determined: {len(s.determined_one)} with a = 1, {len(s.determined_two)} with a = 2")
    if s.mismatches:
        lines.append(f"MISMATCHES ({len(s.mismatches)}):")
        lines += [f"  {m}" for m in s.mismatches]
    else:
        lines.append("mismatches: none")
    return ("\n".join(lines) + "\n").encode()
