"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s`` or
``python tests/test_acceptance.py``.
"""
import random
import sys
import time
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from mqindex.fox import AlexanderData, alexander_matrix, alexander_polynomial  # noqa: E402
from mqindex.freegroup import (EMPTY, Word, check_lemma_instance, commutator, derived_depth,  # noqa: E402
                               random_chain, random_lemma_instance, random_word)
from mqindex.goeritz import knot_determinant  # noqa: E402
from mqindex.indices import IndexBounds, RULE_FIBERED, gcd_rule, kpq_classify  # noqa: E402
from mqindex.laurent import associates  # noqa: E402
from mqindex.notation import parse_pd, wirtinger_presentation  # noqa: E402
from mqindex.tables import (DETERMINED_BY_FIBRATION, STILL_OPEN, load_dataset, report_emit,  # noqa: E402
                            reproduce_section4, run_pipeline)

DATA = Path(__file__).resolve().parent.parent / "data"
RESULTS: list[str] = []


def record(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number} ({title}): {detail}"
    RESULTS.append(line)
    print(line)


@lru_cache(maxsize=None)
def timed_pipeline(name: str):
    records = load_dataset(DATA / name)
    start = time.perf_counter()
    reports = run_pipeline(records)
    return reports, time.perf_counter() - start


def test_criterion_1_table_classification():
    reports, elapsed = timed_pipeline("knots_10.jsonl")
    start = time.perf_counter()
    s4 = reproduce_section4(reports)
    report_emit(s4, "text")
    elapsed += time.perf_counter() - start
    by_name = {r.name: r for r in reports}
    ones_ok = list(s4.by_fibration) == list(DETERMINED_BY_FIBRATION) and all(
        by_name[n].a_bounds == IndexBounds(1, 1) for n in DETERMINED_BY_FIBRATION)
    open_ok = list(s4.open) == list(STILL_OPEN) and all(
        by_name[n].a_bounds == IndexBounds(1, 2) for n in STILL_OPEN if n in by_name)
    ok = ones_ok and open_ok and not s4.mismatches and elapsed < 60
    detail = (f"{len(s4.by_fibration)} by fibration, {len(s4.open)} open, "
              f"{len(s4.mismatches)} mismatches, {elapsed:.1f} s")
    if s4.mismatches:
        detail += "; " + "; ".join(str(m) for m in s4.mismatches)
    record(1, "8-10 crossing lists", ok, detail)
    assert ok, detail


def test_criterion_2_up_to_nine_crossings():
    reports, elapsed = timed_pipeline("knots_9.jsonl")
    loose = [r.name for r in reports if r.error or not r.a_bounds.tight]
    fib_bad = [r.name for r in reports if r.fibered and r.m_bounds.tight and r.a_bounds != r.m_bounds]
    ok = len(reports) == 84 and not loose and not fib_bad and elapsed < 30
    detail = f"{len(reports) - len(loose)}/{len(reports)} tight, {elapsed:.1f} s"
    if loose:
        detail += "; not tight: " + ", ".join(
            f"{n} (m={next(r.m_bounds for r in reports if r.name == n)})" for n in loose)
    if fib_bad:
        detail += "; fibered with a != m: " + ", ".join(fib_bad)
    record(2, "prime knots up to 9 crossings", ok, detail)
    assert ok, detail


def test_criterion_3_torus_sums():
    values = (-9, -7, -5, -3, 3, 5, 7, 9)
    bad = []
    for p in values:
        for q in values:
            rep = kpq_classify(p, q)
            want = IndexBounds(gcd_rule(p, q), gcd_rule(p, q))
            if rep.m_bounds != want or rep.a_bounds != want:
                bad.append(f"({p},{q}): m={rep.m_bounds} a={rep.a_bounds}")
    ok = not bad
    record(3, "T(2,p) # T(2,q) grid", ok, f"{64 - len(bad)}/64 exact" + ("; " + "; ".join(bad) if bad else ""))
    assert ok


def test_criterion_4_trivial_alexander_polynomial():
    reports = {r.name: r for r in run_pipeline(load_dataset(DATA / "knots_special.jsonl"))}
    rows = []
    ok = set(reports) == {"KT", "Conway"}
    for name in ("KT", "Conway"):
        r = reports.get(name)
        good = (r is not None and r.error is None and str(r.delta) == "1"
                and r.m_bounds == IndexBounds(0, 0) and r.a_bounds == IndexBounds(1, 1))
        ok = ok and good
        rows.append(f"{name}: delta={r.delta if r else None}, m={r.m_bounds if r else None}, "
                    f"a={r.a_bounds if r else None}")
    record(4, "Kinoshita-Terasaka and Conway", ok, "; ".join(rows))
    assert ok


def test_criterion_5_witness_identity():
    rng = random.Random(20240531)
    start = time.perf_counter()
    passed = sum(check_lemma_instance(*random_lemma_instance(rng)) for _ in range(10_000))
    elapsed = time.perf_counter() - start
    ok = passed == 10_000 and elapsed < 10
    record(5, "commutator witness identity", ok, f"{passed}/10000 in {elapsed:.2f} s")
    assert ok


def test_criterion_6_splitting_chains():
    rng = random.Random(6)
    passed = sum(random_chain(rng, levels=3).holds() for _ in range(1000))
    record(6, "3-level splitting chains", passed == 1000, f"{passed}/1000")
    assert passed == 1000


def test_criterion_7_derived_series():
    x, y, z = Word.gen(1), Word.gen(2), Word.gen(3)
    fixed = [
        derived_depth(x, 3, 3).kind == "exact" and derived_depth(x, 3, 3).depth == 0,
        derived_depth(commutator(x, y), 3, 3).depth == 1,
        derived_depth(commutator(commutator(x, y), commutator(x, z)), 3, 3).depth >= 2,
        derived_depth(EMPTY, 3, 3).kind == "trivial",
    ]
    rng = random.Random(7)
    never_trivial = 0
    for _ in range(1000):
        rank = rng.randint(2, 4)
        w = random_word(rng, rank, rng.randint(1, 20))
        never_trivial += derived_depth(w, rank, 3).kind != "trivial"
    ok = all(fixed) and never_trivial == 1000
    record(7, "derived series", ok, f"{sum(fixed)}/4 fixed cases, {never_trivial}/1000 random words nontrivial")
    assert ok


def test_criterion_8_invariant_battery():
    records = load_dataset(DATA / "knots_10.jsonl") + load_dataset(DATA / "knots_special.jsonl")
    failures = []
    for r in records:
        d = parse_pd(r.pd, r.name)
        a = alexander_matrix(wirtinger_presentation(d))
        delta = alexander_polynomial(a)
        checks = {
            "delta(1)": abs(delta(1)) == 1,
            "symmetry": associates(delta, delta.bar()),
            "column deletion": all(alexander_polynomial(AlexanderData.from_full(a.full_matrix, j)) == delta
                                   for j in range(a.full_matrix.cols)),
            "row identity": all(sum(e(1) for e in row) == 0 for row in a.full_matrix.to_rows()),
            "determinant": abs(delta(-1)) == knot_determinant(d),
        }
        failures += [f"{r.name}:{k}" for k, v in checks.items() if not v]
    ok = not failures
    record(8, "invariant battery", ok, f"{len(records)} knots, {len(failures)} failures"
           + ("; " + ", ".join(failures[:10]) if failures else ""))
    assert ok


def test_fibration_rule_is_what_closes_the_list():
    """Companion check for criterion 1: each listed knot is closed by the fibered rule."""
    reports, _ = timed_pipeline("knots_10.jsonl")
    by_name = {r.name: r for r in reports}
    assert all(RULE_FIBERED in by_name[n].rule_trace for n in DETERMINED_BY_FIBRATION)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
