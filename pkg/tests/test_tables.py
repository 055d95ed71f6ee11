import csv
import io
import json

import pytest

from mqindex.indices import IndexBounds, IndexReport
from mqindex.laurent import parse_laurent
from mqindex.tables import (DETERMINED_BY_FIBRATION, STILL_OPEN, DatasetError, KnotRecord, Section4Report,
                            knot_sort_key, load_dataset, process_record, report_emit, reproduce_section4,
                            run_pipeline)

from conftest import DATA, TREFOIL_PD


def write_lines(tmp_path, lines):
    p = tmp_path / "d.jsonl"
    p.write_text("\n".join(lines) + "\n")
    return p


def test_shipped_files():
    assert len(load_dataset(DATA / "knots_9.jsonl")) == 84
    ten = load_dataset(DATA / "knots_10.jsonl")
    assert len(ten) == 249
    names = {r.name for r in ten}
    assert set(DETERMINED_BY_FIBRATION) <= names and set(STILL_OPEN) <= names
    assert all(r.source for r in ten)
    assert {r.name for r in load_dataset(DATA / "knots_special.jsonl")} == {"KT", "Conway"}


def test_expected_lists_are_distinct():
    assert len(DETERMINED_BY_FIBRATION) == 26 and len(STILL_OPEN) == 19
    assert not set(DETERMINED_BY_FIBRATION) & set(STILL_OPEN)


def test_load_errors(tmp_path):
    assert load_dataset(write_lines(tmp_path, [""])) == []
    good = json.dumps({"name": "3_1", "pd": TREFOIL_PD})
    with pytest.raises(DatasetError, match=":2:"):
        load_dataset(write_lines(tmp_path, [good, json.dumps({"name": "x", "pd": "X(1,1)"})]))
    with pytest.raises(DatasetError, match="duplicate"):
        load_dataset(write_lines(tmp_path, [good, good]))
    with pytest.raises(DatasetError, match="unknown keys"):
        load_dataset(write_lines(tmp_path, [json.dumps({"name": "a", "pd": TREFOIL_PD, "genus": 1})]))
    with pytest.raises(DatasetError):
        load_dataset(write_lines(tmp_path, ["{not json"]))
    with pytest.raises(OSError):
        load_dataset(tmp_path / "missing.jsonl")


def test_natural_name_order():
    names = ["10_1", "3_1", "9_38", "10_100", "KT", "10_2"]
    assert sorted(names, key=knot_sort_key) == ["3_1", "9_38", "10_1", "10_2", "10_100", "KT"]


def test_trefoil_record():
    rep = process_record(KnotRecord("3_1", TREFOIL_PD, fibered=True, unknotting_number=1))
    assert str(rep.delta) == "t^2 - t + 1"
    assert rep.m_bounds == IndexBounds(1, 1) and rep.a_bounds == IndexBounds(1, 1)


def test_special_knots(special_records):
    for rep in run_pipeline(special_records):
        assert rep.error is None
        assert str(rep.delta) == "1"
        assert rep.m_bounds == IndexBounds(0, 0)
        assert rep.a_bounds == IndexBounds(1, 1)


def test_errors_are_isolated():
    bad = KnotRecord("3_1", TREFOIL_PD, reference_delta="t^2 - 3*t + 1")
    reps = run_pipeline([bad, KnotRecord("4_1", "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)")])
    assert reps[0].error and "disagrees" in reps[0].error
    assert reps[1].error is None and reps[1].a_bounds is not None
    assert run_pipeline([]) == []


def test_pipeline_is_deterministic_and_parallel_safe():
    recs = load_dataset(DATA / "knots_9.jsonl")[:30]
    a = report_emit(run_pipeline(recs), "json")
    b = report_emit(run_pipeline(list(reversed(recs)), workers=2), "json")
    assert a == b


def _report(name, a, m=None, fibered=None, trace=()):
    m = m or a
    return IndexReport(name, parse_laurent("t^2 - t + 1"), m, a, fibered, list(trace))


def test_section4_partition_and_missing():
    reps = [_report("10_62", IndexBounds(1, 1), fibered=True, trace=["Eq1.1", "Cor1.2"]),
            _report("10_65", IndexBounds(1, 2)),
            _report("9_1", IndexBounds(2, 2)),
            IndexReport("bad", None, None, None, error="boom")]
    s = reproduce_section4(reps)
    assert s.determined_one == ["10_62"] and s.open == ["10_65"] and s.determined_two == ["9_1"]
    assert s.failed == ["bad"]
    buckets = s.determined_one + s.determined_two + s.open + s.determined_other + s.failed
    assert sorted(buckets) == sorted(r.name for r in reps)
    missing = {m.name for m in s.mismatches if m.kind == "missing"}
    assert missing == (set(DETERMINED_BY_FIBRATION) | set(STILL_OPEN)) - {"10_62", "10_65"}


def test_emit_formats():
    rep = _report("3_1", IndexBounds(1, 1), trace=["Eq1.1"])
    obj = json.loads(report_emit(rep, "json"))
    assert list(obj) == ["name", "delta", "m_lower", "m_upper", "a_lower", "a_upper", "fibered", "rules"]
    assert report_emit([], "csv").decode() == "name,delta,m_lower,m_upper,a_lower,a_upper,fibered,rules,error\n"
    rows = list(csv.reader(io.StringIO(report_emit([rep], "csv").decode())))
    assert rows[1][:2] == ["3_1", "t^2 - t + 1"]
    with pytest.raises(ValueError):
        report_emit(rep, "xml")


def test_section4_text_lists_names_in_table_order():
    reps = [_report(n, IndexBounds(1, 1), fibered=True, trace=["Eq1.1", "Cor1.2"])
            for n in reversed(DETERMINED_BY_FIBRATION)]
    text = report_emit(reproduce_section4(reps), "text").decode()
    listed = ", ".join(line.strip() for line in text.splitlines()[1:4])
    assert listed == ", ".join(DETERMINED_BY_FIBRATION)


def _dim_over_f4(matrix):
    """dim of the module tensored with F_4 = F_2[w]/(w^2 + w + 1), t -> w.

    Independent of the package's field code: each entry becomes its 2x2
    multiplication matrix over F_2 and sympy supplies the rank.
    """
    from sympy import GF
    from sympy.polys.matrices import DomainMatrix

    def mult(f):
        c0 = c1 = 0
        for i, x in enumerate(f.coefficients):
            k = (f.min_degree + i) % 3
            if k == 0:
                c0 += x
            elif k == 1:
                c1 += x
            else:
                c0, c1 = c0 + x, c1 + x
        c0, c1 = c0 % 2, c1 % 2
        return [[c0, c1], [c1, (c0 + c1) % 2]]

    rows = []
    for i in range(matrix.rows):
        blocks = [mult(matrix[i, j]) for j in range(matrix.cols)]
        rows += [[x for b in blocks for x in b[0]], [x for b in blocks for x in b[1]]]
    dm = DomainMatrix([[GF(2)(x) for x in r] for r in rows], (2 * matrix.rows, 2 * matrix.cols), GF(2))
    return (2 * matrix.cols - dm.rank()) // 2


# KnotInfo lists m = 1 here; residue-field dimension 2 proves m >= 2
KNOTINFO_REFUTED = {"10_115", "10_164"}


def test_knotinfo_refutations_hold_independently(dataset_10):
    from mqindex.fox import alexander_matrix
    from mqindex.notation import parse_pd, wirtinger_presentation
    by_name = {r.name: r for r in dataset_10}
    for name in KNOTINFO_REFUTED:
        a = alexander_matrix(wirtinger_presentation(parse_pd(by_name[name].pd)))
        assert _dim_over_f4(a.presentation_matrix) == 2
    a = alexander_matrix(wirtinger_presentation(parse_pd(TREFOIL_PD)))
    assert _dim_over_f4(a.presentation_matrix) == 1


def test_computed_m_against_knotinfo(dataset_10):
    """External oracle: the Nakanishi column of KnotInfo (optional package)."""
    ki = pytest.importorskip("database_knotinfo")
    table = {}
    for row in ki.link_list()[2:]:
        name = row["name"]
        c, k = name.split("_") if "_" in name else (None, None)
        if c == "10" and int(k) >= 162:
            name = f"10_{int(k) + 1}"
        table[name] = row["nakanishi_index"]
    gaps, disagree = [], set()
    for rep in run_pipeline(dataset_10):
        want = int(table[rep.name])
        if not rep.m_bounds.lower <= want <= rep.m_bounds.upper:
            disagree.add(rep.name)
        if not rep.m_bounds.tight:
            gaps.append(rep.name)
    assert disagree == KNOTINFO_REFUTED
    # E_1 is the unit ideal for these, so ideal certificates cannot reach 2
    assert gaps == ["9_38", "10_69", "10_101", "10_160"]
