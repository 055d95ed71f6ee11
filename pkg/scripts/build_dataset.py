"""Assemble the shipped JSONL knot tables from the KnotInfo snapshot.

Requires the ``database_knotinfo`` package (``pip install database_knotinfo``).
Writes data/knots_10.jsonl, data/knots_9.jsonl and data/knots_special.jsonl.

Names follow Rolfsen's table.  KnotInfo drops Rolfsen's 10_162 (the second
member of the Perko pair) and renumbers the rest, so KnotInfo 10_n for
n >= 162 is Rolfsen 10_(n+1).
"""
import argparse
import json
from pathlib import Path

from importlib.metadata import version
from database_knotinfo import link_list

SPECIAL = {"11n_34": "Conway", "11n_42": "KT"}


def rolfsen_name(ki_name: str) -> str:
    c, k = ki_name.split("_")
    if c == "10" and int(k) >= 162:
        return f"10_{int(k) + 1}"
    return ki_name


def pd_text(pd: str) -> str:
    tuples = json.loads(pd)
    return " ".join("X(" + ",".join(str(v) for v in t) + ")" for t in tuples)


def parse_int(value: str):
    value = value.strip()
    if not value or value.startswith("["):
        return None
    return int(value)


def record(row: dict, name: str) -> dict:
    fib = {"Y": True, "N": False}.get(row["fibered"].strip())
    notes = []
    u_raw = row["unknotting_number"].strip()
    if u_raw.startswith("["):
        notes.append(f"u in {u_raw} (stored as null)")
    src = f"KnotInfo {row['name']} via database_knotinfo {version('database_knotinfo')}"
    if notes:
        src += "; " + "; ".join(notes)
    return {
        "name": name,
        "pd": pd_text(row["pd_notation"]),
        "fibered": fib,
        "u": parse_int(u_raw),
        "rank": None,
        "tunnel": parse_int(row["tunnel_number"]),
        "delta": row["alexander_polynomial"].replace(" ", "") or "1",
        "source": src,
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    rows = link_list()[2:]  # header row and the unknot
    table = []
    special = []
    for row in rows:
        cn = row["crossing_number"].strip()
        if row["name"] in SPECIAL:
            special.append(record(row, SPECIAL[row["name"]]))
        if cn.isdigit() and 3 <= int(cn) <= 10:
            table.append((int(cn), record(row, rolfsen_name(row["name"]))))

    def dump(path, recs):
        with open(path, "w") as fh:
            for r in recs:
                fh.write(json.dumps(r) + "\n")
        print(f"{path}: {len(recs)} records")

    dump(out / "knots_10.jsonl", [r for _, r in table])
    dump(out / "knots_9.jsonl", [r for c, r in table if c <= 9])
    dump(out / "knots_special.jsonl", special)


if __name__ == "__main__":
    main()
