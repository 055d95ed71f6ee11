"""Command-line entry point: ``mqindex <subcommand> ...``.

Exit codes: 0 success, 1 computational mismatch, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import random
import sys
import time
from dataclasses import dataclass, field

from .fox import NotAKnotGroup, alexander_matrix, alexander_polynomial, check_knot_group
from .freegroup import (DerivedDepth, check_lemma_instance, derived_depth, format_word, parse_word,
                        random_chain, random_lemma_instance)
from .indices import (IndexReport, InconsistentBounds, gcd_rule, kpq_classify, mq_bounds,
                      nakanishi_certificate)
from .laurent import default_battery
from .notation import DiagramError, parse_braid, parse_pd, wirtinger_presentation
from .tables import DatasetError, load_dataset, report_emit, reproduce_section4, run_pipeline

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2
KPQ_VALUES = (-9, -7, -5, -3, 3, 5, 7, 9)


class UsageError(Exception):
    pass


@dataclass
class Config:
    subcommand: str
    pd: str | None = None
    braid: str | None = None
    dataset: list[str] = field(default_factory=list)
    primes: tuple[int, ...] | None = None
    seed: int = 0
    iters: int = 1000
    depth: int = 2
    word: str | None = None
    fmt: str = "text"
    out: str | None = None

    def __post_init__(self):
        if self.iters <= 0:
            raise UsageError("--iters must be positive")
        if self.seed < 0:
            raise UsageError("--seed must be non-negative")
        if self.depth <= 0:
            raise UsageError("--depth must be positive")


def _primes(text: str) -> tuple[int, ...]:
    try:
        ps = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad prime list {text!r}") from None
    if not ps or any(p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)) for p in ps):
        raise argparse.ArgumentTypeError(f"not a list of primes: {text!r}")
    return ps


def _tristate(text: str) -> bool | None:
    v = text.lower()
    if v in ("yes", "true", "1", "y"):
        return True
    if v in ("no", "false", "0", "n"):
        return False
    if v in ("unknown", "none", "null"):
        return None
    raise argparse.ArgumentTypeError(f"expected yes/no/unknown, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mqindex", description="Alexander invariants, Nakanishi and MQ index bounds.")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    def knot_input(p):
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--pd", help='PD code, e.g. "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"')
        g.add_argument("--braid", help='braid word, e.g. "braid(3; 1 -2 1 -2)"')

    def output(p, default="text"):
        p.add_argument("--format", dest="fmt", choices=("json", "csv", "text"), default=default)
        p.add_argument("--out", help="write to this file instead of stdout")

    p = sub.add_parser("parse", help="parse a diagram and show its Wirtinger presentation")
    knot_input(p)

    p = sub.add_parser("alexander", help="Alexander polynomial")
    knot_input(p)

    p = sub.add_parser("nakanishi", help="certified Nakanishi index bounds")
    knot_input(p)
    p.add_argument("--primes", type=_primes)

    p = sub.add_parser("mq", help="MQ index bounds from m and knot data")
    knot_input(p)
    p.add_argument("--primes", type=_primes)
    p.add_argument("--fibered", type=_tristate, default=None)
    p.add_argument("--u", type=int, help="unknotting number")
    p.add_argument("--rank", type=int, help="rank of the knot group")
    p.add_argument("--tunnel", type=int, help="tunnel number")
    p.add_argument("--hint-upper", type=int)
    p.add_argument("--trivial", action="store_true", help="declare the knot trivial")
    output(p)

    p = sub.add_parser("kpq", help="T(2,p) # T(2,q); the full +-3..+-9 grid when p, q are omitted")
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--primes", type=_primes)
    output(p)

    p = sub.add_parser("lemma-check", help="random instances of the commutator witness identity")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iters", type=int, default=1000)
    p.add_argument("--chains", type=int, default=0, help="also test this many 3-level splitting chains")

    p = sub.add_parser("derived-depth", help="derived-series depth of a free-group word")
    p.add_argument("--word", required=True, help='e.g. "[[x,y],[x,z]]"')
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--rank", type=int, help="free group rank (default: letters used)")

    for name, help_ in (("section4", "classify the 8-10 crossing table against the expected lists"),
                        ("emit", "run the pipeline over datasets and write reports")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--dataset", action="append", required=True, help="JSONL file (repeatable)")
        p.add_argument("--primes", type=_primes)
        p.add_argument("--workers", type=int, default=1)
        output(p, "text" if name == "section4" else "json")
    return ap


def _diagram(args):
    try:
        if args.pd is not None:
            return parse_pd(args.pd)
        return parse_braid(args.braid)
    except DiagramError as exc:
        raise UsageError(str(exc)) from None


def _write(args, data: bytes) -> None:
    if getattr(args, "out", None):
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data.decode())


def cmd_parse(args) -> int:
    d = _diagram(args)
    pres = wirtinger_presentation(d)
    try:
        check_knot_group(pres)
    except NotAKnotGroup as exc:
        raise UsageError(str(exc)) from None
    print(f"crossings: {d.crossing_count}")
    print(f"writhe: {d.writhe()}")
    print(f"pd: {d}")
    print(f"generators: {', '.join(pres.generator_names)}")
    for i, r in enumerate(pres.relators, 1):
        print(f"r{i} = {format_word(r, pres.generator_names)}")
    return EXIT_OK


def cmd_alexander(args) -> int:
    d = _diagram(args)
    print(alexander_polynomial(alexander_matrix(wirtinger_presentation(d))))
    return EXIT_OK


def cmd_nakanishi(args) -> int:
    d = _diagram(args)
    data = alexander_matrix(wirtinger_presentation(d))
    delta = alexander_polynomial(data)
    battery = default_battery(delta, args.primes) if args.primes else None
    cert = nakanishi_certificate(data, battery)
    print(f"m = {cert.bounds}")
    for k, status in enumerate(cert.statuses):
        print(f"E_{k}: {status}")
    return EXIT_OK


def cmd_mq(args) -> int:
    d = _diagram(args)
    data = alexander_matrix(wirtinger_presentation(d))
    delta = alexander_polynomial(data)
    battery = default_battery(delta, args.primes) if args.primes else None
    m = nakanishi_certificate(data, battery).bounds
    try:
        a, trace = mq_bounds(m, fibered=args.fibered, u=args.u, r=args.rank, nontrivial=not args.trivial,
                             hint_upper=args.hint_upper, tunnel=args.tunnel)
    except InconsistentBounds as exc:
        raise UsageError(f"inconsistent knot data: {exc}") from None
    _write(args, report_emit(IndexReport(d.name or "input", delta, m, a, args.fibered, trace), args.fmt))
    return EXIT_OK


def cmd_kpq(args) -> int:
    if (args.p is None) != (args.q is None):
        raise UsageError("give both --p and --q, or neither")
    pairs = [(args.p, args.q)] if args.p is not None else [(p, q) for p in KPQ_VALUES for q in KPQ_VALUES]
    reports, bad = [], 0
    for p, q in pairs:
        try:
            battery = None
            if args.primes:
                from .indices import torus_2p_alexander
                battery = default_battery(torus_2p_alexander(p) * torus_2p_alexander(q), args.primes)
            rep = kpq_classify(p, q, battery)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        want = gcd_rule(p, q)
        if not (rep.m_bounds.tight and rep.a_bounds.tight and rep.m_bounds.lower == want == rep.a_bounds.lower):
            bad += 1
            print(f"MISMATCH {rep.name}: expected m = a = {want}", file=sys.stderr)
        reports.append(rep)
    _write(args, report_emit(reports[0] if len(reports) == 1 else reports, args.fmt))
    return EXIT_MISMATCH if bad else EXIT_OK


def cmd_lemma_check(args) -> int:
    rng = random.Random(args.seed)
    start = time.perf_counter()
    passed = sum(check_lemma_instance(*random_lemma_instance(rng)) for _ in range(args.iters))
    print(f"lemma witness: {passed}/{args.iters} passed ({time.perf_counter() - start:.2f} s)")
    ok = passed == args.iters
    if args.chains:
        chains = sum(random_chain(rng).holds() for _ in range(args.chains))
        print(f"splitting chains: {chains}/{args.chains} passed")
        ok = ok and chains == args.chains
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_derived_depth(args) -> int:
    try:
        w, names = parse_word(args.word)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rank = args.rank if args.rank is not None else max(len(names), 1)
    try:
        verdict: DerivedDepth = derived_depth(w, rank, args.depth)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(f"{format_word(w, names)}: depth {verdict}")
    return EXIT_OK


def _load(args):
    records = []
    try:
        for path in args.dataset:
            records.extend(load_dataset(path))
    except (OSError, DatasetError) as exc:
        raise UsageError(str(exc)) from None
    names = [r.name for r in records]
    if len(names) != len(set(names)):
        raise UsageError("duplicate knot names across datasets")
    return records


def cmd_section4(args) -> int:
    reports = run_pipeline(_load(args), args.primes, workers=args.workers)
    s4 = reproduce_section4(reports)
    _write(args, report_emit(s4, args.fmt))
    return EXIT_MISMATCH if s4.mismatches else EXIT_OK


def cmd_emit(args) -> int:
    reports = run_pipeline(_load(args), args.primes, workers=args.workers)
    _write(args, report_emit(reports, args.fmt))
    return EXIT_MISMATCH if any(r.error for r in reports) else EXIT_OK


COMMANDS = {
    "parse": cmd_parse,
    "alexander": cmd_alexander,
    "nakanishi": cmd_nakanishi,
    "mq": cmd_mq,
    "kpq": cmd_kpq,
    "lemma-check": cmd_lemma_check,
    "derived-depth": cmd_derived_depth,
    "section4": cmd_section4,
    "emit": cmd_emit,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        Config(args.subcommand, pd=getattr(args, "pd", None), braid=getattr(args, "braid", None),
               dataset=getattr(args, "dataset", None) or [], primes=getattr(args, "primes", None),
               seed=getattr(args, "seed", 0), iters=getattr(args, "iters", 1), depth=getattr(args, "depth", 1),
               word=getattr(args, "word", None), fmt=getattr(args, "fmt", "text"), out=getattr(args, "out", None))
        return COMMANDS[args.subcommand](args)
    except UsageError as exc:
        print(f"mqindex {args.subcommand}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
