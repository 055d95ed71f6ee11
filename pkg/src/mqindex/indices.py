"""Certified bounds on the Nakanishi index m(K) and the MQ index a(K).

m(K) is bounded below through elementary ideals: a module generated by k
elements has E_k = R, so a residue field killing E_k proves m(K) > k.  It is
bounded above by the column count of a reduced presentation matrix.  a(K)
then follows from m(K) <= a(K) plus the ingested knot data (unknotting
number, rank, tunnel number, fiberedness).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .fox import AlexanderData, alexander_matrix, alexander_polynomial, elementary_ideal_generators
from .laurent import (ONE, T, LaurentPoly, PolyMatrix, FieldSpec, bezout, block_diag, default_battery,
                      normalize_unit, rank_over_field, smith_reduce_heuristic, specialize)
from .notation import BraidWord, braid_closure, wirtinger_presentation


class InconsistentBounds(ValueError):
    pass


@dataclass(frozen=True)
class IdealStatus:
    """Outcome of testing whether generators span the unit ideal.

    ``full`` carries coefficients c with sum(c[i] * g[i]) a unit;
    ``not_full`` carries a field killing every generator.
    """

    verdict: str
    witness: tuple[LaurentPoly, ...] | None = None
    certificate: FieldSpec | None = None

    def __str__(self):
        if self.verdict == "NotFull":
            return f"NotFull at {self.certificate}"
        return self.verdict


_MIX = (ONE, -ONE, T, -T, T ** -1, -(T ** -1))


def ideal_full_status(gens: Sequence[LaurentPoly], battery: Sequence[FieldSpec]) -> IdealStatus:
    gens = [LaurentPoly.coerce(g) for g in gens]
    n = len(gens)

    def coeffs(pairs):
        c = [LaurentPoly()] * n
        for i, x in pairs:
            c[i] = c[i] + x
        return tuple(c)

    for i, g in enumerate(gens):
        if g.is_unit():
            return _verified(gens, battery, IdealStatus("Full", coeffs([(i, g.unit_inverse())])))
    for spec in battery:
        if all(not any(specialize(g, spec)) for g in gens):
            return IdealStatus("NotFull", certificate=spec)
    distinct = {}
    for i, g in enumerate(gens):
        if not g.is_zero():
            distinct.setdefault(normalize_unit(g), i)
    idx = list(distinct.values())
    for x, i in enumerate(idx):
        for j in idx[x + 1:]:
            uv = bezout(gens[i], gens[j])
            if uv is not None:
                return _verified(gens, battery, IdealStatus("Full", coeffs([(i, uv[0]), (j, uv[1])])))
    # (g_i + s*g_k, g_j) for a small unit s: catches ideals with no coprime pair
    for i in idx:
        for k in idx:
            if k == i:
                continue
            for s in _MIX:
                h = gens[i] + s * gens[k]
                for j in idx:
                    if j in (i, k):
                        continue
                    uv = bezout(h, gens[j])
                    if uv is not None:
                        u, v = uv
                        return _verified(gens, battery,
                                         IdealStatus("Full", coeffs([(i, u), (k, u * s), (j, v)])))
    return IdealStatus("Unknown")


def _verified(gens, battery, status: IdealStatus) -> IdealStatus:
    combo = LaurentPoly()
    for c, g in zip(status.witness, gens):
        combo = combo + c * g
    if not combo.is_unit():
        raise AssertionError(f"witness combination is not a unit: {combo}")
    for spec in battery:
        if all(not any(specialize(g, spec)) for g in gens):
            raise AssertionError(f"generators both contain a unit and vanish at {spec}")
    return status


@dataclass(frozen=True)
class IndexBounds:
    lower: int
    upper: int | None = None  # None: no upper bound known

    def __post_init__(self):
        if self.lower < 0:
            raise InconsistentBounds("lower bound must be non-negative")
        if self.upper is not None and self.upper < self.lower:
            raise InconsistentBounds(f"lower {self.lower} exceeds upper {self.upper}")

    @property
    def tight(self) -> bool:
        return self.upper == self.lower

    def __str__(self):
        if self.tight:
            return str(self.lower)
        return f"[{self.lower}, {'inf' if self.upper is None else self.upper}]"


@dataclass
class NakanishiCertificate:
    """How a Nakanishi interval was obtained, for reports and audits."""

    bounds: IndexBounds
    reduced: PolyMatrix
    statuses: list[IdealStatus] = field(default_factory=list)


def nakanishi_certificate(a: AlexanderData | PolyMatrix,
                          battery: Sequence[FieldSpec] | None = None) -> NakanishiCertificate:
    pres = a.presentation_matrix if isinstance(a, AlexanderData) else a
    reduced = smith_reduce_heuristic(pres)
    g = reduced.cols
    if battery is None:
        delta = _order_ideal_generator(reduced)
        battery = default_battery(delta) if not delta.is_zero() else []
    statuses = [ideal_full_status(elementary_ideal_generators(reduced, k), battery) for k in range(g)]
    not_full = [k for k, s in enumerate(statuses) if s.verdict == "NotFull"]
    lower = not_full[-1] + 1 if not_full else 0
    upper = g
    if statuses and statuses[0].verdict == "Full":
        # E_0 = R forces the module to vanish
        upper = 0
    # the chain E_0 <= E_1 <= ... gives an independent lower bound from ranks
    for spec in battery:
        lower_from_rank = g - rank_over_field(reduced, spec)
        if lower_from_rank > lower:
            raise AssertionError(f"rank deficiency at {spec} not mirrored by ideal certificates")
    if lower > upper:
        raise AssertionError(f"Nakanishi bounds crossed: {lower} > {upper}")
    return NakanishiCertificate(IndexBounds(lower, upper), reduced, statuses)


def nakanishi_bounds(a: AlexanderData | PolyMatrix, battery: Sequence[FieldSpec] | None = None) -> IndexBounds:
    return nakanishi_certificate(a, battery).bounds


def _order_ideal_generator(m: PolyMatrix) -> LaurentPoly:
    """gcd of maximal minors of a reduced presentation (the Alexander polynomial)."""
    from .laurent import minors, poly_gcd

    if m.cols == 0:
        return LaurentPoly.const(1)
    if m.rows < m.cols:
        return LaurentPoly()
    return poly_gcd(minors(m, m.cols))


# -- the MQ index --------------------------------------------------------------------

RULE_EQ11 = "Eq1.1"            # m <= a
RULE_NONTRIVIAL = "nontriviality"  # a = 0 iff trivial knot
RULE_UNKNOTTING = "Prop2.1(1)"  # a <= u
RULE_RANK = "Prop2.1(4)"        # a <= r - 1 <= t
RULE_HINT = "hint"              # a <= 2 for prime knots up to 10 crossings
RULE_FIBERED = "Cor1.2"         # fibered: a = m


def mq_bounds(m: IndexBounds, fibered: bool | None = None, u: int | None = None,
              r: int | None = None, nontrivial: bool = True, hint_upper: int | None = None,
              tunnel: int | None = None) -> tuple[IndexBounds, list[str]]:
    """Bounds on a(K), applying rules in a fixed order; only rules that
    tighten an end are recorded in the trace."""
    lower, upper = 0, None
    trace: list[str] = []

    def tighten(rule, lo=None, hi=None):
        nonlocal lower, upper
        changed = False
        if lo is not None and lo > lower:
            lower, changed = lo, True
        if hi is not None and (upper is None or hi < upper):
            upper, changed = hi, True
        if changed:
            trace.append(rule)
        if upper is not None and lower > upper:
            raise InconsistentBounds(f"rule {rule} gives a in [{lower}, {upper}]")

    if not nontrivial and m.lower > 0:
        raise InconsistentBounds("trivial knot with a nontrivial Alexander module")
    tighten(RULE_EQ11, lo=m.lower)
    if nontrivial:
        tighten(RULE_NONTRIVIAL, lo=1)
    else:
        tighten(RULE_NONTRIVIAL, hi=0)
    if u is not None:
        if nontrivial and u < 1:
            raise InconsistentBounds("nontrivial knot with unknotting number 0")
        tighten(RULE_UNKNOTTING, hi=u)
    rank_caps = [x for x in (r - 1 if r is not None else None, tunnel) if x is not None]
    if rank_caps:
        tighten(RULE_RANK, hi=min(rank_caps))
    if hint_upper is not None:
        tighten(RULE_HINT, hi=hint_upper)
    if fibered:
        tighten(RULE_FIBERED, lo=m.lower, hi=m.upper)
    return IndexBounds(lower, upper), trace


@dataclass
class IndexReport:
    name: str
    delta: LaurentPoly | None
    m_bounds: IndexBounds | None
    a_bounds: IndexBounds | None
    fibered: bool | None = None
    rule_trace: list[str] = field(default_factory=list)
    error: str | None = None

    def to_record(self) -> dict:
        rec = {
            "name": self.name,
            "delta": None if self.delta is None else str(self.delta),
            "m_lower": self.m_bounds.lower if self.m_bounds else None,
            "m_upper": self.m_bounds.upper if self.m_bounds else None,
            "a_lower": self.a_bounds.lower if self.a_bounds else None,
            "a_upper": self.a_bounds.upper if self.a_bounds else None,
            "fibered": self.fibered,
            "rules": list(self.rule_trace),
        }
        if self.error:
            rec["error"] = self.error
        return rec


# -- connected sums and the (2, p) torus family -------------------------------------------

def connected_sum_matrix(a1: AlexanderData, a2: AlexanderData) -> AlexanderData:
    """Alexander data of K1 # K2: the two meridian columns merge into one,
    so the presentation matrix is block diagonal."""
    def kept_and_meridian(a: AlexanderData):
        rows = a.full_matrix.to_rows()
        j = a.deleted_column
        return [r[:j] + r[j + 1:] for r in rows], [r[j] for r in rows]

    k1, m1 = kept_and_meridian(a1)
    k2, m2 = kept_and_meridian(a2)
    c1, c2 = a1.full_matrix.cols - 1, a2.full_matrix.cols - 1
    rows = [r + [LaurentPoly()] * c2 + [m] for r, m in zip(k1, m1)]
    rows += [[LaurentPoly()] * c1 + r + [m] for r, m in zip(k2, m2)]
    full = PolyMatrix.from_rows(rows, c1 + c2 + 1)
    data = AlexanderData.from_full(full)
    assert data.presentation_matrix == block_diag(a1.presentation_matrix, a2.presentation_matrix)
    return data


def _check_torus_parameter(p: int) -> None:
    if p % 2 == 0 or abs(p) < 3:
        raise ValueError(f"(2, p) torus knots need odd p with |p| >= 3, got {p}")


def torus_2p_alexander(p: int) -> LaurentPoly:
    """(t^|p| + 1)/(t + 1) = t^(|p|-1) - t^(|p|-2) + ... + 1."""
    _check_torus_parameter(p)
    n = abs(p)
    return LaurentPoly(0, tuple((-1) ** k for k in range(n)))


def torus_2p_data(p: int) -> AlexanderData:
    """Alexander data of T(2, p) computed from the closure of sigma_1^p."""
    _check_torus_parameter(p)
    sign = 1 if p > 0 else -1
    d = braid_closure(BraidWord(2, (sign,) * abs(p)), name=f"T(2,{p})")
    return alexander_matrix(wirtinger_presentation(d))


def kpq_classify(p: int, q: int, battery: Sequence[FieldSpec] | None = None) -> IndexReport:
    """m and a for the connected sum of the (2, p) and (2, q) torus knots.

    Both summands are fibered, hence so is the sum; this is ingested, not
    computed, and recorded as such in the trace.
    """
    _check_torus_parameter(p)
    _check_torus_parameter(q)
    data = connected_sum_matrix(torus_2p_data(p), torus_2p_data(q))
    delta = alexander_polynomial(data)
    m = nakanishi_bounds(data, battery)
    a, trace = mq_bounds(m, fibered=True, nontrivial=True)
    return IndexReport(f"T(2,{p})#T(2,{q})", delta, m, a, True, ["fibered:ingested"] + trace)


def fibered_necessary(delta: LaurentPoly) -> bool:
    """Monic screen: a fibered knot has leading and constant coefficients +-1."""
    delta = LaurentPoly.coerce(delta)
    if delta.is_zero():
        return False
    return abs(delta.leading()) == 1 and abs(delta.trailing()) == 1


def gcd_rule(p: int, q: int) -> int:
    """Expected m = a for K_{p,q}: 1 when gcd(|p|, |q|) == 1, else 2."""
    return 1 if math.gcd(abs(p), abs(q)) == 1 else 2
