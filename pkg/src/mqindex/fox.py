"""Fox free differential calculus and Alexander invariants of knot groups."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .freegroup import GroupPresentation, Word, word_product
from .laurent import (ONE, LaurentPoly, MultiLaurent, PolyMatrix, minors, normalize_unit,
                      poly_gcd, smith_invariants)


class GroupRingElement:
    """Finite Z-linear combination of reduced words, i.e. an element of Z[F]."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Word, int] | None = None):
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def of(cls, w: Word, c: int = 1) -> "GroupRingElement":
        return cls({w: c})

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return GroupRingElement(out)

    def __neg__(self):
        return GroupRingElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "GroupRingElement") -> "GroupRingElement":
        out: dict[Word, int] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = word_product(w1, w2)
                out[w] = out.get(w, 0) + c1 * c2
        return GroupRingElement(out)

    def left_mul(self, w: Word) -> "GroupRingElement":
        return GroupRingElement.of(w) * self

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, GroupRingElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        items = sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0].letters))
        return "GroupRingElement(" + " + ".join(f"{c}*[{w}]" for w, c in items) + ")"


def fox_derivative(w: Word, x: int) -> GroupRingElement:
    """d w / d x_x, by the product rule applied letter by letter."""
    out: dict[Word, int] = {}
    prefix: list[int] = []
    for letter in w.letters:
        if letter == x:
            key = Word(tuple(prefix))
            out[key] = out.get(key, 0) + 1
        elif letter == -x:
            key = Word(tuple(prefix) + (letter,))
            out[key] = out.get(key, 0) - 1
        prefix.append(letter)
    return GroupRingElement(out)


def abelianize_knot(e: GroupRingElement) -> LaurentPoly:
    """Send every generator to t."""
    terms: dict[int, int] = {}
    for w, c in e.terms.items():
        k = sum(1 if x > 0 else -1 for x in w.letters)
        terms[k] = terms.get(k, 0) + c
    return LaurentPoly.from_dict(terms)


def abelianize_multi(e: GroupRingElement, images: Sequence[tuple[int, ...]]) -> MultiLaurent:
    """Send generator j+1 to the monomial with exponent vector images[j]."""
    nvars = len(images[0]) if images else 0
    out: dict[tuple[int, ...], int] = {}
    for w, c in e.terms.items():
        exps = [0] * nvars
        for x in w.letters:
            s = 1 if x > 0 else -1
            for i, v in enumerate(images[abs(x) - 1]):
                exps[i] += s * v
        key = tuple(exps)
        out[key] = out.get(key, 0) + c
    return MultiLaurent(out)


class NotAKnotGroup(ValueError):
    pass


def check_knot_group(p: GroupPresentation) -> None:
    """Abelianization must be Z with every generator mapping to the same class."""
    mat = p.exponent_matrix()
    if any(sum(row) != 0 for row in mat):
        raise NotAKnotGroup("some relator has nonzero total exponent sum")
    n = p.generator_count
    if not mat:
        if n != 1:
            raise NotAKnotGroup(f"free group of rank {n} is not a knot group")
        return
    factors, nullity = smith_invariants(mat)
    if nullity != 1 or any(d != 1 for d in factors):
        raise NotAKnotGroup(f"abelianization is Z^{nullity} + torsion {[d for d in factors if d != 1]}")


@dataclass(frozen=True)
class AlexanderData:
    full_matrix: PolyMatrix
    deleted_column: int
    presentation_matrix: PolyMatrix

    @classmethod
    def from_full(cls, full: PolyMatrix, deleted_column: int | None = None) -> "AlexanderData":
        if full.cols == 0:
            raise ValueError("full matrix needs at least one column")
        j = full.cols - 1 if deleted_column is None else deleted_column
        return cls(full, j, full.delete_column(j))

    @property
    def generator_count(self) -> int:
        return self.full_matrix.cols


def alexander_matrix(p: GroupPresentation, deleted_column: int | None = None) -> AlexanderData:
    check_knot_group(p)
    rows = [[abelianize_knot(fox_derivative(r, j)) for j in range(1, p.generator_count + 1)]
            for r in p.relators]
    full = PolyMatrix.from_rows(rows, p.generator_count)
    return AlexanderData.from_full(full, deleted_column)


def alexander_polynomial(a: AlexanderData) -> LaurentPoly:
    m = a.presentation_matrix
    size = m.cols
    if size == 0:
        return ONE
    if m.rows < size:
        return LaurentPoly()
    return normalize_unit(poly_gcd(minors(m, size)))


def elementary_ideal_generators(a: AlexanderData | PolyMatrix, k: int) -> list[LaurentPoly]:
    """Generators of E_k: the (g-k)-minors of a presentation with g generators."""
    if k < 0:
        raise ValueError("k must be non-negative")
    m = a.presentation_matrix if isinstance(a, AlexanderData) else a
    size = m.cols - k
    if size <= 0:
        return [ONE]
    if size > m.rows:
        return [LaurentPoly()]
    return minors(m, size)


def trefoil_presentation() -> GroupPresentation:
    """<x, y | x y x y^-1 x^-1 y^-1>."""
    return GroupPresentation(2, (Word((1, 2, 1, -2, -1, -2)),), ("x", "y"))


def unknot_presentation() -> GroupPresentation:
    return GroupPresentation(1, (), ("x",))

