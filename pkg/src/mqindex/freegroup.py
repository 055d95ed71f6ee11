"""Free group words, the commutator witness construction, and derived depth.

Words are stored as tuples of signed generator indices: ``3`` is x_3 and
``-3`` its inverse.  Every Word is freely reduced on construction.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .laurent import MultiLaurent


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for x in letters:
        if x == 0:
            raise ValueError("generator index 0 is not allowed")
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


@dataclass(frozen=True)
class Word:
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", free_reduce(self.letters))

    @classmethod
    def gen(cls, i: int, sign: int = 1) -> "Word":
        return cls((i * sign,))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "Word":
        return cls(tuple(g * s for g, s in pairs))

    def pairs(self) -> list[tuple[int, int]]:
        return [(abs(x), 1 if x > 0 else -1) for x in self.letters]

    def __len__(self):
        return len(self.letters)

    def __bool__(self):
        return bool(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return word_product(self, other)

    def __invert__(self) -> "Word":
        return word_inverse(self)

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else ~self
        return Word(base.letters * abs(n))

    def generators(self) -> set[int]:
        return {abs(x) for x in self.letters}

    def exponent_sums(self, rank: int | None = None) -> list[int]:
        rank = rank if rank is not None else max(self.generators(), default=0)
        sums = [0] * rank
        for x in self.letters:
            sums[abs(x) - 1] += 1 if x > 0 else -1
        return sums

    def __str__(self):
        return format_word(self)


EMPTY = Word()


def word_product(a: Word, b: Word) -> Word:
    # both halves are reduced, so cancellation only happens at the seam
    x, y = a.letters, b.letters
    k = 0
    while k < len(x) and k < len(y) and x[-1 - k] == -y[k]:
        k += 1
    return Word(x[:len(x) - k] + y[k:])


def word_inverse(w: Word) -> Word:
    return Word(tuple(-x for x in reversed(w.letters)))


def commutator(a: Word, b: Word) -> Word:
    """[a, b] = a^-1 b^-1 a b."""
    return Word(word_inverse(a).letters + word_inverse(b).letters + a.letters + b.letters)


def conjugate(y: Word, g: Word) -> Word:
    """g^-1 y g."""
    return Word(word_inverse(g).letters + y.letters + g.letters)


def word_product_all(words: Iterable[Word]) -> Word:
    letters: list[int] = []
    for w in words:
        letters.extend(w.letters)
    return Word(tuple(letters))


def kill_generators(w: Word, killed: Iterable[int]) -> Word:
    """Image of w under the retraction sending each killed generator to 1."""
    killed = set(killed)
    return Word(tuple(x for x in w.letters if abs(x) not in killed))


# -- text syntax --------------------------------------------------------------

DEFAULT_NAMES = "abcdefghijklmnopqrstuvwxyz"


def format_word(w: Word, names: str | Sequence[str] = DEFAULT_NAMES) -> str:
    if not w.letters:
        return "1"
    out = []
    for x in w.letters:
        g = abs(x)
        name = names[g - 1] if g <= len(names) else f"x{g}"
        out.append(name if x > 0 else f"{name}^-1")
    return " ".join(out)


_TOKEN = re.compile(r"\s*(\^\s*-?\d+|[A-Za-z]|\[|\]|,|\(|\)|1)")


def parse_word(text: str, names: str | None = None) -> tuple[Word, str]:
    """Parse letters with ``^-1``/``^n`` powers or uppercase inverses, and
    ``[u,v]`` commutators (nestable) and parenthesised groups.

    Letters map to generator indices by position in ``names``; when
    ``names`` is omitted, the distinct lowercase letters in sorted order are
    used.  Returns the word and the name string used.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"unexpected character in word {text!r} at {pos}")
        tokens.append(m.group(1).replace(" ", ""))
        pos = m.end()
    if names is None:
        names = "".join(sorted({t.lower() for t in tokens if t.isalpha()}))
    index = {c: i + 1 for i, c in enumerate(names)}
    parser = _WordParser(tokens, index)
    w = parser.sequence()
    if parser.i != len(tokens):
        raise ValueError(f"unbalanced word text {text!r}")
    return w, names


class _WordParser:
    def __init__(self, tokens, index):
        self.tokens, self.index, self.i = tokens, index, 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"expected {expected!r}, found {tok!r}")
        self.i += 1
        return tok

    def sequence(self) -> Word:
        out = EMPTY
        while self.peek() not in (None, "]", ",", ")"):
            out = out * self.factor()
        return out

    def factor(self) -> Word:
        tok = self.take()
        if tok == "[":
            a = self.sequence()
            self.take(",")
            b = self.sequence()
            self.take("]")
            base = commutator(a, b)
        elif tok == "(":
            base = self.sequence()
            self.take(")")
        elif tok == "1":
            base = EMPTY
        elif tok.isalpha():
            g = self.index.get(tok.lower())
            if g is None:
                raise ValueError(f"letter {tok!r} not among generator names")
            base = Word.gen(g, -1 if tok.isupper() else 1)
        else:
            raise ValueError(f"unexpected token {tok!r}")
        if self.peek() is not None and self.peek().startswith("^"):
            base = base ** int(self.take()[1:])
        return base


# -- presentations ----------------------------------------------------------------

@dataclass(frozen=True)
class GroupPresentation:
    generator_count: int
    relators: tuple[Word, ...] = ()
    generator_names: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.generator_count < 1:
            raise ValueError("a presentation needs at least one generator")
        rels = tuple(r if isinstance(r, Word) else Word(tuple(r)) for r in self.relators)
        for r in rels:
            if any(abs(x) > self.generator_count for x in r.letters):
                raise ValueError(f"relator {r.letters} uses a generator out of range")
        object.__setattr__(self, "relators", rels)

    def exponent_matrix(self) -> list[list[int]]:
        return [r.exponent_sums(self.generator_count) for r in self.relators]

    def __str__(self):
        names = self.generator_names or tuple(f"x{i}" for i in range(1, self.generator_count + 1))
        rels = ", ".join(format_word(r, names) for r in self.relators)
        return f"< {', '.join(names)} | {rels} >"


# -- the commutator rewriting witness ----------------------------------------------

@dataclass(frozen=True)
class WitnessProduct:
    """prod_j g_j^-1 y_{i_j}^{e_j} g_j over a designated tuple Y."""

    factors: tuple[tuple[Word, int, int], ...]

    def evaluate(self, ys: Sequence[Word]) -> Word:
        parts = []
        for g, sign, i in self.factors:
            y = ys[i] if sign > 0 else word_inverse(ys[i])
            parts.append(conjugate(y, g))
        return word_product_all(parts)


def lemma_witness(a_next: Word, b_next: Word, c: Word, d: Word) -> tuple[Word, WitnessProduct]:
    """Element g with [c a_next, d b_next] = g [a_next, b_next].

    g = a'^-1 (c^-1 (b'^-1 (d^-1 c (a' d a'^-1)) b')) a', returned together
    with its expansion as a product of conjugates of c^{+-1} and d^{+-1}
    (Y = (c, d), indices 0 and 1).
    """
    a, b = a_next, b_next
    inner = word_product_all([~d, c, a, d, ~a])
    middle = word_product_all([~c, ~b, inner, b])
    g = word_product_all([~a, middle, a])
    ba = b * a
    decomposition = WitnessProduct((
        (a, -1, 0),
        (ba, -1, 1),
        (ba, 1, 0),
        (word_product_all([~a, b, a]), 1, 1),
    ))
    return g, decomposition


@dataclass
class SplittingChain:
    """[a_0, b_0] rewritten through levels a_i = c_i a_{i+1}, b_i = d_i b_{i+1}."""

    a: list[Word]
    b: list[Word]
    c: list[Word]
    d: list[Word]
    witnesses: list[Word] = field(default_factory=list)

    @classmethod
    def build(cls, a_last: Word, b_last: Word, cs: Sequence[Word], ds: Sequence[Word]) -> "SplittingChain":
        levels = len(cs)
        a = [EMPTY] * (levels + 1)
        b = [EMPTY] * (levels + 1)
        a[levels], b[levels] = a_last, b_last
        for i in range(levels - 1, -1, -1):
            a[i] = cs[i] * a[i + 1]
            b[i] = ds[i] * b[i + 1]
        chain = cls(a, b, list(cs), list(ds))
        chain.witnesses = [lemma_witness(a[i + 1], b[i + 1], cs[i], ds[i])[0] for i in range(levels)]
        return chain

    def accumulated_witness(self) -> Word:
        return word_product_all(self.witnesses)

    def holds(self) -> bool:
        lhs = commutator(self.a[0], self.b[0])
        rhs = self.accumulated_witness() * commutator(self.a[-1], self.b[-1])
        return lhs == rhs


# -- random words -------------------------------------------------------------------

def random_word(rng: random.Random, rank: int, length: int) -> Word:
    """Uniform letters, rejecting any letter that would cancel its predecessor."""
    letters: list[int] = []
    while len(letters) < length:
        x = rng.randint(1, rank) * rng.choice((1, -1))
        if letters and letters[-1] == -x:
            continue
        letters.append(x)
    return Word(tuple(letters))


def random_y_element(rng: random.Random, ys: Sequence[int], rank: int, factors: int,
                     conj_len: int = 3) -> tuple[Word, WitnessProduct]:
    """Random element of the normal closure of generators ``ys``, with certificate."""
    facs = []
    for _ in range(factors):
        g = random_word(rng, rank, rng.randint(0, conj_len))
        facs.append((g, rng.choice((1, -1)), rng.randrange(len(ys))))
    cert = WitnessProduct(tuple(facs))
    return cert.evaluate([Word.gen(y) for y in ys]), cert


def random_derived_element(rng: random.Random, rank: int, depth: int, base_len: int = 2) -> Word:
    """A nested commutator lying in D^(depth) of the free group."""
    if depth == 0:
        return random_word(rng, rank, base_len)
    return commutator(random_derived_element(rng, rank, depth - 1, base_len),
                      random_derived_element(rng, rank, depth - 1, base_len))


def random_lemma_instance(rng: random.Random, rank: int = 6, max_len: int = 8) -> tuple[Word, Word, Word, Word]:
    """(a_next, b_next, c, d): independent reduced words of length <= max_len."""
    return tuple(random_word(rng, rank, rng.randint(0, max_len)) for _ in range(4))


def check_lemma_instance(a_next: Word, b_next: Word, c: Word, d: Word) -> bool:
    """Witness identity, decomposition, and triviality after killing c and d."""
    g, cert = lemma_witness(a_next, b_next, c, d)
    if commutator(c * a_next, d * b_next) != g * commutator(a_next, b_next):
        return False
    if cert.evaluate([c, d]) != g:
        return False
    return not kill_generators(g, c.generators() | d.generators()).letters


def random_chain(rng: random.Random, levels: int = 3, rank: int = 6, max_len: int = 6) -> SplittingChain:
    a_last = random_word(rng, rank, rng.randint(0, max_len))
    b_last = random_word(rng, rank, rng.randint(0, max_len))
    cs = [random_word(rng, rank, rng.randint(0, max_len)) for _ in range(levels)]
    ds = [random_word(rng, rank, rng.randint(0, max_len)) for _ in range(levels)]
    return SplittingChain.build(a_last, b_last, cs, ds)


# -- derived depth -------------------------------------------------------------------

def abelianized_fox_row(w: Word, generator_images: Sequence[tuple[int, ...]],
                        rank: int | None = None) -> list[MultiLaurent]:
    """Fox derivatives of w pushed to Z[t_1^+-1, ..., t_r^+-1].

    ``generator_images[j]`` is the exponent vector of the monomial image of
    generator j+1.
    """
    from .fox import abelianize_multi, fox_derivative

    rank = rank if rank is not None else len(generator_images)
    return [abelianize_multi(fox_derivative(w, j), generator_images) for j in range(1, rank + 1)]


def standard_images(rank: int) -> list[tuple[int, ...]]:
    return [tuple(1 if i == j else 0 for i in range(rank)) for j in range(rank)]


@dataclass(frozen=True)
class DerivedDepth:
    """Verdict on membership in the derived series of a free group.

    kind is ``"exact"`` (w in D^(depth) minus D^(depth+1)), ``"at_least"``
    (w in D^(depth), deeper levels not decided) or ``"trivial"``.
    """

    kind: str
    depth: int | None = None

    def __str__(self):
        if self.kind == "trivial":
            return "trivial element"
        if self.kind == "at_least":
            return f"at least {self.depth}"
        return str(self.depth)


MAGNUS_LIMIT = 2


def derived_depth(w: Word, rank: int, max_depth: int) -> DerivedDepth:
    """Depth of w in the derived series of the free group of given rank.

    Depth 1 membership is the vanishing of exponent sums; depth 2 membership
    is the vanishing of every abelianized Fox derivative (Magnus
    embedding).  Deeper levels are not decided.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be at least 1")
    if any(abs(x) > rank for x in w.letters):
        raise ValueError(f"word uses generators beyond rank {rank}")
    if not w.letters:
        return DerivedDepth("trivial")
    if any(w.exponent_sums(rank)):
        return DerivedDepth("exact", 0)
    if max_depth == 1:
        return DerivedDepth("at_least", 1)
    row = abelianized_fox_row(w, standard_images(rank), rank)
    if any(not e.is_zero() for e in row):
        return DerivedDepth("exact", 1)
    return DerivedDepth("at_least", min(max_depth, MAGNUS_LIMIT))
