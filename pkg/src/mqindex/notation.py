"""Knot diagrams from PD codes and braid words, and their Wirtinger presentations.

PD convention: each crossing ``X(a,b,c,d)`` lists its four edge labels
counterclockwise, starting at the incoming under-strand, so the under-strand
runs a -> c.  After parsing, edges are relabelled 1..2n in the order met when
walking along the knot, hence c == a + 1 (mod 2n) at every crossing.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .freegroup import GroupPresentation, Word


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class KnotDiagram:
    crossings: tuple[tuple[int, int, int, int], ...]
    arc_count: int
    name: str | None = None

    def __post_init__(self):
        check_diagram(self.crossings, self.arc_count)

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    def signs(self) -> list[int]:
        """Crossing signs; over-strand running d -> b is positive."""
        n = self.arc_count
        out = []
        for a, b, c, d in self.crossings:
            out.append(1 if b == d % n + 1 else -1)
        return out

    def writhe(self) -> int:
        return sum(self.signs())

    def pd_text(self) -> str:
        return " ".join(f"X({a},{b},{c},{d})" for a, b, c, d in self.crossings)

    def __str__(self):
        return self.pd_text() or "<0-crossing unknot>"


def check_diagram(crossings, arc_count: int) -> None:
    """Raise DiagramError unless the tuples form one oriented closed component."""
    if not crossings:
        if arc_count != 1:
            raise DiagramError("a 0-crossing diagram has exactly one arc")
        return
    if any(len(x) != 4 for x in crossings):
        raise DiagramError("every crossing needs exactly 4 labels")
    if arc_count != 2 * len(crossings):
        raise DiagramError(f"{len(crossings)} crossings need {2 * len(crossings)} arcs, got {arc_count}")
    counts: dict[int, int] = {}
    for x in crossings:
        for e in x:
            counts[e] = counts.get(e, 0) + 1
    if set(counts) != set(range(1, arc_count + 1)):
        raise DiagramError("labels must be exactly 1..arc_count")
    bad = [e for e, k in counts.items() if k != 2]
    if bad:
        raise DiagramError(f"labels {sorted(bad)} do not appear exactly twice")
    if len(_trace(crossings)) != arc_count:
        raise DiagramError("diagram has more than one component")


def _occurrences(crossings):
    occ: dict[int, list[tuple[int, int]]] = {}
    for ci, x in enumerate(crossings):
        for pos, e in enumerate(x):
            occ.setdefault(e, []).append((ci, pos))
    return occ


def _trace(crossings) -> list[int]:
    """Edge labels in the order walked from the first crossing's under-strand.

    Entering a crossing at position p leaves it at p + 2; entering at the
    outgoing under position (2) contradicts the PD convention.
    """
    occ = _occurrences(crossings)
    for e, places in occ.items():
        if len(places) != 2:
            raise DiagramError(f"label {e} appears {len(places)} times")
    start = (0, 0)
    order: list[int] = []
    ci, pos = start
    seen_entries = set()
    while True:
        if (ci, pos) in seen_entries:
            break
        seen_entries.add((ci, pos))
        if pos == 2:
            raise DiagramError(f"strand enters crossing {ci + 1} at its outgoing under position")
        out_pos = (pos + 2) % 4
        e = crossings[ci][out_pos]
        order.append(e)
        here = (ci, out_pos)
        nxt = [p for p in occ[e] if p != here]
        if not nxt:
            raise DiagramError(f"label {e} does not connect two crossing slots")
        ci, pos = nxt[0]
        if len(order) > 2 * len(crossings) + 1:
            raise DiagramError("walk did not close up")
    return order


_PD_TOKEN = re.compile(r"X\s*[\(\[]\s*([^\)\]]*)[\)\]]")


def parse_pd(text: str, name: str | None = None) -> KnotDiagram:
    """Parse ``X(1,4,2,5) X(3,6,4,1) ...`` (also ``[[1,4,2,5],...]`` lists)."""
    if text is None or not text.strip():
        raise DiagramError("empty input")
    s = text.strip()
    if s.startswith("[["):
        bodies = re.findall(r"\[([^\[\]]*)\]", s)
    else:
        rest = _PD_TOKEN.sub("", s).replace("PD", "").strip(" []\t\n,")
        if rest:
            raise DiagramError(f"unexpected text in PD code: {rest!r}")
        bodies = _PD_TOKEN.findall(s)
    if not bodies:
        raise DiagramError("no crossings found")
    crossings = []
    for body in bodies:
        try:
            labels = tuple(int(v) for v in body.replace(" ", "").split(","))
        except ValueError:
            raise DiagramError(f"non-integer label in X({body})") from None
        if len(labels) != 4:
            raise DiagramError(f"crossing X({body}) does not have 4 labels")
        if min(labels) < 0:
            raise DiagramError("labels must be non-negative integers")
        crossings.append(labels)
    return normalize_crossings(crossings, name)


def normalize_crossings(crossings, name=None) -> KnotDiagram:
    """Relabel edges 1..2n along the orientation fixed by the under-strands."""
    crossings = [tuple(x) for x in crossings]
    occ = _occurrences(crossings)
    bad = sorted(e for e, places in occ.items() if len(places) != 2)
    if bad:
        raise DiagramError(f"labels {bad} do not appear exactly twice")
    order = _trace(crossings)
    if len(order) != len(occ):
        raise DiagramError("diagram has more than one component")
    # start the walk at the smallest input label so oriented input keeps its labels
    k = order.index(min(order))
    order = order[k:] + order[:k]
    relabel = {e: i + 1 for i, e in enumerate(order)}
    new = tuple(tuple(relabel[e] for e in x) for x in crossings)
    return KnotDiagram(new, 2 * len(new), name)


# -- braids ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BraidWord:
    strand_count: int
    letters: tuple[int, ...]

    def __post_init__(self):
        if self.strand_count < 1:
            raise DiagramError("a braid needs at least one strand")
        for i in self.letters:
            if i == 0 or abs(i) >= self.strand_count:
                raise DiagramError(f"braid letter {i} out of range for {self.strand_count} strands")


_BRAID = re.compile(r"^\s*braid\s*\(\s*(\d+)\s*;\s*([-\d\s,]*)\)\s*$")


def parse_braid_word(text: str) -> BraidWord:
    m = _BRAID.match(text)
    if not m:
        raise DiagramError(f"braid text must look like 'braid(n; i1 i2 ...)', got {text!r}")
    letters = tuple(int(v) for v in m.group(2).replace(",", " ").split())
    return BraidWord(int(m.group(1)), letters)


def parse_braid(text_or_word, name: str | None = None) -> KnotDiagram:
    b = text_or_word if isinstance(text_or_word, BraidWord) else parse_braid_word(text_or_word)
    return braid_closure(b, name)


def braid_closure(b: BraidWord, name: str | None = None) -> KnotDiagram:
    """Diagram of the closure, strands drawn upward, sigma_i positive."""
    n = b.strand_count
    if not b.letters:
        if n != 1:
            raise DiagramError(f"closure of the trivial {n}-strand braid has {n} components")
        return KnotDiagram((), 1, name)
    # edge ids: current[k] is the edge leaving the last event at position k
    next_id = n
    current = list(range(n))
    bottom = list(range(n))
    crossings = []
    for letter in b.letters:
        i = abs(letter) - 1
        bl, br = current[i], current[i + 1]
        tl, tr = next_id, next_id + 1
        next_id += 2
        if letter > 0:
            crossings.append((br, tr, tl, bl))
        else:
            crossings.append((bl, br, tr, tl))
        current[i], current[i + 1] = tl, tr
    # closure identifies the top edge at position k with the bottom edge at k
    merge = {current[k]: bottom[k] for k in range(n)}
    crossings = [tuple(merge.get(e, e) for e in x) for x in crossings]
    occ = _occurrences(crossings)
    comps = _count_components(crossings, occ)
    if comps != 1:
        raise DiagramError(f"braid closure has {comps} components")
    # labels must be positive
    relabel = {e: k + 1 for k, e in enumerate(sorted(occ))}
    crossings = [tuple(relabel[e] for e in x) for x in crossings]
    return normalize_crossings(crossings, name)


def _count_components(crossings, occ) -> int:
    parent = {e: e for e in occ}

    def find(e):
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for x in crossings:
        for p, q in ((x[0], x[2]), (x[1], x[3])):
            parent[find(p)] = find(q)
    return len({find(e) for e in occ})


# -- Wirtinger presentation --------------------------------------------------------------

def wirtinger_arcs(d: KnotDiagram) -> dict[int, int]:
    """Map each edge label to its over-arc index (1-based, ordered by first edge)."""
    if not d.crossings:
        return {1: 1}
    parent = {e: e for e in range(1, d.arc_count + 1)}

    def find(e):
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for _, b, _, dd in d.crossings:
        parent[find(b)] = find(dd)
    index: dict[int, int] = {}
    out = {}
    for e in range(1, d.arc_count + 1):
        root = find(e)
        if root not in index:
            index[root] = len(index) + 1
        out[e] = index[root]
    return out


def wirtinger_presentation(d: KnotDiagram) -> GroupPresentation:
    """One generator per over-arc, one relator per crossing.

    With z the over-arc, x the incoming and y the outgoing under-arc, a
    positive crossing gives z^-1 x z y^-1 and a negative one z x z^-1 y^-1.
    """
    if not d.crossings:
        return GroupPresentation(1, (), ("x1",))
    arc = wirtinger_arcs(d)
    gens = max(arc.values())
    relators = []
    for (a, b, c, _), sign in zip(d.crossings, d.signs()):
        z, x, y = arc[b], arc[a], arc[c]
        if sign > 0:
            relators.append(Word((-z, x, z, -y)))
        else:
            relators.append(Word((z, x, -z, -y)))
    names = tuple(f"x{i}" for i in range(1, gens + 1))
    return GroupPresentation(gens, tuple(relators), names)
