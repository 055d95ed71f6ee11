"""Knot determinant from a checkerboard (Goeritz) matrix of a PD diagram.

Kept independent of the Fox-calculus path on purpose: it reads the raw
crossing tuples, traces faces, and takes an integer determinant with sympy.
"""
from __future__ import annotations

from sympy import Matrix

from .notation import KnotDiagram


def faces(d: KnotDiagram) -> list[list[tuple[int, int]]]:
    """Faces as cycles of corners (crossing, k), corner k lying between
    positions k and k+1 (counterclockwise) of that crossing."""
    occ: dict[int, list[tuple[int, int]]] = {}
    for ci, x in enumerate(d.crossings):
        for pos, e in enumerate(x):
            occ.setdefault(e, []).append((ci, pos))

    def across(ci, pos):
        a, b = occ[d.crossings[ci][pos]]
        return b if a == (ci, pos) else a

    seen = set()
    out = []
    for ci in range(len(d.crossings)):
        for k in range(4):
            if (ci, k) in seen:
                continue
            face = []
            cur = (ci, k)
            while cur not in seen:
                seen.add(cur)
                face.append(cur)
                # leave along position k+1, arrive at the far end of that edge,
                # then the face continues on the clockwise-previous corner there
                c, kk = cur
                nc, npos = across(c, (kk + 1) % 4)
                cur = (nc, npos)
            out.append(face)
    return out


def checkerboard(d: KnotDiagram):
    """Assign colour 0/1 to faces; corners k and k+2 at a crossing share a colour."""
    fs = faces(d)
    face_of = {corner: i for i, f in enumerate(fs) for corner in f}
    colour = {0: 0}
    stack = [0]
    while stack:
        i = stack.pop()
        for ci, k in fs[i]:
            for dk, flip in ((1, 1), (2, 0), (3, 1)):
                j = face_of[(ci, (k + dk) % 4)]
                want = colour[i] ^ flip
                if j not in colour:
                    colour[j] = want
                    stack.append(j)
                elif colour[j] != want:
                    raise ValueError("faces are not 2-colourable; diagram is not planar")
    return fs, face_of, colour


def goeritz_matrix(d: KnotDiagram, shade: int = 0) -> list[list[int]]:
    """Unreduced Goeritz matrix on the faces of colour ``shade``."""
    fs, face_of, colour = checkerboard(d)
    white = [i for i in range(len(fs)) if colour[i] == shade]
    idx = {f: n for n, f in enumerate(white)}
    g = [[0] * len(white) for _ in white]
    for ci in range(len(d.crossings)):
        # corners 0 and 2 lie counterclockwise from the under-strand to the over-strand
        if colour[face_of[(ci, 0)]] == shade:
            f1, f2, eta = face_of[(ci, 0)], face_of[(ci, 2)], 1
        else:
            f1, f2, eta = face_of[(ci, 1)], face_of[(ci, 3)], -1
        if f1 == f2:
            continue
        i, j = idx[f1], idx[f2]
        g[i][j] -= eta
        g[j][i] -= eta
        g[i][i] += eta
        g[j][j] += eta
    return g


def knot_determinant(d: KnotDiagram) -> int:
    if not d.crossings:
        return 1
    g = goeritz_matrix(d)
    if len(g) <= 1:
        return 1
    reduced = Matrix([row[1:] for row in g[1:]])
    return abs(int(reduced.det(method="bareiss")))
