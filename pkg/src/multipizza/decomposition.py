"""Slices over a whole domain: fine decompositions, merging, spans between cuts.

A :class:`Slice` carries one column (Q, mu, sign) per function.  The fine
decomposition of every piece of the domain layout is elementary for all
functions at once; :func:`merge_all` then coarsens it greedily, merging
neighbours whenever the union is again an elementary slice with a single
supporting side.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import List, Optional, Sequence

from .contact import Chooser, Column, FineSlice, Series, Triangle, contact, default_chooser
from .domain import Layout, Piece
from .puiseux.arcs import PuiseuxArc
from .puiseux.polynomial import Polynomial
from .scalars import INFINITY, AffineMap, Segment, affine_eval

LEFT, RIGHT, NONE = "left", "right", "none"
_FLIP = {LEFT: RIGHT, RIGHT: LEFT, NONE: NONE}


@dataclass(frozen=True)
class Position:
    """An arc of the domain: a series in the frame of one piece."""

    piece: int
    series: Series

    def same_as(self, other: "Position") -> bool:
        return self.piece == other.piece and contact(self.series, other.series) is INFINITY


@dataclass
class Slice:
    beta: Fraction
    left: Position
    right: Position
    columns: List[Column]
    support: str

    # left/right hold Positions during construction and PuiseuxArcs in results
    @property
    def left_arc(self) -> PuiseuxArc:
        return self.left

    @property
    def right_arc(self) -> PuiseuxArc:
        return self.right

    @property
    def Q(self) -> Segment:
        return self.columns[0].Q

    @property
    def mu(self) -> AffineMap:
        return self.columns[0].mu

    @property
    def sign(self) -> int:
        return self.columns[0].sign

    def reversed(self) -> "Slice":
        cols = [Column(c.Q.reversed(), c.mu, c.sign) for c in self.columns]
        return Slice(self.beta, self.right, self.left, cols, _FLIP[self.support])


def normalize(layout: Layout, pos: Position) -> Position:
    """Represent arcs shared by two pieces through the earlier piece."""
    n = len(layout.pieces)
    piece = layout.pieces[pos.piece]
    if contact(pos.series, piece.start) is INFINITY:
        prev = pos.piece - 1
        if prev >= 0 and layout.shared[prev]:
            return Position(prev, layout.pieces[prev].end)
    if contact(pos.series, piece.end) is INFINITY and pos.piece == n - 1 and layout.cyclic:
        return Position(0, layout.pieces[0].start)
    return pos


def arc_of(layout: Layout, pos: Position) -> PuiseuxArc:
    return pos.series.to_arc(layout.pieces[pos.piece].frame)


def lateral_key(layout: Layout):
    """Sort key comparing positions in the traversal order of the layout."""
    from functools import cmp_to_key

    def cmp(a: Position, b: Position) -> int:
        a, b = normalize(layout, a), normalize(layout, b)
        if a.piece != b.piece:
            return -1 if a.piece < b.piece else 1
        return layout.pieces[a.piece].lateral(a.series, b.series)

    return cmp_to_key(cmp)


def _piece_slices(layout: Layout, index: int, a: Series, b: Series, fs, chooser) -> List[Slice]:
    """Fine slices of piece ``index`` between a and b (a before b in traversal)."""
    piece: Piece = layout.pieces[index]
    lo, hi = (b, a) if piece.backward else (a, b)
    tri = Triangle(piece.frame, lo, hi, fs)
    out = []
    for fsl in tri.fine_slices(chooser):
        s = _from_fine(layout, index, fsl)
        out.append(s.reversed() if piece.backward else s)
    if piece.backward:
        out.reverse()
    return out


def _from_fine(layout: Layout, index: int, fsl: FineSlice) -> Slice:
    return Slice(fsl.beta, normalize(layout, Position(index, fsl.left)),
                 normalize(layout, Position(index, fsl.right)), list(fsl.columns), fsl.support)


def fine_decomposition(layout: Layout, fs: Sequence[Polynomial],
                       chooser: Chooser = default_chooser) -> List[Slice]:
    out: List[Slice] = []
    for i, piece in enumerate(layout.pieces):
        out.extend(_piece_slices(layout, i, piece.start, piece.end, fs, chooser))
    return out


def span(layout: Layout, fs: Sequence[Polynomial], p: Position, q: Position,
         chooser: Chooser = default_chooser) -> List[Slice]:
    """Fine slices between two positions, walking forward (cyclically if needed)."""
    n = len(layout.pieces)
    key = lateral_key(layout)
    p, q = normalize(layout, p), normalize(layout, q)
    out: List[Slice] = []
    i, cur, first = p.piece, p.series, True
    for _ in range(2 * n + 1):
        piece = layout.pieces[i]
        if i == q.piece and (not first or key(Position(i, cur)) < key(q)):
            if contact(cur, q.series) is not INFINITY:
                out.extend(_piece_slices(layout, i, cur, q.series, fs, chooser))
            return out
        if contact(cur, piece.end) is not INFINITY:
            out.extend(_piece_slices(layout, i, cur, piece.end, fs, chooser))
        i = (i + 1) % n
        cur = layout.pieces[i].start
        first = False
    raise ValueError("span endpoints are not in lateral order")


# ---------------------------------------------------------------------------
# merging


def _merge_column(c1: Column, c2: Column, b1: Fraction, b2: Fraction, beta: Fraction):
    """(column, support) of the union of two adjacent columns, or None."""
    if c1.sign != c2.sign or c1.Q.b != c2.Q.a:
        return None
    d1, d2 = c1.Q.direction, c2.Q.direction
    q = Segment(c1.Q.a, c2.Q.b)
    if d1 == 0 and d2 == 0:
        return Column(q, AffineMap.constant(beta), c1.sign), NONE
    if d1 == 0:
        if d2 > 0:
            return (Column(q, c2.mu, c1.sign), RIGHT) if b1 >= b2 else None
        if c2.Q.a is INFINITY:
            return None
        return (Column(q, c2.mu, c1.sign), LEFT) if affine_eval(c2.mu, c2.Q.a) <= b1 else None
    if d2 == 0:
        if d1 < 0:
            return (Column(q, c1.mu, c1.sign), LEFT) if b2 >= b1 else None
        if c1.Q.b is INFINITY:
            return None
        return (Column(q, c1.mu, c1.sign), RIGHT) if affine_eval(c1.mu, c1.Q.b) <= b2 else None
    if d1 == d2 and c1.mu == c2.mu:
        return Column(q, c1.mu, c1.sign), (RIGHT if d1 > 0 else LEFT)
    return None


def merge_pair(s1: Slice, s2: Slice) -> Optional[Slice]:
    beta = min(s1.beta, s2.beta)
    cols: List[Column] = []
    support = NONE
    for c1, c2 in zip(s1.columns, s2.columns):
        got = _merge_column(c1, c2, s1.beta, s2.beta, beta)
        if got is None:
            return None
        col, side = got
        if side != NONE:
            if support not in (NONE, side):
                return None
            support = side
        cols.append(col)
    return Slice(beta, s1.left, s2.right, cols, support)


def merge_all(slices: List[Slice], cyclic: bool = False) -> List[Slice]:
    """Greedy left-to-right merging, repeated until nothing changes."""
    cur = list(slices)
    changed = True
    while changed:
        changed = False
        out: List[Slice] = []
        for k, s in enumerate(cur):
            # a cyclic decomposition keeps at least two slices
            if out and not (cyclic and len(out) + len(cur) - k - 1 < 2):
                m = merge_pair(out[-1], s)
                if m is not None:
                    out[-1] = m
                    changed = True
                    continue
            out.append(s)
        if cyclic and len(out) > 2:
            m = merge_pair(out[-1], out[0])
            if m is not None:
                out = [m] + out[1:-1]
                changed = True
        cur = out
    return cur


def mergeable_neighbours(slices: List[Slice], cyclic: bool) -> List[int]:
    """Indices i such that slice i merges with its successor."""
    n = len(slices)
    if cyclic and n <= 2:
        return []
    idx = [i for i in range(n - 1) if merge_pair(slices[i], slices[i + 1]) is not None]
    if cyclic and n > 2 and merge_pair(slices[-1], slices[0]) is not None:
        idx.append(n - 1)
    return idx
