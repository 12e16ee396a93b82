"""Per-face exact charts: curve points on a convex polygon, chords, cells.

Each face of a surface gets a chart.  The chart enumerates the face's
boundary items (polygon corners plus every marked point on its sides) in
counterclockwise order and embeds item ``k`` at ``(k, k^2)``.  Points on
a parabola are in convex position and no three are collinear, so:

  * every pair of distinct items spans a genuine chord,
  * two chords meet in at most one interior point,
  * a straight chord between two items of the same side is still an
    honest interior chord, because the two items are distinct vertices.

Cell extraction builds a tiny half-edge structure over the hull edges
("gaps") and the chord segments, walks faces with the usual
predecessor-around-vertex rule, and drops the single clockwise outer
walk.  Chords that coincide with a hull edge (a chord between two
consecutive items) create a zero-area cell; those are legitimate and
kept.  All arithmetic is Fraction arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .geom import Point, angle_key, point_in_polygon, segment_intersection, shoelace


def corner_tag(k: int) -> tuple:
    return ("corner", k)


def is_corner(tag) -> bool:
    return isinstance(tag, tuple) and len(tag) == 2 and tag[0] == "corner"


@dataclass(frozen=True)
class Gap:
    """One hull edge of the chart, between consecutive boundary items."""

    index: int
    slot: int
    u_lo: Fraction
    u_hi: Fraction
    item_lo: object
    item_hi: object


@dataclass
class Cell:
    """One 2-cell of the chart subdivision.

    ``loop`` lists directed sides counterclockwise with the cell on the
    left: ("gap", gap_index) or ("seg", chord_key, sub_index, direction)
    where direction is +1 when traversed along the chord's own
    orientation.
    """

    index: int
    loop: list = field(default_factory=list)
    gaps: list = field(default_factory=list)
    polygon: list = field(default_factory=list)


class FaceChart:
    """Boundary items and chords of a single face, with cell extraction.

    slot_points maps a slot index to ``(u, tag)`` pairs where ``u`` is
    the position along that side in the face's own walk direction.
    Chords are ``(tag_a, tag_b, key)`` triples; the pair (a, b) fixes
    the chord's orientation for left/right bookkeeping.
    """

    def __init__(
        self,
        n_slots: int,
        slot_points: Mapping[int, Sequence[tuple[Fraction, object]]],
        chords: Sequence[tuple[object, object, object]] = (),
    ):
        if n_slots < 1:
            raise ValueError("face needs at least one side")
        self.n_slots = n_slots
        self.order: list = []
        self.item_slot: dict = {}
        self.item_u: dict = {}
        for k in range(n_slots):
            c = corner_tag(k)
            self.order.append(c)
            self.item_slot[c] = k
            self.item_u[c] = Fraction(0)
            pts = sorted(slot_points.get(k, ()), key=lambda p: p[0])
            seen_u = set()
            for u, tag in pts:
                if not 0 < u < 1:
                    raise ValueError(f"point parameter {u} outside (0, 1)")
                if u in seen_u:
                    raise ValueError(f"two items at the same position on slot {k}")
                seen_u.add(u)
                if tag in self.item_slot:
                    raise ValueError(f"duplicate item tag {tag!r}")
                self.order.append(tag)
                self.item_slot[tag] = k
                self.item_u[tag] = u
        self.size = len(self.order)
        self.index = {tag: i for i, tag in enumerate(self.order)}
        self.coords: dict = {
            tag: (Fraction(i), Fraction(i * i)) for i, tag in enumerate(self.order)
        }
        self.chords: list = []
        seen_pairs = set()
        for a, b, key in chords:
            if a not in self.index or b not in self.index:
                raise ValueError(f"chord {key!r} references unknown items")
            if a == b:
                raise ValueError(f"chord {key!r} has coincident endpoints")
            pair = frozenset((a, b))
            if pair in seen_pairs:
                raise ValueError(f"two chords span the same item pair {pair}")
            seen_pairs.add(pair)
            self.chords.append((a, b, key))
        self._cells_cache: list[Cell] | None = None

    # -- gaps ----------------------------------------------------------------

    def gaps(self) -> list[Gap]:
        out = []
        for i, item in enumerate(self.order):
            nxt = self.order[(i + 1) % self.size]
            slot = self.item_slot[item]
            u_lo = self.item_u[item]
            u_hi = self.item_u[nxt] if not is_corner(nxt) else Fraction(1)
            out.append(Gap(i, slot, u_lo, u_hi, item, nxt))
        return out

    def hull_span(self, slot: int, u: Fraction):
        """Flanking hull vertices for position u on a slot.

        Returns ((lo_item, lo_u), (hi_item, hi_u)).  When u lands exactly on an
        item both sides are that item.
        """
        lo_item, lo_u = corner_tag(slot), Fraction(0)
        hi_item, hi_u = corner_tag((slot + 1) % self.n_slots), Fraction(1)
        for item in self.order:
            if is_corner(item) or self.item_slot[item] != slot:
                continue
            iu = self.item_u[item]
            if iu == u:
                return ((item, iu), (item, iu))
            if lo_u < iu < u:
                lo_item, lo_u = item, iu
            elif u < iu < hi_u:
                hi_item, hi_u = item, iu
        return ((lo_item, lo_u), (hi_item, hi_u))

    def point_on_hull(self, slot: int, u: Fraction) -> Point:
        """Exact chart coordinates of position u along a slot's hull stretch."""
        (a, ua), (b, ub) = self.hull_span(slot, u)
        pa = self.coords[a]
        if a == b:
            return pa
        pb = self.coords[b]
        lam = (u - ua) / (ub - ua)
        return (pa[0] + lam * (pb[0] - pa[0]), pa[1] + lam * (pb[1] - pa[1]))

    # -- chord crossings -------------------------------------------------------

    def _interleaves(self, a1: int, b1: int, a2: int, b2: int) -> bool:
        def between(lo, hi, x):
            return (lo < x < hi) if lo < hi else (x > lo or x < hi)

        return between(a1, b1, a2) != between(a1, b1, b2)

    def crossing_pairs(self) -> list[tuple[object, object]]:
        """Keys of chord pairs that properly cross, by endpoint interleaving."""
        out = []
        n = len(self.chords)
        for i in range(n):
            a1, b1, k1 = self.chords[i]
            i1, j1 = self.index[a1], self.index[b1]
            for j in range(i + 1, n):
                a2, b2, k2 = self.chords[j]
                i2, j2 = self.index[a2], self.index[b2]
                if self._interleaves(i1, j1, i2, j2):
                    out.append((k1, k2))
        return out

    # -- half-edge structure and cells ---------------------------------------

    def cells(self) -> list[Cell]:
        if self._cells_cache is None:
            self._cells_cache = self._build_cells()
        return self._cells_cache

    def _build_cells(self) -> list[Cell]:
        M = self.size
        if M < 3:
            if self.chords:
                # Two boundary items admit only the chord joining them,
                # which this degenerate hull cannot host.
                raise ValueError("chords need a chart with at least three items")
            cell = Cell(0)
            cell.loop = [("gap", i) for i in range(M)]
            cell.gaps = list(range(M))
            cell.polygon = [self.coords[t] for t in self.order]
            return [cell]

        verts: dict = {("b", i): self.coords[self.order[i]] for i in range(M)}
        edges: dict = {}
        for i in range(M):
            edges[("gap", i)] = (("b", i), ("b", (i + 1) % M))

        # split chords at their pairwise crossings
        chord_pts: dict = {key: [] for _, _, key in self.chords}
        chord_ends: dict = {}
        for a, b, key in self.chords:
            chord_ends[key] = (self.coords[a], self.coords[b])
        for i in range(len(self.chords)):
            a1, b1, k1 = self.chords[i]
            for j in range(i + 1, len(self.chords)):
                a2, b2, k2 = self.chords[j]
                p = segment_intersection(
                    self.coords[a1], self.coords[b1], self.coords[a2], self.coords[b2]
                )
                if p is not None:
                    vid = ("x", k1, k2)
                    verts[vid] = p
                    chord_pts[k1].append((p, vid))
                    chord_pts[k2].append((p, vid))
        for a, b, key in self.chords:
            pa, pb = chord_ends[key]
            # order interior points from a to b; x-coordinates along a
            # chord are strictly monotone because hull x's are distinct
            pts = sorted(chord_pts[key], key=lambda pv: (pv[0][0] - pa[0]) / (pb[0] - pa[0]))
            seq = [("b", self.index[a])] + [vid for _, vid in pts] + [("b", self.index[b])]
            for r in range(len(seq) - 1):
                edges[("seg", key, r)] = (seq[r], seq[r + 1])

        outgoing: dict = {v: [] for v in verts}
        for eid, (v1, v2) in edges.items():
            outgoing[v1].append((eid, 0, v2))
            outgoing[v2].append((eid, 1, v1))

        def sort_key(vid, entry):
            eid, dirbit, target = entry
            key = angle_key(verts[vid], verts[target])
            rank = 1
            if eid[0] == "gap":
                i = vid[1]
                rank = 0 if target == ("b", (i + 1) % M) else 2
            return (key, rank)

        for vid in outgoing:
            outgoing[vid].sort(key=lambda entry: sort_key(vid, entry))

        position = {
            (entry[0], entry[1]): (vid, pos)
            for vid, lst in outgoing.items()
            for pos, entry in enumerate(lst)
        }

        def head(h):
            eid, dirbit = h
            v1, v2 = edges[eid]
            return v2 if dirbit == 0 else v1

        def next_halfedge(h):
            eid, dirbit = h
            rev = (eid, 1 - dirbit)
            vid, pos = position[rev]
            lst = outgoing[vid]
            eid2, dirbit2, _ = lst[(pos - 1) % len(lst)]
            return (eid2, dirbit2)

        all_halfedges = [(eid, d) for eid in edges for d in (0, 1)]
        visited = set()
        cells: list[Cell] = []
        dropped = 0
        for h0 in all_halfedges:
            if h0 in visited:
                continue
            loop = []
            h = h0
            while True:
                visited.add(h)
                loop.append(h)
                h = next_halfedge(h)
                if h == h0:
                    break
            poly = []
            for eid, dirbit in loop:
                v1, v2 = edges[eid]
                poly.append(verts[v1] if dirbit == 0 else verts[v2])
            if shoelace(poly) < 0:
                dropped += 1
                continue
            cell = Cell(len(cells))
            cell.polygon = poly
            for eid, dirbit in loop:
                if eid[0] == "gap":
                    cell.loop.append(("gap", eid[1]))
                    cell.gaps.append(eid[1])
                else:
                    _, key, r = eid
                    cell.loop.append(("seg", key, r, 1 if dirbit == 0 else -1))
            cells.append(cell)
        assert dropped == 1, "expected exactly one outer walk"
        return cells

    def cell_of_gap(self, gap_index: int) -> int:
        for cell in self.cells():
            if gap_index in cell.gaps:
                return cell.index
        raise KeyError(gap_index)

    def cell_of_point(self, p: Point) -> int:
        for cell in self.cells():
            if len(cell.polygon) >= 3 and point_in_polygon(p, cell.polygon):
                return cell.index
        raise KeyError(f"point {p} not interior to any cell")
