"""Curve systems on polygonal surfaces, with exact positions.

A system has three kinds of components:

  * ClosedComponent: a closed curve recorded as the cyclic list of its
    transverse passes through interior edges.  Each pass is a Crossing
    whose ``spec`` is the signed label of the slot the curve enters
    through; the straight chord after pass i runs inside that slot's
    face and ends at pass i+1 seen from this face's side.
  * ArcComponent: a properly embedded arc from one boundary point to
    another, with the same crossing bookkeeping in between.
  * FloatingCircle: a trivial circle meeting no edges.  It is recorded
    by a probe: a point on one side of one face, meaning "a small
    circle just inside the face there".  Circles sharing a probe form a
    nested chain ordered by depth (larger depth = further inside);
    circles with distinct probes are unnested.

All positions are Fractions in (0, 1) along an edge's own direction.
Every curve point in a system must be distinct from every other, except
that a nested chain shares its probe on purpose.  Components never
cross each other or themselves; construction verifies this exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .arrangement import FaceChart
from .errors import NotNormal
from .surfaces import PolygonalSurface, Slot, label_of


def as_param(t) -> Fraction:
    t = Fraction(t)
    if not 0 < t < 1:
        raise ValueError(f"edge parameter {t} outside the open interval (0, 1)")
    return t


@dataclass(frozen=True)
class Crossing:
    spec: str
    t: Fraction

    def __post_init__(self):
        object.__setattr__(self, "t", as_param(self.t))

    @property
    def edge(self) -> str:
        return label_of(self.spec)


@dataclass(frozen=True)
class BoundaryPoint:
    edge: str
    t: Fraction

    def __post_init__(self):
        object.__setattr__(self, "t", as_param(self.t))


@dataclass(frozen=True)
class ClosedComponent:
    crossings: tuple[Crossing, ...]

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(self.crossings))
        if not self.crossings:
            raise ValueError(
                "a closed component needs at least one crossing; "
                "a circle meeting no edges is a FloatingCircle"
            )


@dataclass(frozen=True)
class ArcComponent:
    start: BoundaryPoint
    crossings: tuple[Crossing, ...]
    end: BoundaryPoint

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(self.crossings))


@dataclass(frozen=True)
class FloatingCircle:
    face: str
    slot: int
    t: Fraction
    depth: int = 0

    def __post_init__(self):
        object.__setattr__(self, "t", as_param(self.t))
        if self.depth < 0:
            raise ValueError("float depth must be nonnegative")

    @property
    def probe(self) -> tuple[str, int, Fraction]:
        return (self.face, self.slot, self.t)


@dataclass(frozen=True)
class Chord:
    """One straight piece of a component inside one face.

    Endpoints are (slot, t) pairs with t in edge coordinates; ``a`` and
    ``b`` follow the component's traversal direction.
    """

    comp: tuple
    index: int
    face: str
    a_slot: Slot
    a_t: Fraction
    b_slot: Slot
    b_t: Fraction
    a_item: tuple
    b_item: tuple


class CurveSystem:
    """A validated multicurve on a surface."""

    def __init__(
        self,
        surface: PolygonalSurface,
        closed: Sequence[ClosedComponent] = (),
        arcs: Sequence[ArcComponent] = (),
        floats: Sequence[FloatingCircle] = (),
    ):
        self.surface = surface
        self.closed = tuple(closed)
        self.arcs = tuple(arcs)
        self.floats = tuple(floats)
        self._chords = self._derive_chords()
        self._check_distinct_points()
        self._check_float_chains()
        self._check_embedded()

    # -- identification ------------------------------------------------------

    def component_ids(self) -> list[tuple]:
        return (
            [("closed", i) for i in range(len(self.closed))]
            + [("arc", i) for i in range(len(self.arcs))]
            + [("float", i) for i in range(len(self.floats))]
        )

    def component(self, comp_id: tuple):
        kind, i = comp_id
        return {"closed": self.closed, "arc": self.arcs, "float": self.floats}[kind][i]

    @property
    def num_components(self) -> int:
        return len(self.closed) + len(self.arcs) + len(self.floats)

    def with_changes(self, closed=None, arcs=None, floats=None) -> "CurveSystem":
        return CurveSystem(
            self.surface,
            self.closed if closed is None else closed,
            self.arcs if arcs is None else arcs,
            self.floats if floats is None else floats,
        )

    # -- chord derivation -------------------------------------------------------

    def _entry_slot(self, crossing: Crossing) -> Slot:
        surf = self.surface
        if crossing.edge not in surf.glued:
            raise ValueError(
                f"crossing on {crossing.edge!r} which is not an interior edge"
            )
        return surf.slot_of_signed(crossing.spec)

    def _derive_chords(self) -> list[Chord]:
        surf = self.surface
        chords: list[Chord] = []

        def add(comp, idx, a_slot, a_t, a_item, b_slot, b_t, b_item):
            if a_slot.face != b_slot.face:
                raise ValueError(
                    f"component {comp} piece {idx} jumps between faces "
                    f"{a_slot.face!r} and {b_slot.face!r}; crossing specs "
                    "must chain through a common face"
                )
            chords.append(
                Chord(comp, idx, a_slot.face, a_slot, a_t, b_slot, b_t, a_item, b_item)
            )

        for ci, comp in enumerate(self.closed):
            cid = ("closed", ci)
            m = len(comp.crossings)
            for i, cr in enumerate(comp.crossings):
                nxt = comp.crossings[(i + 1) % m]
                a_slot = self._entry_slot(cr)
                b_slot = surf.partner(self._entry_slot(nxt))
                add(
                    cid, i,
                    a_slot, cr.t, ("c", cid, i, 0),
                    b_slot, nxt.t, ("c", cid, (i + 1) % m, 1),
                )

        for ai, arc in enumerate(self.arcs):
            cid = ("arc", ai)
            for bp in (arc.start, arc.end):
                if bp.edge not in surf.boundary_edges:
                    raise ValueError(
                        f"arc endpoint on {bp.edge!r} which is not a boundary edge"
                    )
            s_slot = surf.boundary_edges[arc.start.edge]
            e_slot = surf.boundary_edges[arc.end.edge]
            m = len(arc.crossings)
            if m == 0:
                add(cid, 0, s_slot, arc.start.t, ("e", cid, 0),
                    e_slot, arc.end.t, ("e", cid, 1))
                continue
            first = arc.crossings[0]
            add(cid, 0, s_slot, arc.start.t, ("e", cid, 0),
                surf.partner(self._entry_slot(first)), first.t, ("c", cid, 0, 1))
            for j in range(1, m):
                prev, cur = arc.crossings[j - 1], arc.crossings[j]
                add(cid, j,
                    self._entry_slot(prev), prev.t, ("c", cid, j - 1, 0),
                    surf.partner(self._entry_slot(cur)), cur.t, ("c", cid, j, 1))
            last = arc.crossings[m - 1]
            add(cid, m,
                self._entry_slot(last), last.t, ("c", cid, m - 1, 0),
                e_slot, arc.end.t, ("e", cid, 1))

        for fi, fl in enumerate(self.floats):
            if fl.face not in surf.faces:
                raise ValueError(f"float on unknown face {fl.face!r}")
            if not 0 <= fl.slot < len(surf.faces[fl.face]):
                raise ValueError(f"float probe slot {fl.slot} out of range")
        return chords

    def chords(self) -> list[Chord]:
        return list(self._chords)

    def chords_of(self, comp_id: tuple) -> list[Chord]:
        return [c for c in self._chords if c.comp == comp_id]

    # -- per-edge point bookkeeping ---------------------------------------------

    def points_on_edge(self, label: str) -> list[tuple[Fraction, str, tuple]]:
        """All curve points on this edge, sorted: (t, kind, reference).

        kind is "crossing", "endpoint" or "probe"; nested chains
        contribute one probe entry (their shared position).
        """
        out = []
        for ci, comp in enumerate(self.closed):
            for i, cr in enumerate(comp.crossings):
                if cr.edge == label:
                    out.append((cr.t, "crossing", ("closed", ci, i)))
        for ai, arc in enumerate(self.arcs):
            for i, cr in enumerate(arc.crossings):
                if cr.edge == label:
                    out.append((cr.t, "crossing", ("arc", ai, i)))
            if arc.start.edge == label:
                out.append((arc.start.t, "endpoint", ("arc", ai, "start")))
            if arc.end.edge == label:
                out.append((arc.end.t, "endpoint", ("arc", ai, "end")))
        probes = set()
        for fl in self.floats:
            slot = Slot(fl.face, fl.slot)
            if self.surface.slot_edge(slot) == label and fl.probe not in probes:
                probes.add(fl.probe)
                out.append((fl.t, "probe", fl.probe))
        out.sort(key=lambda entry: entry[0])
        return out

    def _check_distinct_points(self):
        hard: dict[tuple, tuple] = {}
        for ci, comp in enumerate(self.closed):
            for i, cr in enumerate(comp.crossings):
                key = (cr.edge, cr.t)
                if key in hard:
                    raise ValueError(f"two curve points coincide on edge {cr.edge!r}")
                hard[key] = ("closed", ci, i)
        for ai, arc in enumerate(self.arcs):
            for i, cr in enumerate(arc.crossings):
                key = (cr.edge, cr.t)
                if key in hard:
                    raise ValueError(f"two curve points coincide on edge {cr.edge!r}")
                hard[key] = ("arc", ai, i)
            for bp, tag in ((arc.start, "start"), (arc.end, "end")):
                key = (bp.edge, bp.t)
                if key in hard:
                    raise ValueError(f"two curve points coincide on edge {bp.edge!r}")
                hard[key] = ("arc", ai, tag)
        for fl in self.floats:
            edge = self.surface.slot_edge(Slot(fl.face, fl.slot))
            if (edge, fl.t) in hard:
                raise ValueError(
                    f"float probe coincides with a curve point on edge {edge!r}"
                )

    def _check_float_chains(self):
        chains: dict[tuple, list[int]] = {}
        for fl in self.floats:
            chains.setdefault(fl.probe, []).append(fl.depth)
        for probe, depths in chains.items():
            if sorted(depths) != list(range(len(depths))):
                raise ValueError(
                    f"float chain at {probe} has depths {sorted(depths)}; "
                    "a chain must use 0..k exactly once each"
                )

    # -- exact embedding check -----------------------------------------------

    def _check_embedded(self):
        for face, chart in build_charts([("g", self)]).items():
            crossing = chart.crossing_pairs()
            if crossing:
                k1, k2 = crossing[0]
                raise ValueError(
                    f"curve pieces {k1} and {k2} cross inside face {face!r}; "
                    "a curve system must be embedded"
                )

    # -- normalization ----------------------------------------------------------

    def same_slot_returns(self) -> list[tuple]:
        """Chords with both ends on one interior slot (potential bigons)."""
        out = []
        for ch in self._chords:
            if ch.a_slot == ch.b_slot and self.surface.is_glued(ch.a_slot):
                out.append((ch.comp, ch.index))
        return out

    def _reducible_pair(self):
        """First bigon pair that is safe to cancel, or None.

        A same-slot return chord can be cancelled when the open edge
        interval it spans carries no other curve points: crossings block
        the cancellation outright (the isotopy would have to sweep
        through them), probes on the bigon side sit inside the bigon,
        and probes on the far side would be separated from their cells
        by the merged chord.  The one exception: a two-crossing closed
        component collapsing onto a single far-side chain swallows that
        chain whole, nesting it one level deeper.
        """
        surf = self.surface
        for ch in self._chords:
            if ch.a_slot != ch.b_slot or not surf.is_glued(ch.a_slot):
                continue
            kind, ci = ch.comp
            comp = self.component(ch.comp)
            m = len(comp.crossings)
            if kind == "closed":
                i = ch.index
                j = (i + 1) % m
                if m < 2:
                    continue
            else:
                # arc chord index k joins crossings k-1 and k
                j = ch.index
                i = j - 1
                if i < 0 or j >= m:
                    continue
            edge = surf.slot_edge(ch.a_slot)
            lo, hi = sorted((ch.a_t, ch.b_t))
            blocked = False
            far_chains: list[tuple] = []
            near_slot = ch.a_slot
            far_slot = surf.partner(near_slot)
            for t, pkind, ref in self.points_on_edge(edge):
                if not lo < t < hi:
                    continue
                if pkind in ("crossing", "endpoint"):
                    blocked = True
                    break
                face_p, slot_p, _ = ref
                if Slot(face_p, slot_p) == near_slot:
                    blocked = True
                    break
                far_chains.append(ref)
            if blocked:
                continue
            collapsing = kind == "closed" and m == 2
            if far_chains and not collapsing:
                continue
            if len(far_chains) > 1:
                continue
            return (ch.comp, i, j, edge, lo, hi, far_slot,
                    far_chains[0] if far_chains else None)
        return None

    @property
    def is_normal(self) -> bool:
        return self._reducible_pair() is None

    def require_normal(self):
        pair = self._reducible_pair()
        if pair is not None:
            comp, i, j, edge, *_ = pair
            raise NotNormal(
                f"component {comp} has a removable bigon against edge {edge!r} "
                f"(crossings {i} and {j})"
            )

    def normalize(self) -> "CurveSystem":
        """Cancel removable bigons until none remain."""
        system = self
        while True:
            pair = system._reducible_pair()
            if pair is None:
                return system
            comp_id, i, j, edge, lo, hi, far_slot, captured = pair
            kind, ci = comp_id
            if kind == "closed":
                comp = system.closed[ci]
                m = len(comp.crossings)
                if m == 2:
                    new_closed = system.closed[:ci] + system.closed[ci + 1 :]
                    floats = list(system.floats)
                    if captured is None:
                        probe_t = (lo + hi) / 2
                        floats.append(
                            FloatingCircle(far_slot.face, far_slot.index, probe_t, 0)
                        )
                    else:
                        face_p, slot_p, t_p = captured
                        floats = [
                            FloatingCircle(fl.face, fl.slot, fl.t, fl.depth + 1)
                            if fl.probe == captured
                            else fl
                            for fl in floats
                        ]
                        floats.append(FloatingCircle(face_p, slot_p, t_p, 0))
                    system = system.with_changes(closed=new_closed, floats=floats)
                else:
                    kept = tuple(
                        cr for k, cr in enumerate(comp.crossings) if k not in (i, j)
                    )
                    new_comp = ClosedComponent(kept)
                    new_closed = (
                        system.closed[:ci] + (new_comp,) + system.closed[ci + 1 :]
                    )
                    system = system.with_changes(closed=new_closed)
            else:
                arc = system.arcs[ci]
                kept = tuple(
                    cr for k, cr in enumerate(arc.crossings) if k not in (i, j)
                )
                new_arc = ArcComponent(arc.start, kept, arc.end)
                new_arcs = system.arcs[:ci] + (new_arc,) + system.arcs[ci + 1 :]
                system = system.with_changes(arcs=new_arcs)

    def __repr__(self) -> str:
        return (
            f"CurveSystem(closed={len(self.closed)}, arcs={len(self.arcs)},"
            f" floats={len(self.floats)})"
        )


# ---------------------------------------------------------------------------
# chart assembly shared by validation, regions, and overlays


def build_charts(
    systems: Sequence[tuple[str, CurveSystem]],
) -> dict[str, FaceChart]:
    """One chart per face, with items and chords from all given systems.

    Tags are namespaced by the per-system prefix so overlays keep the
    two systems apart.  Raises NotTransverse-style collisions as plain
    ValueError; callers translate where a domain error is wanted.
    """
    if not systems:
        raise ValueError("need at least one system")
    surface = systems[0][1].surface
    slot_points: dict[str, dict[int, list]] = {
        face: {} for face in surface.faces
    }
    chord_lists: dict[str, list] = {face: [] for face in surface.faces}

    def add_point(slot: Slot, t: Fraction, tag):
        u = surface.local_param(slot, t)
        slot_points[slot.face].setdefault(slot.index, []).append((u, tag))

    for prefix, system in systems:
        if system.surface is not surface and system.surface.faces != surface.faces:
            raise ValueError("all systems must live on the same surface")
        for ch in system.chords():
            a_tag = (prefix,) + ch.a_item
            b_tag = (prefix,) + ch.b_item
            add_point(ch.a_slot, ch.a_t, a_tag)
            add_point(ch.b_slot, ch.b_t, b_tag)
            chord_lists[ch.face].append((a_tag, b_tag, (prefix, ch.comp, ch.index)))
        probes_seen = set()
        for fl in system.floats:
            if fl.probe in probes_seen:
                continue
            probes_seen.add(fl.probe)
            add_point(Slot(fl.face, fl.slot), fl.t, (prefix, "f", fl.slot, fl.t))

    charts = {}
    for face, word in surface.faces.items():
        charts[face] = FaceChart(len(word), slot_points[face], chord_lists[face])
    return charts
