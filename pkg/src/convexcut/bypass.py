"""Attachment arcs and the bypass rewrite.

A bypass is attached along a route that meets the dividing set in
exactly three points: its two endpoints and one interior visit.  The
six strand halves at those points form a tangle in a hexagonal
neighborhood of the route, and the rewrite replaces the tangle by one
of its two rotations.  Turning the hexagon one click with the route
("front") joins the right halves of the first and second strands, the
left halves of the second and third, and hooks the two remaining
halves together along the whole route; the opposite click ("back")
gives the mirror surgery, and performing one after the other restores
the original picture.

Routes are described by stops: anchors on existing strand pieces, edge
stops where the route crosses into a neighboring face, and free bends
inside a face.  Rewired strands are rebuilt with exact rational edge
coordinates, so a result can be fed straight back into region analysis
or another rewrite.  Rewires whose strands cannot be drawn straight in
the face charts, and freed circles that cannot be pinned to a boundary
stretch of their region, are refused with InvalidArc rather than
approximated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .arrangement import FaceChart
from .canonical import canonical_signature
from .curves import (
    ArcComponent,
    ClosedComponent,
    Crossing,
    CurveSystem,
    FloatingCircle,
    as_param,
    build_charts,
)
from .errors import (
    DomainError,
    EndpointsOffDividingSet,
    InvalidArc,
    NoImbalance,
    UnsupportedSurface,
    WrongCrossingCount,
)
from .geom import (
    cross,
    on_segment,
    orient,
    point_in_polygon,
    point_on_chord,
    segments_cross,
)
from .regions import giroux_criterion
from .surfaces import Slot, flip, label_of

__all__ = [
    "STANDARD_PAIRING",
    "FRONT_PAIRING",
    "BACK_PAIRING",
    "rotate_pairing",
    "AnchorStop",
    "EdgeStop",
    "FreeStop",
    "AttachArc",
    "BypassResult",
    "apply_bypass",
    "enumerate_attach_arcs",
    "find_imbalance_arc",
]


# ---------------------------------------------------------------------------
# the hexagonal tangle
#
# Positions 0..5 run around the hexagon: 0, 1, 2 are the right halves of
# the three strands met along the route, 5, 4, 3 the left halves of the
# same strands.  The untouched tangle pairs each strand's own halves.

STANDARD_PAIRING = frozenset(
    (frozenset((0, 5)), frozenset((1, 4)), frozenset((2, 3)))
)


def rotate_pairing(pairing, clicks: int = 1):
    """Rotate every hexagon position by the given number of clicks."""
    return frozenset(
        frozenset((a + clicks) % 6 for a in pair) for pair in pairing
    )


FRONT_PAIRING = rotate_pairing(STANDARD_PAIRING, 1)
BACK_PAIRING = rotate_pairing(STANDARD_PAIRING, -1)


# ---------------------------------------------------------------------------
# route description


@dataclass(frozen=True)
class AnchorStop:
    """A point on an existing strand piece: chord ``chord`` of component
    ``comp`` at parameter ``s`` along the piece."""

    comp: tuple
    chord: int
    s: Fraction

    def __post_init__(self):
        object.__setattr__(self, "comp", tuple(self.comp))
        object.__setattr__(self, "s", as_param(self.s))


@dataclass(frozen=True)
class EdgeStop:
    """The route crosses an interior edge; ``spec`` names the slot it
    enters through, ``t`` the position along the edge."""

    spec: str
    t: Fraction

    def __post_init__(self):
        object.__setattr__(self, "t", as_param(self.t))


@dataclass(frozen=True)
class FreeStop:
    """A bend at explicit chart coordinates inside one face."""

    face: str
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))


@dataclass(frozen=True)
class AttachArc:
    """An attachment route: a sequence of stops, anchored at both ends."""

    stops: tuple

    def __post_init__(self):
        object.__setattr__(self, "stops", tuple(self.stops))


@dataclass(frozen=True)
class BypassResult:
    system: CurveSystem
    raw: CurveSystem
    verdict: str
    direction: str


# ---------------------------------------------------------------------------
# route resolution and validation


def _point_on_seg(p, a, b) -> bool:
    return orient(a, b, p) == 0 and on_segment(p, a, b)


def _other_side(side: str) -> str:
    return "L" if side == "R" else "R"


def _other_half(h: str) -> str:
    return "a" if h == "b" else "b"


class _Resolved:
    """An attachment route checked against a concrete curve system.

    Resolves every stop to exact chart coordinates, walks the straight
    stretches between consecutive stops, and rejects any route that
    crosses the dividing set away from its anchors, touches itself, or
    meets the middle strand non-transversally.
    """

    def __init__(self, system: CurveSystem, arc: AttachArc):
        self.system = system
        self.surface = system.surface
        self.arc = arc
        self.charts = build_charts([("g", system)])
        stops = arc.stops
        if len(stops) < 3:
            raise WrongCrossingCount(
                "a bypass route must meet the dividing set in three points"
            )
        if not isinstance(stops[0], AnchorStop) or not isinstance(
            stops[-1], AnchorStop
        ):
            raise EndpointsOffDividingSet(
                "a bypass route must start and end on the dividing set"
            )
        self.anchor_pos = [
            i for i, st in enumerate(stops) if isinstance(st, AnchorStop)
        ]
        if len(self.anchor_pos) != 3:
            raise WrongCrossingCount(
                f"a bypass route meets the dividing set exactly three times, "
                f"this one has {len(self.anchor_pos)} anchors"
            )
        self.anchor_stops = [stops[i] for i in self.anchor_pos]
        self._resolve_anchors()
        self._resolve_stops()
        self._build_segments()
        self._check_geometry()
        self._orient_anchors()

    # -- per-stop resolution

    def _resolve_anchors(self):
        chord_map = {(ch.comp, ch.index): ch for ch in self.system.chords()}
        self.anchor_chords = []
        seen = set()
        for st in self.anchor_stops:
            ch = chord_map.get((st.comp, st.chord))
            if ch is None:
                raise InvalidArc(
                    f"anchor references no strand piece "
                    f"{(st.comp, st.chord)!r} of the dividing set"
                )
            key = (st.comp, st.chord, st.s)
            if key in seen:
                raise InvalidArc("two anchors sit at the same point")
            seen.add(key)
            self.anchor_chords.append(ch)

    def _chord_endpoints(self, ch):
        chart = self.charts[ch.face]
        return chart.coords[("g",) + ch.a_item], chart.coords[("g",) + ch.b_item]

    def _resolve_stops(self):
        surf = self.surface
        stops = self.arc.stops
        # entry face/point and exit face/point per stop; equal except at
        # edge stops, where the route changes face
        self.stop_in = []
        self.stop_out = []
        edge_keys = set()
        anchor_iter = iter(range(3))
        for st in stops:
            if isinstance(st, AnchorStop):
                k = next(anchor_iter)
                ch = self.anchor_chords[k]
                pa, pb = self._chord_endpoints(ch)
                p = point_on_chord(pa, pb, st.s)
                self.stop_in.append((ch.face, p))
                self.stop_out.append((ch.face, p))
            elif isinstance(st, EdgeStop):
                label = label_of(st.spec)
                if label not in surf.glued:
                    raise InvalidArc(
                        f"the route can only cross interior edges, "
                        f"{label!r} is not one"
                    )
                key = (label, st.t)
                if key in edge_keys:
                    raise InvalidArc(
                        f"the route crosses edge {label!r} twice at the "
                        "same position"
                    )
                edge_keys.add(key)
                for t0, _, _ in self.system.points_on_edge(label):
                    if t0 == st.t:
                        raise InvalidArc(
                            f"the route crosses edge {label!r} through an "
                            "existing curve point"
                        )
                entered = surf.slot_of_signed(st.spec)
                approach = surf.partner(entered)
                p_in = self.charts[approach.face].point_on_hull(
                    approach.index, surf.local_param(approach, st.t)
                )
                p_out = self.charts[entered.face].point_on_hull(
                    entered.index, surf.local_param(entered, st.t)
                )
                for face, p in ((approach.face, p_in), (entered.face, p_out)):
                    chart = self.charts[face]
                    for ca, cb, _ in chart.chords:
                        if _point_on_seg(p, chart.coords[ca], chart.coords[cb]):
                            raise InvalidArc(
                                "the route enters a zero-width pocket "
                                "between a strand and the boundary; this "
                                "chart cannot host it"
                            )
                self.stop_in.append((approach.face, p_in))
                self.stop_out.append((entered.face, p_out))
            elif isinstance(st, FreeStop):
                if st.face not in surf.faces:
                    raise InvalidArc(f"free bend on unknown face {st.face!r}")
                chart = self.charts[st.face]
                p = (st.x, st.y)
                hull = [chart.coords[tag] for tag in chart.order]
                if len(hull) < 3 or not point_in_polygon(p, hull):
                    raise InvalidArc("free bend outside its face")
                for ca, cb, _ in chart.chords:
                    if _point_on_seg(p, chart.coords[ca], chart.coords[cb]):
                        raise InvalidArc("free bend sits on a strand")
                self.stop_in.append((st.face, p))
                self.stop_out.append((st.face, p))
            else:
                raise InvalidArc(f"unknown stop kind {st!r}")

    def _build_segments(self):
        stops = self.arc.stops
        self.segments = []
        for i in range(len(stops) - 1):
            face_a, a = self.stop_out[i]
            face_b, b = self.stop_in[i + 1]
            if face_a != face_b:
                raise InvalidArc(
                    f"the stretch between stops {i} and {i + 1} spans faces "
                    f"{face_a!r} and {face_b!r}; add an edge stop"
                )
            if a == b:
                raise InvalidArc(
                    f"stops {i} and {i + 1} coincide; the stretch between "
                    "them has zero length"
                )
            self.segments.append((face_a, a, b))

    # -- geometric checks

    def _check_geometry(self):
        by_face: dict[str, list] = {}
        for i, (face, a, b) in enumerate(self.segments):
            by_face.setdefault(face, []).append((i, a, b))
        for face, segs in by_face.items():
            chart = self.charts[face]
            chord_geoms = [
                (chart.coords[ca], chart.coords[cb])
                for ca, cb, _ in chart.chords
            ]
            items = [chart.coords[tag] for tag in chart.order]
            for _, a, b in segs:
                for qa, qb in chord_geoms:
                    if segments_cross(a, b, qa, qb):
                        raise InvalidArc(
                            "the route crosses the dividing set away from "
                            "its anchors"
                        )
                for p in items:
                    if p != a and p != b and _point_on_seg(p, a, b):
                        raise InvalidArc(
                            "the route passes through a marked boundary point"
                        )
            for xi in range(len(segs)):
                for xj in range(xi + 1, len(segs)):
                    i, a1, b1 = segs[xi]
                    j, a2, b2 = segs[xj]
                    if j == i + 1 and b1 == a2:
                        if a1 == b2:
                            raise InvalidArc("the route touches itself")
                        if orient(a1, b1, b2) == 0:
                            dot = (b1[0] - a1[0]) * (b2[0] - b1[0]) + (
                                b1[1] - a1[1]
                            ) * (b2[1] - b1[1])
                            if dot < 0:
                                raise InvalidArc(
                                    "the route doubles back on itself"
                                )
                        continue
                    if segments_cross(a1, b1, a2, b2):
                        raise InvalidArc("the route crosses itself")
                    if {a1, b1} & {a2, b2}:
                        raise InvalidArc("the route touches itself")
                    for p in (a2, b2):
                        if _point_on_seg(p, a1, b1):
                            raise InvalidArc("the route touches itself")
                    for p in (a1, b1):
                        if _point_on_seg(p, a2, b2):
                            raise InvalidArc("the route touches itself")

    def _orient_anchors(self):
        """Which half of each anchored strand lies on the route's left.

        Halves are named by the piece's own parameter: "a" is the half
        toward the piece's start, "b" the half toward its end.  The
        route's left is read off the stretch leaving the first anchor
        and the stretches arriving at the other two; the middle anchor
        must be crossed transversally.
        """
        self.left_half = []
        for k, pos in enumerate(self.anchor_pos):
            ch = self.anchor_chords[k]
            ca, cb = self._chord_endpoints(ch)
            incoming = self.segments[pos - 1] if pos > 0 else None
            outgoing = (
                self.segments[pos] if pos < len(self.arc.stops) - 1 else None
            )
            if k == 0:
                side = orient(ca, cb, outgoing[2])
                if side == 0:
                    raise InvalidArc(
                        "the route leaves its first anchor along the strand"
                    )
                self.left_half.append("a" if side > 0 else "b")
            elif k == 2:
                side = orient(ca, cb, incoming[1])
                if side == 0:
                    raise InvalidArc(
                        "the route reaches its last anchor along the strand"
                    )
                self.left_half.append("b" if side > 0 else "a")
            else:
                before = orient(ca, cb, incoming[1])
                after = orient(ca, cb, outgoing[2])
                if before == 0 or after == 0:
                    raise InvalidArc("the route runs along the middle strand")
                if before == after:
                    raise InvalidArc(
                        "the route must cross the middle strand, not bounce "
                        "off it"
                    )
                self.left_half.append("b" if before > 0 else "a")

    # -- tangle bookkeeping

    def corridor(self, k: int) -> list[int]:
        """Stop indices strictly between anchors k and k+1."""
        return list(range(self.anchor_pos[k] + 1, self.anchor_pos[k + 1]))

    def half_end(self, anchor: int, side: str) -> tuple:
        """The strand half-end on the given side of the route at an
        anchor, as ("before"|"after", anchor index)."""
        h = self.left_half[anchor]
        if side == "R":
            h = _other_half(h)
        return ("before" if h == "a" else "after", anchor)


# ---------------------------------------------------------------------------
# corridor copies: where the rewired strands cross edges


def _edge_offsets(resolved: _Resolved) -> dict:
    """Two fresh edge positions per route edge stop, one for each side.

    The rewired strands run parallel to the route; the copy on the
    route's left crosses each edge slightly to one side of the route's
    own crossing, the right copy slightly to the other.  Offsets stay
    inside a third of the gap to the nearest other point on that edge,
    so copies never collide with existing curve points, probes, or each
    other.
    """
    surf = resolved.surface
    stops = resolved.arc.stops
    route_ts: dict[str, list] = {}
    for idx, st in enumerate(stops):
        if isinstance(st, EdgeStop):
            route_ts.setdefault(label_of(st.spec), []).append((idx, st.t))
    offsets = {}
    for idx, st in enumerate(stops):
        if not isinstance(st, EdgeStop):
            continue
        label = label_of(st.spec)
        entered = surf.slot_of_signed(st.spec)
        approach = surf.partner(entered)
        _, a, b = resolved.segments[idx - 1]
        d = (b[0] - a[0], b[1] - a[1])
        chart = resolved.charts[approach.face]
        u = surf.local_param(approach, st.t)
        (lo_it, _), (hi_it, _) = chart.hull_span(approach.index, u)
        pa, pb = chart.coords[lo_it], chart.coords[hi_it]
        e = (pb[0] - pa[0], pb[1] - pa[1])
        z = cross((Fraction(0), Fraction(0)), d, e)
        if z == 0:
            raise InvalidArc(
                "the route runs along the edge it is meant to cross"
            )
        sign_u = 1 if z > 0 else -1
        dt_left = sign_u * surf.slot_sign(approach)
        gaps = [st.t, 1 - st.t]
        for t0, _, _ in resolved.system.points_on_edge(label):
            gaps.append(abs(st.t - t0))
        for jdx, t0 in route_ts.get(label, ()):
            if jdx != idx:
                gaps.append(abs(st.t - t0))
        eps = min(gaps) / 3
        offsets[idx] = {"L": st.t + dt_left * eps, "R": st.t - dt_left * eps}
    return offsets


# ---------------------------------------------------------------------------
# the two rotations, as bridge tables
#
# A bridge joins two strand half-ends through the attachment
# neighborhood.  Each entry is (from_anchor, from_side, to_anchor,
# to_side, legs); a leg (corridor, side, reversed) runs the bridge along
# one corridor of the route on a fixed side of it.  Every (corridor,
# side) copy is used by exactly one bridge.


def _bridge_plan(direction: str):
    if direction == "front":
        return (
            (0, "R", 1, "R", ((0, "R", False),)),
            (1, "L", 2, "L", ((1, "L", False),)),
            (2, "R", 0, "L", ((1, "R", True), (0, "L", True))),
        )
    if direction == "back":
        return (
            (0, "L", 1, "L", ((0, "L", False),)),
            (1, "R", 2, "R", ((1, "R", False),)),
            (0, "R", 2, "L", ((0, "R", False), (1, "L", False))),
        )
    raise ValueError(f"direction must be 'front' or 'back', not {direction!r}")


def _reverse_payload(payload):
    out = []
    for entry in reversed(payload):
        if entry[0] == "crossing":
            cr = entry[1]
            out.append(("crossing", Crossing(flip(cr.spec), cr.t)))
        else:
            _, corr, side, eff = entry
            out.append(("marker", corr, side, not eff))
    return out


def _leg_payload(resolved: _Resolved, offsets: dict, corr: int, side: str,
                 rev: bool):
    stops = resolved.arc.stops
    entries = []
    has_edge = False
    for i in resolved.corridor(corr):
        st = stops[i]
        if isinstance(st, EdgeStop):
            has_edge = True
            entries.append(("crossing", Crossing(st.spec, offsets[i][side])))
    if not has_edge:
        # a crossing-free corridor copy stays whole inside one face; the
        # marker remembers which rewired strand carries this copy, so a
        # freed circle flanking the corridor's other copy can be placed
        entries.append(("marker", corr, side, True))
    if rev:
        entries = _reverse_payload(entries)
    return entries


def _build_bridges(resolved: _Resolved, offsets: dict, direction: str) -> dict:
    bridge_of = {}
    for fa, fs, ta, ts, legs in _bridge_plan(direction):
        payload = []
        for corr, side, rev in legs:
            payload.extend(_leg_payload(resolved, offsets, corr, side, rev))
        he_from = resolved.half_end(fa, fs)
        he_to = resolved.half_end(ta, ts)
        bridge_of[he_from] = (he_to, payload)
        bridge_of[he_to] = (he_from, _reverse_payload(payload))
    return bridge_of


# ---------------------------------------------------------------------------
# cutting the anchored strands


def _internal_stretches(resolved: _Resolved):
    """Split every anchored component at its cuts.

    Returns (stretches, cut_comps): stretches maps each cut half-end,
    arc start, or arc end to (other end, crossings between them) with
    crossings stored in the component's own direction; cut_comps is the
    set of component ids that were cut.
    """
    by_comp: dict[tuple, list] = {}
    for k, st in enumerate(resolved.anchor_stops):
        by_comp.setdefault(st.comp, []).append((st.chord, st.s, k))
    internal: dict[tuple, tuple] = {}
    for comp_id, cuts in by_comp.items():
        by_chord: dict[int, list] = {}
        for chord, s, k in cuts:
            by_chord.setdefault(chord, []).append((s, k))
        for lst in by_chord.values():
            lst.sort()
        kind, ci = comp_id
        comp = resolved.system.component(comp_id)
        m = len(comp.crossings)
        nodes: list[tuple] = []
        if kind == "closed":
            for i in range(m):
                nodes.append(("x", i))
                nodes.extend(("cut", k) for _, k in by_chord.get(i, ()))
            cut_positions = [j for j, nd in enumerate(nodes) if nd[0] == "cut"]
            for a_pos, b_pos in zip(
                cut_positions, cut_positions[1:] + cut_positions[:1]
            ):
                crossings = []
                j = (a_pos + 1) % len(nodes)
                while j != b_pos:
                    if nodes[j][0] == "x":
                        crossings.append(comp.crossings[nodes[j][1]])
                    j = (j + 1) % len(nodes)
                ka, kb = nodes[a_pos][1], nodes[b_pos][1]
                internal[("after", ka)] = (("before", kb), tuple(crossings))
                internal[("before", kb)] = (("after", ka), tuple(crossings))
        else:
            nodes.append(("start", ci))
            nodes.extend(("cut", k) for _, k in by_chord.get(0, ()))
            for i in range(m):
                nodes.append(("x", i))
                nodes.extend(("cut", k) for _, k in by_chord.get(i + 1, ()))
            nodes.append(("end", ci))
            marks = [
                j
                for j, nd in enumerate(nodes)
                if nd[0] in ("cut", "start", "end")
            ]
            for a_pos, b_pos in zip(marks, marks[1:]):
                crossings = tuple(
                    comp.crossings[nodes[j][1]]
                    for j in range(a_pos + 1, b_pos)
                    if nodes[j][0] == "x"
                )
                na, nb = nodes[a_pos], nodes[b_pos]
                ea = ("after", na[1]) if na[0] == "cut" else na
                eb = ("before", nb[1]) if nb[0] == "cut" else nb
                internal[ea] = (eb, crossings)
                internal[eb] = (ea, crossings)
    return internal, set(by_comp)


def _split_stream(stream):
    crossings, marks = [], [[]]
    for entry in stream:
        if entry[0] == "crossing":
            crossings.append(entry[1])
            marks.append([])
        else:
            marks[-1].append(entry)
    return crossings, marks


# ---------------------------------------------------------------------------
# the rewrite


def apply_bypass(system: CurveSystem, arc: AttachArc,
                 direction: str = "front") -> BypassResult:
    """Attach a bypass along the route and rewrite the tangle.

    direction "front" rotates the hexagon one click with the route,
    "back" one click against it.  Returns the normalized result
    together with the raw rewire and a verdict: "trivial" when the
    rewritten set is isotopic to the original, "overtwisting" when it
    fails the tightness criterion, "effective" otherwise.
    """
    _bridge_plan(direction)  # reject bad directions before any work
    resolved = _Resolved(system, arc)
    surface = system.surface
    offsets = _edge_offsets(resolved)
    bridge_of = _build_bridges(resolved, offsets, direction)
    internal, cut_comps = _internal_stretches(resolved)

    def orient_crossings(crossings, forward):
        if forward:
            return [("crossing", c) for c in crossings]
        return [
            ("crossing", Crossing(flip(c.spec), c.t))
            for c in reversed(crossings)
        ]

    def terminal_bp(term):
        which, ai = term
        comp = system.arcs[ai]
        return comp.start if which == "start" else comp.end

    marker_map: dict[tuple, tuple] = {}

    def register_markers(comp_id, m, marks, is_closed):
        # bucket i holds markers between crossings i-1 and i, so on a
        # closed strand it lies on chord (i-1) mod m, on an open strand
        # on chord i
        for bi, bucket in enumerate(marks):
            for _, corr, side, eff in bucket:
                chord = ((bi - 1) % m) if is_closed else bi
                marker_map[(corr, side)] = (comp_id, chord, eff)

    new_closed: list[ClosedComponent] = []
    new_arcs: list[ArcComponent] = []
    pending: list[tuple] = []
    visited: set[tuple] = set()

    # strands with loose ends first: each walk joins one original
    # endpoint to another through bridges and surviving stretches
    for ai in sorted(ci for kind, ci in cut_comps if kind == "arc"):
        for which in ("start", "end"):
            term = (which, ai)
            if term in visited:
                continue
            visited.add(term)
            stream: list[tuple] = []
            cur, crs = internal[term]
            stream += orient_crossings(crs, which == "start")
            while cur[0] not in ("start", "end"):
                visited.add(cur)
                other, payload = bridge_of[cur]
                visited.add(other)
                stream += payload
                cur, crs = internal[other]
                stream += orient_crossings(crs, other[0] == "after")
            visited.add(cur)
            crossings, marks = _split_stream(stream)
            idx = len(new_arcs)
            new_arcs.append(
                ArcComponent(terminal_bp(term), tuple(crossings),
                             terminal_bp(cur))
            )
            register_markers(("arc", idx), len(crossings), marks, False)

    # everything left closes up into loops
    for k in range(3):
        for half in ("before", "after"):
            he = (half, k)
            if he in visited:
                continue
            stream = []
            cur = he
            while True:
                visited.add(cur)
                other, payload = bridge_of[cur]
                visited.add(other)
                stream += payload
                cur, crs = internal[other]
                stream += orient_crossings(crs, other[0] == "after")
                if cur == he:
                    break
            crossings, marks = _split_stream(stream)
            if crossings:
                idx = len(new_closed)
                new_closed.append(ClosedComponent(tuple(crossings)))
                register_markers(("closed", idx), len(crossings), marks, True)
            else:
                face = resolved.anchor_chords[k].face
                first = next(e for bucket in marks for e in bucket)
                pending.append((face, first))

    for i, comp in enumerate(system.closed):
        if ("closed", i) not in cut_comps:
            new_closed.append(comp)
    for i, comp in enumerate(system.arcs):
        if ("arc", i) not in cut_comps:
            new_arcs.append(comp)

    try:
        base = CurveSystem(
            surface, tuple(new_closed), tuple(new_arcs), system.floats
        )
    except ValueError as exc:
        # the bent rewire is embedded by construction; if its straight
        # redraw is not, this chart cannot represent the result
        raise InvalidArc(
            f"the rewired strands cannot be drawn straight in this chart: "
            f"{exc}"
        ) from exc

    raw = _place_circles(base, pending, marker_map)
    result = raw.normalize()
    verdict = _classify(system, result)
    return BypassResult(result, raw, verdict, direction)


def _place_circles(base: CurveSystem, pending, marker_map) -> CurveSystem:
    """Pin each freed circle to a boundary stretch of its region.

    A crossing-free loop produced by the rewrite is one piece of a cut
    strand plus one bridge copy hugging a corridor of the route.  The
    corridor's other copy always survives as a piece of a rewired
    strand directly across the vacated corridor, so the circle's region
    is the cell flanking that strand piece on the circle's side.
    """
    if not pending:
        return base
    surface = base.surface
    charts = build_charts([("g", base)])
    placed = []
    reserved: set[tuple] = set()
    for face, marker in pending:
        _, corr, side, _ = marker
        hit = marker_map.get((corr, _other_side(side)))
        if hit is None:
            raise InvalidArc(
                "the rewrite stacks two freed circles against one corridor; "
                "reroute the attachment"
            )
        comp_id, chord_idx, n_eff = hit
        chart = charts[face]
        want = 1 if (side == "L") == n_eff else -1
        key = ("g", comp_id, chord_idx)
        cells = chart.cells()
        flank = {
            cell.index
            for cell in cells
            for entry in cell.loop
            if entry[0] == "seg" and entry[1] == key and entry[3] == want
        }
        if len(flank) != 1:
            raise InvalidArc(
                "cannot localize a circle freed by the rewrite; reroute "
                "the attachment"
            )
        cell = cells[flank.pop()]
        placed.append(_fresh_probe(surface, base, chart, face, cell, reserved))
    return base.with_changes(floats=base.floats + tuple(placed))


def _fresh_probe(surface, base, chart: FaceChart, face: str, cell,
                 reserved: set) -> FloatingCircle:
    all_gaps = chart.gaps()
    for gi in cell.gaps:
        gap = all_gaps[gi]
        slot = Slot(face, gap.slot)
        label = surface.slot_edge(slot)
        sign = surface.slot_sign(slot)
        used = {t for t, _, _ in base.points_on_edge(label)}
        used |= {t for lab, t in reserved if lab == label}
        for j in (4, 3, 5, 2, 6, 1, 7):
            u = gap.u_lo + (gap.u_hi - gap.u_lo) * Fraction(j, 8)
            t = u if sign > 0 else 1 - u
            if 0 < t < 1 and t not in used:
                reserved.add((label, t))
                return FloatingCircle(face, gap.slot, t, 0)
    raise InvalidArc(
        "a circle freed by the rewrite lives in a region away from the "
        "boundary, which this model cannot pin down"
    )


def _classify(before: CurveSystem, after: CurveSystem) -> str:
    if not giroux_criterion(after):
        return "overtwisting"
    try:
        if canonical_signature(after) == canonical_signature(
            before.normalize()
        ):
            return "trivial"
    except UnsupportedSurface:
        pass
    return "effective"


# ---------------------------------------------------------------------------
# finding attachment arcs


_S_GRID = (
    (Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)),
    (Fraction(1, 3), Fraction(1, 2), Fraction(2, 3)),
    (Fraction(2, 3), Fraction(1, 2), Fraction(1, 3)),
    (Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)),
    (Fraction(2, 5), Fraction(1, 2), Fraction(3, 5)),
    (Fraction(3, 5), Fraction(1, 2), Fraction(2, 5)),
    (Fraction(1, 2), Fraction(1, 3), Fraction(1, 2)),
    (Fraction(1, 2), Fraction(2, 3), Fraction(1, 2)),
)


def enumerate_attach_arcs(system: CurveSystem, limit: int = 32):
    """Straight single-face attachment routes, up to route isotopy.

    Tries ordered triples of strand pieces sharing a face, anchored at
    a small grid of positions, and keeps the first geometrically valid
    route of each combinatorial class: the pieces hit, in order, with
    the side each strand half takes relative to the route.  Reversing a
    route yields the same pair of surgeries, so each class is counted
    once.
    """
    by_face: dict[str, list] = {}
    for ch in system.chords():
        by_face.setdefault(ch.face, []).append(ch)
    out = []
    seen = set()
    attempts = 0
    for face in sorted(by_face):
        face_chords = by_face[face]
        for trio in product(face_chords, repeat=3):
            found = None
            for s1, s2, s3 in _S_GRID:
                attempts += 1
                if attempts > 20000:
                    return out
                candidate = AttachArc(
                    (
                        AnchorStop(trio[0].comp, trio[0].index, s1),
                        AnchorStop(trio[1].comp, trio[1].index, s2),
                        AnchorStop(trio[2].comp, trio[2].index, s3),
                    )
                )
                try:
                    resolved = _Resolved(system, candidate)
                except DomainError:
                    continue
                found = (candidate, resolved)
                break
            if found is None:
                continue
            candidate, resolved = found
            sig = tuple(
                (ch.comp, ch.index, h)
                for ch, h in zip(trio, resolved.left_half)
            )
            rsig = tuple((c, i, _other_half(h)) for c, i, h in reversed(sig))
            key = min(sig, rsig)
            if key in seen:
                continue
            seen.add(key)
            out.append(candidate)
            if len(out) >= limit:
                return out
    return out


def find_imbalance_arc(system: CurveSystem) -> AttachArc:
    """An attachment route along the busiest boundary component.

    Boundary components carrying unequally many arc endpoints admit a
    route spanning three consecutive endpoints of the busiest one, each
    anchor placed close to its endpoint.  Raises NoImbalance when the
    boundary is a single component, when every component carries the
    same count, or when the busiest carries fewer than three endpoints.
    """
    surface = system.surface
    cycles = surface.boundary_cycles()
    if len(cycles) < 2:
        raise NoImbalance(
            "the boundary is a single component; endpoint counts cannot "
            "differ"
        )
    per_cycle = []
    for cyc in cycles:
        pts = []
        for slot in cyc:
            label = surface.slot_edge(slot)
            entries = [
                (t, ref)
                for t, kind, ref in system.points_on_edge(label)
                if kind == "endpoint"
            ]
            entries.sort(key=lambda e: surface.local_param(slot, e[0]))
            pts.extend(entries)
        per_cycle.append(pts)
    counts = [len(p) for p in per_cycle]
    if max(counts) <= min(counts):
        raise NoImbalance(
            f"every boundary component carries {counts[0]} arc endpoints"
        )
    busy = max(per_cycle, key=len)
    if len(busy) < 3:
        raise NoImbalance(
            "the busiest boundary component has fewer than three arc "
            "endpoints to span"
        )
    n = len(busy)
    last_err = None
    for k in range(n):
        trio = [busy[(k + d) % n] for d in range(3)]
        anchors = []
        for _, ref in trio:
            _, ai, which = ref
            m = len(system.arcs[ai].crossings)
            if which == "start":
                anchors.append(AnchorStop(("arc", ai), 0, Fraction(1, 17)))
            else:
                anchors.append(AnchorStop(("arc", ai), m, Fraction(16, 17)))
        if len({(a.comp, a.chord, a.s) for a in anchors}) < 3:
            continue
        candidate = AttachArc(tuple(anchors))
        try:
            _Resolved(system, candidate)
        except DomainError as exc:
            last_err = exc
            continue
        return candidate
    raise InvalidArc(
        f"no straight attachment spans three consecutive endpoints of the "
        f"busiest boundary component (last failure: {last_err})"
    )
