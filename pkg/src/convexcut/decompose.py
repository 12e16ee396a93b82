"""Sutured boundary data, convex structures, and convex splitting.

The splitting operation is the heart of this module.  Cutting a convex
piece along a surface ``S`` produces new boundary made of the old
boundary minus a neighborhood of the cut circles, plus two copies of
``S``.  The dividing set of the new boundary is obtained by joining
each old dividing-curve endpoint to an adjacent endpoint of the chosen
arc system ``sigma`` on ``S``, always in the same direction along the
cut circle.  Everything here is bookkeeping over exact edge
parameters; no floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Mapping, Sequence

from .curves import (
    ArcComponent,
    BoundaryPoint,
    ClosedComponent,
    Crossing,
    CurveSystem,
    as_param,
    build_charts,
)
from .errors import (
    AlreadyDivided,
    AlternationViolation,
    BadCutPresentation,
    EmptyOnComponent,
    InconsistentOrientations,
    IsArc,
    MissingSuture,
    NoIntersections,
    NotABall,
    NotATorus,
    ToroidalSuturePresent,
    UnsupportedSurface,
)
from .regions import analyze_dividing_set, giroux_criterion
from .surfaces import (
    PolygonalSurface,
    Slot,
    UnionFind,
    flip,
    label_of,
    mirror_surface,
    sign_of,
)
from .canonical import torus_slope


# -- sutured presentations ----------------------------------------------------


@dataclass(frozen=True)
class SuturedPiece:
    """One boundary surface with its sutures still in annulus/torus form.

    ``cores`` holds the core curves of the annular sutures.  A torus
    boundary whose whole boundary is a suture carries ``toroidal=True``
    and no cores.  ``anchor`` optionally seeds the sign of one
    complementary region as ``((face, slot, t), sign)``.
    """

    name: str
    surface: PolygonalSurface
    cores: CurveSystem | None = None
    toroidal: bool = False
    anchor: tuple | None = None


@dataclass(frozen=True)
class SuturedPresentation:
    name: str
    pieces: tuple[SuturedPiece, ...]

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))


@dataclass(frozen=True)
class ConvexBoundary:
    """One boundary surface of a convex structure with its dividing set."""

    name: str
    surface: PolygonalSurface
    gamma: CurveSystem
    analysis: object | None


@dataclass(frozen=True)
class ConvexStructure:
    name: str
    boundary: tuple[ConvexBoundary, ...]
    irreducible: bool = True

    def __post_init__(self):
        object.__setattr__(self, "boundary", tuple(self.boundary))
        names = [p.name for p in self.boundary]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate boundary piece names in {self.name!r}")

    def piece(self, name: str) -> ConvexBoundary:
        for p in self.boundary:
            if p.name == name:
                return p
        raise KeyError(f"no boundary piece named {name!r}")

    def replace_piece(self, name: str, *new: ConvexBoundary) -> "ConvexStructure":
        kept = [p for p in self.boundary if p.name != name]
        if len(kept) == len(self.boundary):
            raise KeyError(f"no boundary piece named {name!r}")
        return replace(self, boundary=tuple(kept) + tuple(new))


def sutured_to_convex(
    sutured: SuturedPresentation, pending_tori: Sequence[str] = ()
) -> ConvexStructure:
    """Replace each annular suture by its core curve.

    Toroidal sutures have no preferred core; they are rejected unless
    the caller lists the piece in ``pending_tori``, in which case the
    piece comes out with an empty dividing set awaiting
    :func:`add_torus_dividing_pair`.
    """
    out = []
    for piece in sutured.pieces:
        if piece.toroidal:
            if piece.name not in pending_tori:
                raise ToroidalSuturePresent(
                    f"piece {piece.name!r} carries a toroidal suture; "
                    "fix it with add_torus_dividing_pair"
                )
            empty = CurveSystem(piece.surface, closed=(), arcs=(), floats=())
            out.append(ConvexBoundary(piece.name, piece.surface, empty, None))
            continue
        if piece.cores is None or piece.cores.num_components == 0:
            raise MissingSuture(f"piece {piece.name!r} has no annular suture")
        if piece.cores.arcs:
            raise IsArc(f"suture cores on {piece.name!r} must be closed curves")
        analysis = analyze_dividing_set(piece.cores, anchor=piece.anchor)
        out.append(ConvexBoundary(piece.name, piece.surface, piece.cores, analysis))
    return ConvexStructure(sutured.name, tuple(out))


# -- dividing pairs on torus boundary -----------------------------------------


def _torus_line_component(surface: PolygonalSurface, direction, origin):
    """Crossing sequence of a straight line on the unit square model."""
    a_label, b_label = surface.kind_meta["basis"]
    dx, dy = direction
    x0, y0 = origin
    events = []

    def pos(s):
        return ((x0 + dx * s) % 1, (y0 + dy * s) % 1)

    if dy > 0:
        for k in range(1, dy + 1):
            s = Fraction(k - y0, dy)
            events.append((s, a_label, pos(s)[0]))
    elif dy < 0:
        for k in range(0, dy, -1):
            s = Fraction(k - y0, dy)
            events.append((s, flip(a_label), pos(s)[0]))
    if dx > 0:
        for k in range(1, dx + 1):
            s = Fraction(k - x0, dx)
            events.append((s, flip(b_label), pos(s)[1]))
    elif dx < 0:
        for k in range(0, dx, -1):
            s = Fraction(k - x0, dx)
            events.append((s, b_label, pos(s)[1]))

    events.sort(key=lambda e: e[0])
    seen = set()
    for s, _, t in events:
        if s in seen or t == 0:
            raise ValueError("corner hit")
        seen.add(s)
    return ClosedComponent(tuple(Crossing(spec, t) for _, spec, t in events))


def torus_dividing_pair(surface: PolygonalSurface, dual_class) -> CurveSystem:
    """Two disjoint parallel primitive curves of the given class.

    The class is a net crossing vector over the torus basis, in the
    convention of :func:`canonical.torus_slope`.
    """
    if surface.kind != "torus":
        raise NotATorus(f"need a standard torus, got kind {surface.kind!r}")
    m, n = int(dual_class[0]), int(dual_class[1])
    if m == 0 and n == 0:
        raise ValueError("the zero class spans no curve")
    g = math.gcd(m, n)
    m, n = m // g, n // g
    if m < 0 or (m == 0 and n < 0):
        m, n = -m, -n
    direction = (-n, m)
    for attempt in range(20):
        x0 = Fraction(1, 7 + 6 * attempt)
        y0 = Fraction(1, 11 + 6 * attempt)
        step = Fraction(1, (abs(m) + abs(n)) * (13 + 6 * attempt))
        try:
            first = _torus_line_component(surface, direction, (x0, y0))
            second = _torus_line_component(
                surface,
                direction,
                (x0 + direction[1] * step, y0 - direction[0] * step),
            )
            system = CurveSystem(surface, closed=(first, second))
        except ValueError:
            continue
        if torus_slope(system) != (m, n):
            raise UnsupportedSurface(
                f"constructed pair has the wrong class for {dual_class!r}"
            )
        return system
    raise AssertionError("could not place a dividing pair in generic position")


def add_torus_dividing_pair(
    convex: ConvexStructure, component: str, dual_class
) -> ConvexStructure:
    piece = convex.piece(component)
    if piece.surface.kind != "torus":
        raise NotATorus(f"piece {component!r} is not a standard torus")
    if piece.gamma.num_components != 0:
        raise AlreadyDivided(f"piece {component!r} already carries a dividing set")
    gamma = torus_dividing_pair(piece.surface, dual_class)
    analysis = analyze_dividing_set(gamma)
    return convex.replace_piece(
        component, ConvexBoundary(piece.name, piece.surface, gamma, analysis)
    )


# -- boundary coordinates ------------------------------------------------------

# Points on a boundary circle are addressed by a single walk coordinate
# theta = (position of the slot in the boundary walk) + (param along the
# slot in walk direction).  All circle arithmetic below is modulo the
# circle's slot count.


def _circle_point(surface: PolygonalSurface, circle: Sequence[Slot], theta):
    length = len(circle)
    theta = theta % length
    k = int(theta)
    u = theta - k
    slot = circle[k]
    t = u if surface.slot_sign(slot) > 0 else 1 - u
    return slot, as_param(t)


def _gap_point(lo, hi, length):
    """Canonical interior point of a boundary gap, never on a corner.

    The midpoint when possible, else the first of lo + span/k for
    k = 3, 4, ... whose walk coordinate is not an integer.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if hi <= lo:
        hi += length
    span = hi - lo
    for k in range(2, length + int(span) + 4):
        cand = lo + span / k
        if cand != int(cand):
            return cand % length
    raise AssertionError("gap has no corner-free interior point")


def make_boundary_parallel_sigma(
    surface: PolygonalSurface,
    boundary_data: Mapping[int, Sequence[Fraction]],
    straddle_choices: Mapping[int, int] | None = None,
) -> CurveSystem:
    """Arc system in which every arc cuts off a half disk around one point.

    ``boundary_data`` maps each boundary circle index to the strictly
    increasing walk coordinates of the dividing-set points on it.  Arc
    endpoints land at the midpoints of the gaps between consecutive
    points, so they alternate with the points by construction.  The
    straddle choice picks which alternation class of points gets the
    half disks; arcs are listed straddled-point first.
    """
    circles = surface.boundary_cycles()
    if len(surface.faces) != 1:
        raise UnsupportedSurface("arc construction needs a one-face presentation")
    if not circles:
        raise UnsupportedSurface("surface has no boundary to anchor arcs on")
    choices = dict(straddle_choices or {})
    arcs = []
    for i, circle in enumerate(circles):
        points = [Fraction(p) for p in boundary_data.get(i, ())]
        if not points:
            raise NoIntersections(f"boundary circle {i} misses the dividing set")
        if sorted(points) != points or len(set(points)) != len(points):
            raise ValueError(f"circle {i}: points must be strictly increasing")
        if len(points) % 2 != 0:
            raise InconsistentOrientations(
                f"circle {i} carries {len(points)} dividing-set points; "
                "boundary-parallel arcs need an even count"
            )
        length = len(circle)
        n = len(points)
        mids = [
            _gap_point(points[j], points[(j + 1) % n], length) for j in range(n)
        ]
        start = choices.get(i, 0) % n
        for j in range(start, start + n, 2):
            lo = mids[(j - 1) % n]
            hi = mids[j % n]
            sl, tl = _circle_point(surface, circle, lo)
            sh, th = _circle_point(surface, circle, hi)
            arcs.append(
                ArcComponent(
                    BoundaryPoint(surface.slot_edge(sl), tl),
                    (),
                    BoundaryPoint(surface.slot_edge(sh), th),
                )
            )
    return CurveSystem(surface, closed=(), arcs=tuple(arcs), floats=())


def _noncrossing_matchings(items: Sequence):
    """All non-crossing perfect matchings of points in cyclic order."""
    if not items:
        yield ()
        return
    first = items[0]
    for j in range(1, len(items), 2):
        for inner in _noncrossing_matchings(items[1:j]):
            for outer in _noncrossing_matchings(items[j + 1 :]):
                yield ((first, items[j]),) + inner + outer


def enumerate_sigmas(
    surface: PolygonalSurface, boundary_data: Mapping[int, Sequence[Fraction]]
) -> tuple[CurveSystem, ...]:
    """Every non-crossing arc system with the forced endpoint positions.

    Endpoints are the gap midpoints determined by ``boundary_data``,
    the same rule :func:`make_boundary_parallel_sigma` uses, so the
    boundary-parallel systems appear among the results.  Arcs are
    straight chords of the one-face presentation; on the annulus this
    enumerates the seam-avoiding representatives.
    """
    if surface.kind not in ("disk", "rectangle", "annulus"):
        raise UnsupportedSurface(
            f"sigma enumeration supports disks and annuli, not {surface.kind!r}"
        )
    circles = surface.boundary_cycles()
    endpoint_sets = []
    for i, circle in enumerate(circles):
        points = [Fraction(p) for p in boundary_data.get(i, ())]
        if not points:
            raise NoIntersections(f"boundary circle {i} misses the dividing set")
        if sorted(points) != points or len(set(points)) != len(points):
            raise ValueError(f"circle {i}: points must be strictly increasing")
        length = len(circle)
        n = len(points)
        mids = sorted(
            _gap_point(points[j], points[(j + 1) % n], length) for j in range(n)
        )
        endpoint_sets.append(mids)
    total = sum(len(m) for m in endpoint_sets)
    if total % 2 != 0:
        raise InconsistentOrientations(
            "odd number of forced endpoints; no arc system exists"
        )

    # Cyclic order around the face chart: for each circle, points come in
    # walk order; the face of a standard disk or annulus lists its
    # boundary slots so that circle 0 then circle 1 is the chart order.
    face = next(iter(surface.faces))
    word = surface.faces[face]
    chart_pts = []
    for i, circle in enumerate(circles):
        for theta in endpoint_sets[i]:
            slot, t = _circle_point(surface, circle, theta)
            u = surface.local_param(slot, t)
            chart_pts.append(((slot.index, u), (i, theta)))
    chart_pts.sort(key=lambda p: p[0])
    ordered = [p[1] for p in chart_pts]

    out = []
    for matching in _noncrossing_matchings(ordered):
        arcs = []
        for (ia, tha), (ib, thb) in matching:
            sa, ta = _circle_point(surface, circles[ia], tha)
            sb, tb = _circle_point(surface, circles[ib], thb)
            arcs.append(
                ArcComponent(
                    BoundaryPoint(surface.slot_edge(sa), ta),
                    (),
                    BoundaryPoint(surface.slot_edge(sb), tb),
                )
            )
        out.append(CurveSystem(surface, closed=(), arcs=tuple(arcs), floats=()))
    return tuple(out)


# -- splitting surfaces --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SplittingSurface:
    """Declaration of a convex splitting.

    ``cut_cycles`` lists, per boundary circle of ``surface``, the glued
    edges of the host boundary that the circle is attached to, in walk
    order.  ``correspondence`` maps each boundary edge of ``surface``
    to its cut edge.  ``sigma`` may be None in explorer templates.
    """

    piece: str
    surface: PolygonalSurface
    sigma: CurveSystem | None
    cut_cycles: tuple[tuple[str, ...], ...]
    correspondence: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(
            self, "cut_cycles", tuple(tuple(c) for c in self.cut_cycles)
        )
        object.__setattr__(self, "correspondence", dict(self.correspondence))

    def with_sigma(self, sigma: CurveSystem) -> "SplittingSurface":
        return SplittingSurface(
            self.piece, self.surface, sigma, self.cut_cycles, self.correspondence
        )


@dataclass(frozen=True)
class SplitResult:
    structure: ConvexStructure
    euler_pair: tuple[int, int]
    new_pieces: tuple[str, ...]
    raw_systems: Mapping[str, CurveSystem]
    plus_faces: tuple[str, ...]
    minus_faces: tuple[str, ...]


def _fresh_label(base: str, taken: set[str]) -> str:
    name = base
    while name in taken:
        name += "*"
    taken.add(name)
    return name


def _walk_free(faces: Mapping[str, tuple[str, ...]], start):
    """Boundary walk over a bare faces dict (no surface construction)."""
    sides: dict[str, list] = {}
    for f, word in faces.items():
        for i, letter in enumerate(word):
            sides.setdefault(label_of(letter), []).append((f, i))

    def next_free(pos):
        f, i = pos
        for _ in range(sum(len(w) for w in faces.values()) + 1):
            i = (i + 1) % len(faces[f])
            letter = faces[f][i]
            occ = sides[label_of(letter)]
            if len(occ) == 1:
                return (f, i)
            f, i = occ[0] if occ[1] == (f, i) else occ[1]
        raise AssertionError("free-slot walk failed to close")

    walk = [start]
    cur = next_free(start)
    while cur != start:
        walk.append(cur)
        cur = next_free(cur)
    return walk


class _CircleData:
    """Coordinates of one cut circle on both sides of the cut."""

    def __init__(self, index, labels, star, plus_positions, minus_walk):
        self.index = index
        self.labels = labels
        self.star = star
        self.plus_positions = plus_positions  # cut label -> walk position
        self.minus_walk = minus_walk  # walk position -> starred label
        self.minus_positions = {lab: i for i, lab in enumerate(minus_walk)}
        self.length = len(labels)


def _validate_cut(host: PolygonalSurface, cut: SplittingSurface):
    s = cut.surface
    cut_labels = [lab for cyc in cut.cut_cycles for lab in cyc]
    if len(set(cut_labels)) != len(cut_labels):
        raise BadCutPresentation("cut cycles reuse an edge")
    for lab in cut_labels:
        if lab not in host.glued:
            raise BadCutPresentation(f"cut edge {lab!r} is not glued in the host")
    if len(s.faces) != 1:
        raise BadCutPresentation("splitting surface needs a one-face presentation")
    if s.num_boundary_components != len(cut.cut_cycles):
        raise BadCutPresentation(
            "cut cycle count does not match the boundary of the surface"
        )
    corr = dict(cut.correspondence)
    if set(corr) != set(s.boundary_edges):
        raise BadCutPresentation(
            "correspondence must cover exactly the boundary edges of the surface"
        )
    if sorted(corr.values()) != sorted(cut_labels):
        raise BadCutPresentation(
            "correspondence must target exactly the cut edges"
        )
    for e in s.boundary_edges:
        if s.slot_sign(s.boundary_edges[e]) < 0:
            raise BadCutPresentation(
                f"boundary edge {e!r} occurs negatively; "
                "present the surface with positive boundary letters"
            )
    # Each boundary circle of the surface must trace its cut cycle in order.
    s_circles = s.boundary_cycles()
    for i, cyc in enumerate(cut.cut_cycles):
        walk_labels = [corr[s.slot_edge(sl)] for sl in s_circles[i]]
        if len(walk_labels) != len(cyc):
            raise BadCutPresentation(f"circle {i} has the wrong edge count")
        if len(cyc) > 0:
            rotations = [
                tuple(cyc[(k + r) % len(cyc)] for k in range(len(cyc)))
                for r in range(len(cyc))
            ]
            if tuple(walk_labels) not in rotations:
                raise BadCutPresentation(
                    f"circle {i} does not trace its cut cycle in order; "
                    "check orientation of the correspondence"
                )
    return corr


def _sigma_ok(cut: SplittingSurface):
    sigma = cut.sigma
    if sigma is None:
        raise BadCutPresentation("splitting surface has no arc system attached")
    if sigma.surface.faces != cut.surface.faces:
        raise BadCutPresentation("arc system lives on a different surface")
    if sigma.closed or sigma.floats:
        raise BadCutPresentation("the arc system must consist of arcs only")
    for arc in sigma.arcs:
        if arc.crossings:
            raise BadCutPresentation("arcs must be single chords of the face")
    return sigma


def split(
    convex: ConvexStructure,
    cut: SplittingSurface,
    rounding: str = "right",
    _coherent: bool = True,
) -> SplitResult:
    """Cut a convex piece along a surface and round the corners.

    ``rounding`` fixes the direction in which dividing-curve ends slide
    along the cut circles to meet the arc system: "right" joins each
    end to the next arc endpoint in boundary-walk order on every
    circle, "left" to the previous one.  ``_coherent=False`` drops the
    walk convention on the lower copy and joins toward increasing edge
    parameter there instead; it exists so tests can pin that the
    uniform convention is load-bearing.
    """
    if rounding not in ("right", "left"):
        raise ValueError(f"unknown rounding direction {rounding!r}")
    piece = convex.piece(cut.piece)
    host = piece.surface
    if piece.analysis is None or piece.gamma.num_components == 0:
        raise EmptyOnComponent(
            f"piece {cut.piece!r} has no dividing set; nothing to split along"
        )
    if piece.gamma.arcs:
        raise BadCutPresentation("host dividing set must be closed")
    corr = _validate_cut(host, cut)
    sigma = _sigma_ok(cut)
    cut_set = {lab for cyc in cut.cut_cycles for lab in cyc}

    for fl in piece.gamma.floats:
        f, sl, _ = fl.probe
        if label_of(host.faces[f][sl]) in cut_set:
            raise BadCutPresentation(
                "a floating circle probes a cut edge; move it off the cut first"
            )

    taken = {label_of(l) for w in host.faces.values() for l in w}
    taken |= {label_of(l) for w in cut.surface.faces.values() for l in w}
    star = {e: _fresh_label(e + "*", taken) for cyc in cut.cut_cycles for e in cyc}

    # Host faces with the negative side of every cut edge renamed.
    cut_faces: dict[str, tuple[str, ...]] = {}
    for f, word in host.faces.items():
        out = []
        for letter in word:
            lab = label_of(letter)
            if lab in cut_set and sign_of(letter) < 0:
                out.append("-" + star[lab])
            else:
                out.append(letter)
        cut_faces[f] = tuple(out)

    # Walk both copies of every cut circle on the opened-up host.
    circles = []
    for i, cyc in enumerate(cut.cut_cycles):
        plus_start = host.glued[cyc[0]][0]
        plus_walk = _walk_free(cut_faces, (plus_start.face, plus_start.index))
        plus_labels = [label_of(cut_faces[f][k]) for f, k in plus_walk]
        if plus_labels != list(cyc) or any(
            sign_of(cut_faces[f][k]) < 0 for f, k in plus_walk
        ):
            raise BadCutPresentation(
                f"cut cycle {i} does not match the positive boundary walk "
                f"(walk saw {plus_labels})"
            )
        minus_start = host.glued[cyc[0]][1]
        minus_walk_slots = _walk_free(cut_faces, (minus_start.face, minus_start.index))
        minus_labels = [label_of(cut_faces[f][k]) for f, k in minus_walk_slots]
        expected = [star[cyc[0]]] + [star[e] for e in reversed(cyc[1:])]
        if minus_labels != expected or any(
            sign_of(cut_faces[f][k]) > 0 for f, k in minus_walk_slots
        ):
            raise BadCutPresentation(
                f"the two sides of cut cycle {i} are not mirror walks "
                f"(walk saw {minus_labels})"
            )
        circles.append(
            _CircleData(
                i,
                list(cyc),
                star,
                {lab: k for k, lab in enumerate(cyc)},
                minus_labels,
            )
        )
    circle_of_label = {}
    for cd in circles:
        for lab in cd.labels:
            circle_of_label[lab] = cd

    # The two copies of the splitting surface.
    s = cut.surface
    sface = next(iter(s.faces))
    mirrored = mirror_surface(s)
    face_taken = set(host.faces)

    def fresh_face(base):
        name = base
        while name in face_taken:
            name += "'"
        face_taken.add(name)
        return name

    plus_face = fresh_face(sface + "+")
    minus_face = fresh_face(sface + "-")

    _internal_names: dict = {}

    def rename(word, boundary_to, internal_suffix):
        out = []
        for letter in word:
            lab = label_of(letter)
            sgn = "-" if sign_of(letter) < 0 else ""
            if lab in corr:
                out.append(sgn + boundary_to(lab))
            else:
                key = (lab, internal_suffix)
                if key not in _internal_names:
                    _internal_names[key] = _fresh_label(lab + internal_suffix, taken)
                out.append(sgn + _internal_names[key])
        return tuple(out)
    plus_word = rename(mirrored.faces[sface], lambda e: corr[e], "+")
    minus_word = rename(s.faces[sface], lambda e: star[corr[e]], "-")
    new_faces = dict(cut_faces)
    new_faces[plus_face] = plus_word
    new_faces[minus_face] = minus_word

    # Gamma events on the circles.  Each crossing of a cut edge leaves one
    # strand end on each copy.
    gamma = piece.gamma
    g_events = {}  # (copy, comp_key, idx) -> (circle, theta)
    comp_cut_idx: dict[tuple, list[int]] = {}
    for ci, comp in enumerate(gamma.closed):
        key = ("closed", ci)
        for k, cr in enumerate(comp.crossings):
            if cr.edge not in cut_set:
                continue
            comp_cut_idx.setdefault(key, []).append(k)
            cd = circle_of_label[cr.edge]
            g_events[("+", key, k)] = (cd, cd.plus_positions[cr.edge] + cr.t)
            g_events[("-", key, k)] = (
                cd,
                cd.minus_positions[star[cr.edge]] + (1 - cr.t),
            )

    # Sigma endpoint events, mapped through the correspondence.  Edge
    # parameters carry over directly because both the surface boundary
    # and the positive copy of the circle are walked in increasing
    # parameter.
    s_circles = s.boundary_cycles()
    edge_walk_pos = {}
    for i, circ in enumerate(s_circles):
        for k, sl in enumerate(circ):
            edge_walk_pos[s.slot_edge(sl)] = (i, k)
    s_events = {}  # (copy, arc_idx, end) -> (circle, theta)
    for ai, arc in enumerate(sigma.arcs):
        for end, bp in ((0, arc.start), (1, arc.end)):
            e = corr[bp.edge]
            cd = circle_of_label[e]
            s_events[("+", ai, end)] = (cd, cd.plus_positions[e] + bp.t)
            s_events[("-", ai, end)] = (
                cd,
                cd.minus_positions[star[e]] + (1 - bp.t),
            )

    # Alternation along every circle (checked on the positive copy; the
    # lower copy is its mirror).
    for cd in circles:
        merged = []
        for (copy, key, k), (c2, th) in g_events.items():
            if copy == "+" and c2 is cd:
                merged.append((th, "g"))
        if not merged:
            raise AlternationViolation(
                f"cut circle {cd.index} misses the dividing set"
            )
        for (copy, ai, end), (c2, th) in s_events.items():
            if copy == "+" and c2 is cd:
                merged.append((th, "s"))
        merged.sort()
        thetas = [th for th, _ in merged]
        if len(set(thetas)) != len(thetas):
            raise AlternationViolation(
                f"coincident points on cut circle {cd.index}"
            )
        kinds = [kind for _, kind in merged]
        if any(kinds[i] == kinds[(i + 1) % len(kinds)] for i in range(len(kinds))):
            raise AlternationViolation(
                f"arc endpoints and dividing-set points do not alternate "
                f"on cut circle {cd.index}"
            )

    # Join each gamma end to the adjacent sigma endpoint.
    joins = {}  # (copy, comp_key, idx) -> join record
    for cd in circles:
        for copy in ("+", "-"):
            gs = sorted(
                (th, node)
                for node, (c2, th) in g_events.items()
                if node[0] == copy and c2 is cd
            )
            ss = sorted(
                (th, node)
                for node, (c2, th) in s_events.items()
                if node[0] == copy and c2 is cd
            )
            forward = rounding == "right"
            if not _coherent and copy == "-":
                forward = not forward
            length = cd.length
            for th_g, gnode in gs:
                if forward:
                    cands = [
                        (th if th > th_g else th + length, node) for th, node in ss
                    ]
                    th_s, snode = min(cands)
                    wall = Fraction(int(th_g) + 1)
                    th_x = (th_g + min(th_s, wall)) / 2
                else:
                    cands = [
                        (th if th < th_g else th - length, node) for th, node in ss
                    ]
                    th_s, snode = max(cands)
                    wall = Fraction(int(th_g))
                    th_x = (th_g + max(th_s, wall)) / 2
                th_x %= length
                k = int(th_x)
                u = th_x - k
                if copy == "+":
                    lab = cd.labels[k]
                    t = u
                    into_cap = Crossing("-" + lab, t)
                    into_host = Crossing(lab, t)
                else:
                    lab = cd.minus_walk[k]
                    t = 1 - u
                    into_cap = Crossing(lab, t)
                    into_host = Crossing("-" + lab, t)
                joins[gnode] = (snode, into_cap, into_host, th_x)

    # Strand pieces of the old dividing curves between cut crossings.
    strands = []
    intact = []
    for ci, comp in enumerate(gamma.closed):
        key = ("closed", ci)
        idxs = comp_cut_idx.get(key)
        if not idxs:
            intact.append(comp)
            continue
        n = len(comp.crossings)
        for j, k in enumerate(idxs):
            k_next = idxs[(j + 1) % len(idxs)]
            payload = []
            p = (k + 1) % n
            while p != k_next:
                payload.append(comp.crossings[p])
                p = (p + 1) % n
            spec_here = comp.crossings[k].spec
            spec_next = comp.crossings[k_next].spec
            start_copy = "+" if sign_of(spec_here) > 0 else "-"
            end_copy = "-" if sign_of(spec_next) > 0 else "+"
            strands.append(
                ((start_copy, key, k), tuple(payload), (end_copy, key, k_next))
            )

    # Stitch strands, joins, and arc chords into closed components.
    adjacency: dict = {}
    edges = []
    for gnode, (snode, into_cap, into_host, _) in joins.items():
        edges.append(("join", gnode, snode, into_cap, into_host))
    for ai in range(len(sigma.arcs)):
        for copy in ("+", "-"):
            edges.append(("chord", (copy, ai, 0), (copy, ai, 1), None, None))
    for start, payload, end in strands:
        edges.append(("strand", start, end, payload, None))
    for idx, (kind, a, b, *_rest) in enumerate(edges):
        adjacency.setdefault(a, []).append(idx)
        adjacency.setdefault(b, []).append(idx)
    for node, inc in adjacency.items():
        if len(inc) != 2:
            raise AssertionError(f"junction node {node} has degree {len(inc)}")

    visited = [False] * len(edges)
    new_components = []
    for start_idx, edge in enumerate(edges):
        if visited[start_idx] or edge[0] != "join":
            continue
        crossings = []
        idx = start_idx
        node = edge[1]  # walk from the gamma side into the cap
        while not visited[idx]:
            visited[idx] = True
            kind, a, b, x, y = edges[idx]
            forward = node == a
            other = b if forward else a
            if kind == "join":
                crossings.append(x if forward else y)
            elif kind == "strand":
                if forward:
                    crossings.extend(x)
                else:
                    crossings.extend(Crossing(flip(c.spec), c.t) for c in reversed(x))
            node = other
            nxt = [e for e in adjacency[node] if e != idx]
            idx = nxt[0] if nxt else idx
        new_components.append(ClosedComponent(tuple(crossings)))

    # Partition the faces of the new boundary into connected pieces.
    uf = UnionFind()
    for f in new_faces:
        uf.find(f)
    sides: dict[str, list[str]] = {}
    for f, word in new_faces.items():
        for letter in word:
            sides.setdefault(label_of(letter), []).append(f)
    for occ in sides.values():
        if len(occ) == 2:
            uf.union(occ[0], occ[1])
    groups = sorted(uf.classes(new_faces), key=lambda g: sorted(g)[0])
    piece_surfaces = []
    face_to_piece = {}
    for gi, group in enumerate(groups):
        surf = PolygonalSurface({f: new_faces[f] for f in group})
        piece_surfaces.append(surf)
        for f in group:
            face_to_piece[f] = gi

    chi_new = sum(p.euler_characteristic for p in piece_surfaces)
    chi_expected = host.euler_characteristic + 2 * s.euler_characteristic
    assert chi_new == chi_expected, "euler bookkeeping broke in the cut"

    def home_face(spec):
        # face of the slot the first crossing enters
        for f, word in new_faces.items():
            for letter in word:
                if letter == spec:
                    return f
        raise AssertionError(f"no slot for spec {spec!r}")

    raw_closed: dict[int, list] = {i: [] for i in range(len(groups))}
    for comp in new_components:
        gi = face_to_piece[home_face(comp.crossings[0].spec)]
        raw_closed[gi].append(comp)
    for comp in intact:
        gi = face_to_piece[home_face(comp.crossings[0].spec)]
        raw_closed[gi].append(comp)
    raw_floats: dict[int, list] = {i: [] for i in range(len(groups))}
    for fl in gamma.floats:
        raw_floats[face_to_piece[fl.face]].append(fl)

    raw_systems = {}
    new_names = []
    new_pieces = []
    for gi, surf in enumerate(piece_surfaces):
        name = f"{cut.piece}:{gi}"
        raw = CurveSystem(
            surf, closed=tuple(raw_closed[gi]), floats=tuple(raw_floats[gi])
        )
        raw_systems[name] = raw
        final = raw.normalize()
        analysis = analyze_dividing_set(final)
        new_pieces.append(ConvexBoundary(name, surf, final, analysis))
        new_names.append(name)

    euler_pair = _sigma_euler_pair(
        piece, circles, star, joins, sigma, plus_face, piece_surfaces,
        face_to_piece, raw_systems, new_names, rounding,
    )

    structure = convex.replace_piece(cut.piece, *new_pieces)
    return SplitResult(
        structure=structure,
        euler_pair=euler_pair,
        new_pieces=tuple(new_names),
        raw_systems=raw_systems,
        plus_faces=(plus_face,),
        minus_faces=(minus_face,),
    )


def _sigma_euler_pair(
    piece,
    circles,
    star,
    joins,
    sigma,
    plus_face,
    piece_surfaces,
    face_to_piece,
    raw_systems,
    new_names,
    rounding,
):
    """Euler characteristics of the two sides of the arc system.

    Measured on the upper copy of the splitting surface: the chart cells
    of the cap face, merged across its internal gluings, are the
    complementary regions of the arc system.  Each region inherits the
    sign of the old boundary region its circle gaps face, read just
    past the old dividing-set point so corner rounding cannot have
    moved it.
    """
    gi = face_to_piece[plus_face]
    surf = piece_surfaces[gi]
    raw = raw_systems[new_names[gi]]
    charts = build_charts([("n", raw)])
    chart = charts[plus_face]

    word = surf.faces[plus_face]
    old_host = piece.surface
    old_analysis = piece.analysis
    star_inv = {v: k for k, v in star.items()}
    circle_by_label = {}
    for cd in circles:
        for lab in cd.labels:
            circle_by_label[lab] = cd

    old_gammas = {}  # circle index -> sorted old crossing thetas on + copy
    for cd in circles:
        pts = []
        for comp in piece.gamma.closed:
            for cr in comp.crossings:
                if cr.edge in cd.plus_positions:
                    pts.append(cd.plus_positions[cr.edge] + cr.t)
        old_gammas[cd.index] = sorted(pts)

    def gap_sign(gap):
        letter = word[gap.slot]
        lab = label_of(letter)
        if lab not in circle_by_label:
            return None  # internal edge of the splitting surface
        cd = circle_by_label[lab]
        pos = cd.plus_positions[lab]
        # cap slot runs against the circle walk: u = 1 - t
        th_lo = pos + 1 - gap.u_hi
        th_hi = pos + 1 - gap.u_lo
        inside = [
            g for g in old_gammas[cd.index] if th_lo < g < th_hi
        ]
        if rounding == "right":
            w = (th_lo + min(inside)) / 2 if inside else (th_lo + th_hi) / 2
        else:
            w = (max(inside) + th_hi) / 2 if inside else (th_lo + th_hi) / 2
        w %= cd.length
        k = int(w)
        lab_w = cd.labels[k]
        t = w - k
        plus_slot = old_host.glued[lab_w][0]
        region = old_analysis.decomposition.region_at(
            plus_slot.face, plus_slot.index, t
        )
        return old_analysis.signs[region]

    cells = chart.cells()
    cell_gaps: dict[int, list] = {i: [] for i in range(len(cells))}
    gaps = chart.gaps()
    for cell in cells:
        for side in cell.loop:
            if side[0] == "gap":
                cell_gaps[cell.index].append(gaps[side[1]])

    # merge cells across internal gluings of the cap (full, item-free slots)
    merge = UnionFind()
    for i in range(len(cells)):
        merge.find(i)
    glue_count = 0
    internal = {}
    for lab, (pos_slot, neg_slot) in surf.glued.items():
        if pos_slot.face == plus_face and neg_slot.face == plus_face:
            internal[lab] = (pos_slot, neg_slot)
    gap_by_slot: dict[int, list] = {}
    for gap in gaps:
        gap_by_slot.setdefault(gap.slot, []).append(gap)
    cell_of_gap = {}
    for cell in cells:
        for side in cell.loop:
            if side[0] == "gap":
                cell_of_gap[side[1]] = cell.index
    for lab, (pos_slot, neg_slot) in sorted(internal.items()):
        for slot in (pos_slot, neg_slot):
            if len(gap_by_slot.get(slot.index, [])) != 1:
                raise BadCutPresentation(
                    f"internal edge {lab!r} of the splitting surface is "
                    "not free of curve points"
                )
        merge.union(
            cell_of_gap[gap_by_slot[pos_slot.index][0].index],
            cell_of_gap[gap_by_slot[neg_slot.index][0].index],
        )
        glue_count += 1

    region_cells: dict = {}
    for i in range(len(cells)):
        region_cells.setdefault(merge.find(i), []).append(i)

    chi_plus = 0
    chi_minus = 0
    for root, members in sorted(region_cells.items(), key=lambda kv: min(kv[1])):
        signs = set()
        for ci in members:
            for gap in cell_gaps[ci]:
                sgn = gap_sign(gap)
                if sgn is not None:
                    signs.add(sgn)
        assert len(signs) == 1, "inconsistent signs around one arc-system region"
        chi = len(members) - sum(
            1
            for lab, (p, q) in internal.items()
            if cell_of_gap[gap_by_slot[p.index][0].index] in members
        )
        if signs.pop() > 0:
            chi_plus += chi
        else:
            chi_minus += chi
    return (chi_plus, chi_minus)


# -- verdicts and exploration ---------------------------------------------------


def tight_ball_check(convex: ConvexStructure) -> bool:
    """True when the single boundary sphere carries one dividing curve."""
    if len(convex.boundary) != 1:
        raise NotABall("the check needs a single boundary piece")
    piece = convex.boundary[0]
    surf = piece.surface
    if not (surf.is_closed and surf.euler_characteristic == 2):
        raise NotABall(
            "boundary is not a sphere; use the Giroux criterion instead"
        )
    return piece.gamma.num_components == 1


@dataclass(frozen=True)
class ExplorationLeaf:
    choices: tuple[int, ...]
    euler_pairs: tuple[tuple[int, int], ...]
    verdict: str


@dataclass(frozen=True)
class DecompositionReport:
    leaves: tuple[ExplorationLeaf, ...]
    candidate_count: int
    pruned: int
    indistinguishable: tuple[tuple[int, ...], ...]


def _gamma_data_on_surface(piece: ConvexBoundary, template: SplittingSurface):
    """Dividing-set points on each boundary circle of the splitting surface."""
    corr_inv = {v: k for k, v in template.correspondence.items()}
    s = template.surface
    pos = {}
    for i, circ in enumerate(s.boundary_cycles()):
        for k, sl in enumerate(circ):
            pos[s.slot_edge(sl)] = (i, k)
    data: dict[int, list] = {}
    for comp in piece.gamma.closed:
        for cr in comp.crossings:
            if cr.edge in corr_inv:
                i, k = pos[corr_inv[cr.edge]]
                data.setdefault(i, []).append(k + cr.t)
    return {i: sorted(v) for i, v in data.items()}


def _leaf_verdict(state: ConvexStructure) -> str:
    for piece in state.boundary:
        surf = piece.surface
        if not (surf.is_closed and surf.euler_characteristic == 2):
            return "indeterminate"
        if piece.gamma.num_components != 1:
            return "pruned-ball"
    return "tight-candidate"


def explore(
    convex: ConvexStructure,
    script: Sequence[SplittingSurface],
    rounding: str = "right",
) -> DecompositionReport:
    """Depth-first enumeration of arc choices along a splitting script.

    Branches die as soon as any freshly cut piece fails the Giroux
    criterion; surviving branches are judged at the end of the script
    by the tight-ball condition on every piece.  Results are reported
    in enumeration order, so identical inputs give identical reports.
    """
    leaves: list[ExplorationLeaf] = []

    def walk(state: ConvexStructure, depth: int, choices, pairs):
        if depth == len(script):
            leaves.append(ExplorationLeaf(choices, pairs, _leaf_verdict(state)))
            return
        template = script[depth]
        piece = state.piece(template.piece)
        data = _gamma_data_on_surface(piece, template)
        for j, sig in enumerate(enumerate_sigmas(template.surface, data)):
            result = split(state, template.with_sigma(sig), rounding=rounding)
            new_pairs = pairs + (result.euler_pair,)
            bad = any(
                not giroux_criterion(result.structure.piece(nm).gamma)
                for nm in result.new_pieces
            )
            if bad:
                leaves.append(
                    ExplorationLeaf(choices + (j,), new_pairs, "pruned-giroux")
                )
                continue
            walk(result.structure, depth + 1, choices + (j,), new_pairs)

    walk(convex, 0, (), ())
    candidates = [
        i for i, leaf in enumerate(leaves) if leaf.verdict == "tight-candidate"
    ]
    pruned = sum(1 for leaf in leaves if leaf.verdict.startswith("pruned"))
    by_pairs: dict = {}
    for i in candidates:
        by_pairs.setdefault(leaves[i].euler_pairs, []).append(i)
    flagged = tuple(
        tuple(group) for group in by_pairs.values() if len(group) > 1
    )
    return DecompositionReport(
        leaves=tuple(leaves),
        candidate_count=len(candidates),
        pruned=pruned,
        indistinguishable=flagged,
    )
