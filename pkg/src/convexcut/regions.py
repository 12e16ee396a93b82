"""Complementary regions of a curve system, coloring, and isolation tests.

Cutting the surface along a curve system leaves regions.  Each base
region is assembled as a PolygonalSurface of its own: the cells of the
per-face charts are its faces, chart gaps along the same stretch of a
glued edge are re-glued, and curve material becomes boundary.  That
reuses the exact Euler/boundary/genus machinery instead of ad hoc
counting.

Floating circles are layered on top: a chain of k+1 nested circles
punches one hole in its host region (chi drops by one), inserts k
annular regions between consecutive circles, and one disk inside the
deepest circle.

The two-coloring of regions (opposite signs across every piece of the
system) is what makes a system a dividing configuration; failure raises
NotDividing.  Euler counts of the colored sides and the isolation test
for a second transverse system live here too.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arrangement import FaceChart
from .curves import CurveSystem, build_charts
from .errors import (
    EmptyOnComponent,
    IsArc,
    NotDividing,
    NotTransverse,
)
from .surfaces import PolygonalSurface, Slot, UnionFind


@dataclass
class Region:
    index: int
    kind: str  # "base", "ring", or "core"
    euler: int
    touches_boundary: bool
    cells: tuple = ()
    surface: PolygonalSurface | None = None
    piece_sides: dict = field(default_factory=dict)  # piece key -> side count
    components: set = field(default_factory=set)
    chains: tuple = ()  # probes of float chains hosted by this base region

    @property
    def is_disk(self) -> bool:
        return self.euler == 1 and not self.touches_boundary


def _piece_str(key) -> str:
    prefix, comp, idx = key
    return f"{prefix}.{comp[0]}{comp[1]}.{idx}"


class RegionDecomposition:
    """Regions of the complement of one system (optionally overlaid).

    With ``overlay`` given, the decomposition is of the complement of
    both systems together; region surfaces are not built in that mode
    (the isolation test only needs incidence data).
    """

    def __init__(self, system: CurveSystem, overlay: CurveSystem | None = None):
        self.system = system
        self.overlay = overlay
        surface = system.surface
        entries = [("g", system)]
        if overlay is not None:
            if overlay.arcs:
                raise ValueError("the transverse family may not contain arcs")
            _check_transverse(system, overlay)
            entries.append(("c", overlay))
        self.charts = build_charts(entries)
        self._systems = dict(entries)

        # interval structure of every glued edge: crossing parameters
        self._edge_cuts: dict[str, list[Fraction]] = {}
        for label in surface.glued:
            cuts = [
                t
                for _, sys_ in entries
                for t, kind, _ in sys_.points_on_edge(label)
                if kind == "crossing"
            ]
            self._edge_cuts[label] = sorted(cuts)

        self._cells: dict[str, list] = {f: ch.cells() for f, ch in self.charts.items()}
        uf = UnionFind()
        face_order = list(surface.faces)
        for face in face_order:
            for cell in self._cells[face]:
                uf.find((face, cell.index))
        for label, slots in surface.glued.items():
            pos, neg = slots
            cuts = self._edge_cuts[label]
            bounds = [Fraction(0)] + cuts + [Fraction(1)]
            for k in range(len(bounds) - 1):
                lo, hi = bounds[k], bounds[k + 1]
                a = self._cell_on(pos, lo, hi)
                b = self._cell_on(neg, lo, hi)
                uf.union(a, b)

        all_cells = [
            (face, cell.index) for face in face_order for cell in self._cells[face]
        ]
        self.region_of_cell: dict = {}
        base_classes = uf.classes(all_cells)
        self.regions: list[Region] = []
        for cls in base_classes:
            region = Region(len(self.regions), "base", 0, False, cells=tuple(cls))
            for key in cls:
                self.region_of_cell[key] = region.index
            self.regions.append(region)

        self._collect_incidence()
        if overlay is None:
            for region in self.regions:
                region.surface = self._build_region_surface(region)
                region.euler = region.surface.euler_characteristic
        self._layer_floats()

    # -- cell lookup helpers --------------------------------------------------

    def _gaps_of(self, face: str):
        return self.charts[face].gaps()

    def _cell_on(self, slot: Slot, lo: Fraction, hi: Fraction) -> tuple:
        """Cell adjacent to the open (lo, hi) stretch of slot's edge."""
        chart = self.charts[slot.face]
        sign = self.system.surface.slot_sign(slot)
        u_lo, u_hi = (lo, hi) if sign > 0 else (1 - hi, 1 - lo)
        for gap in chart.gaps():
            if gap.slot != slot.index:
                continue
            glo = max(gap.u_lo, u_lo)
            ghi = min(gap.u_hi, u_hi)
            if glo < ghi:
                return (slot.face, chart.cell_of_gap(gap.index))
        raise AssertionError(f"no gap found on {slot} over ({lo}, {hi})")

    def _gap_edge_interval(self, face: str, gap) -> tuple[str, int] | None:
        """(edge, interval index) when the gap lies on a glued edge."""
        surface = self.system.surface
        slot = Slot(face, gap.slot)
        edge = surface.slot_edge(slot)
        if edge not in surface.glued:
            return None
        sign = surface.slot_sign(slot)
        t_lo, t_hi = (
            (gap.u_lo, gap.u_hi) if sign > 0 else (1 - gap.u_hi, 1 - gap.u_lo)
        )
        mid = (t_lo + t_hi) / 2
        return (edge, bisect_left(self._edge_cuts[edge], mid))

    # -- incidence: pieces, boundary contact, hosted chains ---------------------

    def _collect_incidence(self):
        surface = self.system.surface
        self.piece_regions: dict = {}
        for face in surface.faces:
            chart = self.charts[face]
            gaps = chart.gaps()
            for cell in self._cells[face]:
                region = self.regions[self.region_of_cell[(face, cell.index)]]
                for side in cell.loop:
                    if side[0] == "gap":
                        gap = gaps[side[1]]
                        if self._gap_edge_interval(face, gap) is None:
                            region.touches_boundary = True
                    else:
                        _, key, r, direction = side
                        region.piece_sides[(key, r)] = (
                            region.piece_sides.get((key, r), 0) + 1
                        )
                        region.components.add((key[0], key[1]))
                        lr = self.piece_regions.setdefault((key, r), [None, None])
                        lr[0 if direction > 0 else 1] = region.index

    # -- region surfaces -----------------------------------------------------

    def _build_region_surface(self, region: Region) -> PolygonalSurface:
        surface = self.system.surface
        faces: dict[str, tuple[str, ...]] = {}
        for face, cell_index in region.cells:
            chart = self.charts[face]
            gaps = chart.gaps()
            cell = self._cells[face][cell_index]
            letters: list[str] = []
            run: tuple | None = None
            for side in cell.loop:
                if side[0] == "gap":
                    gap = gaps[side[1]]
                    interval = self._gap_edge_interval(face, gap)
                    if interval is None:
                        letters.append(f"B.{face}.{side[1]}")
                        run = None
                        continue
                    slot = Slot(face, gap.slot)
                    sign = surface.slot_sign(slot)
                    letter = f"E.{interval[0]}.{interval[1]}"
                    key = (interval, sign)
                    if run == key:
                        continue  # same stretch, same side: one letter
                    run = key
                    letters.append(letter if sign > 0 else f"-{letter}")
                else:
                    _, pkey, r, direction = side
                    side_tag = "L" if direction > 0 else "R"
                    letters.append(f"S.{_piece_str(pkey)}.{r}.{side_tag}")
                    run = None
            if len(letters) > 1 and run is not None:
                if letters[0] == letters[-1] and letters[0].lstrip("-").startswith("E."):
                    letters.pop()  # cyclic wrap of the same stretch, same side
            faces[f"{face}.{cell_index}"] = tuple(letters)
        return PolygonalSurface(faces)

    # -- floating circles ---------------------------------------------------------

    def _layer_floats(self):
        self.float_sides: dict = {}
        for prefix, system in self._systems.items():
            chains: dict = {}
            for fi, fl in enumerate(system.floats):
                chains.setdefault(fl.probe, []).append((fl.depth, fi))
            for probe, members in sorted(chains.items(), key=lambda kv: str(kv[0])):
                members.sort()
                face, slot, t = probe
                chart = self.charts[face]
                item = (prefix, "f", slot, t)
                idx = chart.index[item]
                gap_index = (idx - 1) % chart.size
                host_cell = chart.cell_of_gap(gap_index)
                host = self.regions[self.region_of_cell[(face, host_cell)]]
                host.euler -= 1
                host.chains = host.chains + (probe,)
                host.components.add((prefix, ("float", members[0][1])))
                outside = host.index
                for pos, (depth, fi) in enumerate(members):
                    comp = (prefix, ("float", fi))
                    if pos + 1 < len(members):
                        inner = Region(
                            len(self.regions), "ring", 0, False,
                            components={comp, (prefix, ("float", members[pos + 1][1]))},
                        )
                    else:
                        inner = Region(
                            len(self.regions), "core", 1, False, components={comp}
                        )
                    self.regions.append(inner)
                    self.float_sides[comp] = (outside, inner.index)
                    outside = inner.index

    # -- lookups ---------------------------------------------------------------

    def region_at(self, face: str, slot: int, t: Fraction) -> int:
        """Base region adjacent to the given point of a face side."""
        chart = self.charts[face]
        surface = self.system.surface
        u = surface.local_param(Slot(face, slot), Fraction(t))
        for gap in chart.gaps():
            if gap.slot == slot and gap.u_lo < u < gap.u_hi:
                return self.region_of_cell[(face, chart.cell_of_gap(gap.index))]
        raise ValueError(
            f"no free point at slot {slot}, t={t} of face {face!r}; "
            "anchors must avoid curve points"
        )

    def constraint_edges(self) -> list[tuple[int, int, object]]:
        """(region, region, cause) pairs that must receive opposite signs."""
        out = []
        for (key, r), lr in sorted(self.piece_regions.items(), key=str):
            left, right = lr
            assert left is not None and right is not None
            out.append((left, right, (key, r)))
        for comp, (outside, inside) in sorted(self.float_sides.items(), key=str):
            out.append((outside, inside, comp))
        return out


def _check_transverse(gamma: CurveSystem, curves: CurveSystem):
    surface = gamma.surface
    for label in list(surface.glued) + list(surface.boundary_edges):
        mine = {t for t, _, _ in gamma.points_on_edge(label)}
        theirs = {t for t, _, _ in curves.points_on_edge(label)}
        shared = mine & theirs
        if shared:
            raise NotTransverse(
                f"both systems meet edge {label!r} at t={min(shared)}; "
                "perturb one of them"
            )


# ---------------------------------------------------------------------------
# dividing-set analysis


@dataclass
class DividingAnalysis:
    decomposition: RegionDecomposition
    signs: dict[int, int]
    chi_plus: int
    chi_minus: int

    @property
    def euler_class(self) -> int:
        return self.chi_plus - self.chi_minus

    @property
    def num_regions(self) -> int:
        return len(self.decomposition.regions)

    @property
    def extremal_positive(self) -> bool:
        return self.chi_plus == self.decomposition.system.surface.euler_characteristic

    @property
    def extremal_negative(self) -> bool:
        return self.chi_minus == self.decomposition.system.surface.euler_characteristic

    @property
    def is_extremal(self) -> bool:
        return self.extremal_positive or self.extremal_negative


def analyze_dividing_set(
    system: CurveSystem,
    anchor: tuple[tuple[str, int, Fraction], int] | None = None,
) -> DividingAnalysis:
    """Two-color the complement and tally Euler characteristics.

    ``anchor`` fixes the sign convention: ((face, slot, t), sign) paints
    the region adjacent to that boundary point with that sign.  Without
    it the first region in construction order is painted positive.
    Raises EmptyOnComponent for an empty system and NotDividing when no
    consistent coloring exists.
    """
    if system.num_components == 0:
        raise EmptyOnComponent(
            "the system has no components on this surface; "
            "a dividing configuration must meet every component"
        )
    decomposition = RegionDecomposition(system)
    signs: dict[int, int] = {}
    if anchor is None:
        start, start_sign = 0, 1
    else:
        (face, slot, t), start_sign = anchor
        if start_sign not in (1, -1):
            raise ValueError("anchor sign must be +1 or -1")
        start = decomposition.region_at(face, slot, Fraction(t))
    adjacency: dict[int, list[tuple[int, object]]] = {}
    for a, b, cause in decomposition.constraint_edges():
        adjacency.setdefault(a, []).append((b, cause))
        adjacency.setdefault(b, []).append((a, cause))
        if a == b:
            raise NotDividing(
                f"piece {cause} has the same region on both sides; "
                "the complement admits no opposite-sign coloring"
            )
    order = [start] + [r.index for r in decomposition.regions if r.index != start]
    for seed in order:
        if seed in signs:
            continue
        signs[seed] = start_sign if seed == start else 1
        queue = [seed]
        while queue:
            cur = queue.pop()
            for nxt, cause in adjacency.get(cur, ()):
                want = -signs[cur]
                if nxt in signs:
                    if signs[nxt] != want:
                        raise NotDividing(
                            f"coloring conflict at piece {cause}; "
                            "the complement admits no opposite-sign coloring"
                        )
                else:
                    signs[nxt] = want
                    queue.append(nxt)
    chi_plus = sum(r.euler for r in decomposition.regions if signs[r.index] > 0)
    chi_minus = sum(r.euler for r in decomposition.regions if signs[r.index] < 0)
    return DividingAnalysis(decomposition, signs, chi_plus, chi_minus)


def is_null_homotopic(system: CurveSystem, comp_id: tuple) -> bool:
    """Whether one component bounds an embedded disk in the surface.

    Other components are ignored: the question is about the curve in
    the surface itself.  Arcs have no such notion here; IsArc.
    """
    kind, i = comp_id
    if kind == "arc":
        raise IsArc("null-homotopy is asked of closed components only")
    if kind == "float":
        if not 0 <= i < len(system.floats):
            raise IndexError(comp_id)
        return True
    comp = system.closed[i]
    alone = CurveSystem(system.surface, closed=[comp])
    decomposition = RegionDecomposition(alone)
    pieces = {(("g", ("closed", 0), k), 0) for k in range(len(comp.crossings))}
    for region in decomposition.regions:
        if region.kind != "base" or region.touches_boundary:
            continue
        if region.euler != 1:
            continue
        if dict.fromkeys(pieces, 1) == region.piece_sides:
            return True
    return False


def giroux_criterion(system: CurveSystem) -> bool:
    """Tightness test for the neighborhood of the surface.

    On a sphere the system must be a single connected curve; on every
    other surface no closed component may bound a disk.  Arcs are not
    examined.
    """
    surface = system.surface
    if surface.is_closed and surface.euler_characteristic == 2:
        return len(system.closed) + len(system.floats) == 1
    if system.floats:
        return False
    return not any(
        is_null_homotopic(system, ("closed", i)) for i in range(len(system.closed))
    )


def is_non_isolating(gamma: CurveSystem, curves: CurveSystem) -> bool:
    """Whether every region of the joint complement reaches the system.

    ``curves`` is a family of closed curves transverse to ``gamma``
    (shared edge points raise NotTransverse).  True when each region of
    the complement of both has part of ``gamma`` in its closure.  An
    empty family is trivially non-isolating.
    """
    if curves.num_components == 0:
        return True
    decomposition = RegionDecomposition(gamma, overlay=curves)
    for region in decomposition.regions:
        touches_gamma = any(prefix == "g" for prefix, _ in region.components)
        if not touches_gamma:
            return False
    return True
