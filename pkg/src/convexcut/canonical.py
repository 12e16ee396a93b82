"""Isotopy classification of normal systems on the standard model surfaces.

Each classifier condenses a normal curve system into a hashable
signature; two systems on the same surface are isotopic (boundary
points held fixed) exactly when their signatures agree.  Signatures
exist for the surfaces built by the standard_* constructors:

* disk / rectangle: boundary points, the chord matching, and one token
  per floating chain (the region it sits in, named by the boundary gaps
  that region touches, plus the nesting depth of the chain).
* annulus: boundary points, arc matching with winding numbers (net
  signed seam crossings), the number of core-parallel circles, and
  tokens for trivial circles next to the boundary.
* torus: the primitive slope of the parallel essential family and its
  size, or the multiset of chain lengths when everything is trivial.
* sphere: the nesting forest, encoded as a canonical unrooted tree of
  complementary regions.

Configurations whose isotopy class is not pinned down by these data
(trivial circles wedged between parallel essential circles, circles
held inside a fold of another curve on an annulus, and similar) raise
UnsupportedSurface rather than return an ambiguous answer.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from math import gcd

from .curves import CurveSystem
from .errors import UnsupportedSurface
from .regions import RegionDecomposition
from .surfaces import PolygonalSurface, Slot


def _chain_lengths(system: CurveSystem) -> dict:
    lengths: Counter = Counter()
    for fl in system.floats:
        lengths[fl.probe] += 1
    return dict(lengths)


def _boundary_point_table(system: CurveSystem):
    """Arc endpoints in walk order along each boundary cycle."""
    surface = system.surface
    per_cycle: list[list] = []
    index_of: dict = {}
    for ci, cycle in enumerate(surface.boundary_cycles()):
        pts: list = []
        for slot in cycle:
            edge = surface.slot_edge(slot)
            entries = [e for e in system.points_on_edge(edge) if e[1] == "endpoint"]
            entries.sort(key=lambda e: surface.local_param(slot, e[0]))
            pts.extend((edge, t, ref) for t, _, ref in entries)
        per_cycle.append(pts)
        for pi, (_, _, ref) in enumerate(pts):
            index_of[ref] = (ci, pi)
    return per_cycle, index_of


def _gap_region_map(system: CurveSystem, decomposition: RegionDecomposition):
    """region index -> frozenset of global boundary gaps it touches.

    Gap (c, k) is the boundary stretch after the k-th arc endpoint of
    cycle c (the whole cycle when it carries no endpoints).
    """
    surface = system.surface
    gap_of_region: dict[int, set] = {}
    for ci, cycle in enumerate(surface.boundary_cycles()):
        seen_endpoints = 0
        total = sum(
            1
            for slot in cycle
            for e in system.points_on_edge(surface.slot_edge(slot))
            if e[1] == "endpoint"
        )
        for slot in cycle:
            edge = surface.slot_edge(slot)
            entries = system.points_on_edge(edge)
            entries.sort(key=lambda e: surface.local_param(slot, e[0]))
            us = [surface.local_param(slot, t) for t, _, _ in entries]
            bounds = [Fraction(0)] + us + [Fraction(1)]
            kinds = [None] + [e[1] for e in entries] + [None]
            for j in range(len(bounds) - 1):
                if kinds[j] == "endpoint":
                    seen_endpoints += 1
                lo, hi = bounds[j], bounds[j + 1]
                if lo == hi:
                    continue
                gap = (ci, (seen_endpoints - 1) % total if total else 0)
                u_mid = (lo + hi) / 2
                t_mid = u_mid if surface.slot_sign(slot) > 0 else 1 - u_mid
                region = decomposition.region_at(slot.face, slot.index, t_mid)
                gap_of_region.setdefault(region, set()).add(gap)
    return {r: frozenset(g) for r, g in gap_of_region.items()}


def _float_tokens(system, decomposition, gap_of_region, max_depth=None):
    lengths = _chain_lengths(system)
    tokens = []
    hosts_seen: dict = {}
    for region in decomposition.regions:
        if region.kind != "base":
            continue
        for probe in region.chains:
            length = lengths[probe]
            if max_depth is not None and length - 1 > max_depth:
                raise UnsupportedSurface(
                    "nested trivial circles on this surface are not ordered "
                    "by the classifier; split them onto a disk"
                )
            gaps = gap_of_region.get(region.index)
            if gaps is None:
                raise UnsupportedSurface(
                    "a trivial circle sits in a region away from the "
                    "boundary; its position is not pinned down"
                )
            prior = hosts_seen.setdefault(gaps, region.index)
            if prior != region.index:
                raise UnsupportedSurface(
                    "two regions touch the same boundary stretches; "
                    "trivial circles inside them cannot be told apart"
                )
            tokens.append((tuple(sorted(gaps)), length))
    return tuple(sorted(tokens))


def _disk_signature(system: CurveSystem, head: str):
    per_cycle, index_of = _boundary_point_table(system)
    points = tuple(tuple((e, t) for e, t, _ in pts) for pts in per_cycle)
    matching = []
    for ai in range(len(system.arcs)):
        s = index_of[("arc", ai, "start")]
        e = index_of[("arc", ai, "end")]
        matching.append(tuple(sorted((s, e))))
    decomposition = RegionDecomposition(system)
    gap_map = _gap_region_map(system, decomposition)
    floats = _float_tokens(system, decomposition, gap_map)
    return (head, points, frozenset(matching), floats)


def _annulus_signature(system: CurveSystem):
    seam = system.surface.kind_meta["seam"]
    n_core = 0
    for comp in system.closed:
        if len(comp.crossings) != 1:
            raise UnsupportedSurface(
                "a closed curve crossing the seam more than once is not "
                "in the plainly core-parallel position this classifier needs"
            )
        n_core += 1
    per_cycle, index_of = _boundary_point_table(system)
    points = tuple(tuple((e, t) for e, t, _ in pts) for pts in per_cycle)
    arcs = []
    for ai, arc in enumerate(system.arcs):
        signs = {1 if cr.spec == seam else -1 for cr in arc.crossings}
        if len(signs) > 1:
            raise UnsupportedSurface(
                "an arc crosses the seam in both directions; isotope it "
                "to wind consistently before classifying"
            )
        winding = len(arc.crossings) * (signs.pop() if signs else 0)
        s = index_of[("arc", ai, "start")]
        e = index_of[("arc", ai, "end")]
        arcs.append(min((s, e, winding), (e, s, -winding)))
    decomposition = RegionDecomposition(system)
    gap_map = _gap_region_map(system, decomposition)
    floats = _float_tokens(system, decomposition, gap_map, max_depth=0)
    return ("annulus", points, frozenset(arcs), n_core, floats)


def _torus_net(comp, basis):
    a, b = basis
    nets = []
    for edge in (a, b):
        signs = [1 if cr.spec == edge else -1 for cr in comp.crossings if cr.edge == edge]
        if len(set(signs)) > 1:
            raise UnsupportedSurface(
                "a curve crosses a basis edge in both directions; "
                "isotope it to minimal position before classifying"
            )
        nets.append(sum(signs))
    return tuple(nets)


def torus_slope(system: CurveSystem):
    """Primitive (a, b) crossing vector of the essential family, or None.

    All closed components must be parallel copies of one primitive
    class; the sign is fixed by making the first nonzero entry
    positive.
    """
    if system.surface.kind != "torus":
        raise UnsupportedSurface("slopes are defined for the standard torus model")
    basis = system.surface.kind_meta["basis"]
    slopes = set()
    for comp in system.closed:
        na, nb = _torus_net(comp, basis)
        if (na, nb) == (0, 0):
            raise UnsupportedSurface(
                "a closed curve with zero net crossings is trivial or "
                "trapped; normalize or split it off first"
            )
        if gcd(abs(na), abs(nb)) != 1:
            raise UnsupportedSurface(
                "net crossings are not primitive; the curve is not in "
                "minimal position"
            )
        if na < 0 or (na == 0 and nb < 0):
            na, nb = -na, -nb
        slopes.add((na, nb))
    if not slopes:
        return None
    if len(slopes) > 1:
        raise UnsupportedSurface(
            "closed curves of different slopes cannot be disjoint; "
            "the configuration is not in minimal position"
        )
    return slopes.pop()


def _torus_signature(system: CurveSystem):
    lengths = _chain_lengths(system)
    slope = torus_slope(system)
    if slope is None:
        return ("torus", "trivial", tuple(sorted(lengths.values())))
    if lengths:
        raise UnsupportedSurface(
            "trivial circles between parallel essential circles on the "
            "torus are not ordered by this classifier"
        )
    return ("torus", "essential", slope, len(system.closed))


def _sphere_signature(system: CurveSystem):
    decomposition = RegionDecomposition(system)
    edges: dict[int, list[int]] = {r.index: [] for r in decomposition.regions}
    n_edges = 0
    for ci in range(len(system.closed)):
        sides = set()
        for (key, _), (left, right) in decomposition.piece_regions.items():
            if key[1] == ("closed", ci):
                sides.add((min(left, right), max(left, right)))
        if len(sides) != 1:
            raise UnsupportedSurface(
                "a closed curve fails to separate two regions; the "
                "configuration is outside the sphere classifier"
            )
        (l, r), = sides
        if l == r:
            raise UnsupportedSurface(
                "a closed curve with the same region on both sides cannot "
                "occur on a sphere presentation this classifier accepts"
            )
        edges[l].append(r)
        edges[r].append(l)
        n_edges += 1
    for comp, (outside, inside) in decomposition.float_sides.items():
        edges[outside].append(inside)
        edges[inside].append(outside)
        n_edges += 1
    nodes = list(edges)
    if n_edges != len(nodes) - 1:
        raise UnsupportedSurface(
            "the complement of the system is not a tree of regions"
        )

    def rooted(node: int, parent: int | None) -> tuple:
        return tuple(sorted(rooted(c, node) for c in edges[node] if c != parent))

    # tree center: peel leaf layers until one or two nodes remain
    degree = {n: len(edges[n]) for n in nodes}
    layer = [n for n in nodes if degree[n] <= 1]
    remaining = len(nodes)
    removed: set[int] = set()
    while remaining > 2:
        nxt = []
        for n in layer:
            removed.add(n)
            remaining -= 1
            for m in edges[n]:
                if m in removed:
                    continue
                degree[m] -= 1
                if degree[m] == 1:
                    nxt.append(m)
        layer = nxt
    centers = [n for n in nodes if n not in removed]
    code = min(rooted(c, None) for c in centers)
    return ("sphere", code)


def canonical_signature(system: CurveSystem):
    """Hashable isotopy signature of a normal system on a standard model."""
    system.require_normal()
    kind = system.surface.kind
    if kind in ("disk", "rectangle"):
        return _disk_signature(system, kind)
    if kind == "annulus":
        return _annulus_signature(system)
    if kind == "torus":
        return _torus_signature(system)
    if kind == "sphere":
        return _sphere_signature(system)
    raise UnsupportedSurface(
        "classification covers the standard disk, rectangle, annulus, "
        f"torus and sphere models; this surface is {kind or 'unlabeled'}"
    )


def isotopic(first: CurveSystem, second: CurveSystem) -> bool:
    """Whether two normal systems on the same surface are isotopic.

    Boundary points are held fixed throughout.  Raises ValueError when
    the systems live on different surfaces.
    """
    if first.surface.faces != second.surface.faces:
        raise ValueError("the systems live on different surfaces")
    return canonical_signature(first) == canonical_signature(second)
