"""Flat diagrams of curve systems, as standalone SVG text.

Two renderers share the drawing vocabulary:

  * :func:`render_svg` draws the standard disk, rectangle, and annulus
    models in their round form (boundary circles, marked points,
    straight or concentric curve strokes).
  * :func:`render_chart_svg` draws any surface as its cut polygons,
    one panel per face, with curve chords inside each polygon.  This
    is the documented fallback for the torus and sphere models, whose
    round pictures are not planar.

Output is byte-stable: every coordinate is formatted with four
decimals and all iteration follows construction order.  Wrapping
curves on the annulus are drawn as concentric circles at the height of
each seam pass; that keeps the picture readable and is faithful up to
isotopy.
"""

from __future__ import annotations

import math

from .curves import CurveSystem
from .errors import UnsupportedSurface

PANEL = 260
MARGIN = 24

_STYLE = (
    "<style>"
    ".boundary{fill:none;stroke:#222;stroke-width:2}"
    ".seam{fill:none;stroke:#999;stroke-width:1;stroke-dasharray:4 3}"
    ".curve{fill:none;stroke:#c0392b;stroke-width:2}"
    ".mark{fill:#c0392b}"
    ".tick{stroke:#222;stroke-width:2}"
    ".label{font:10px sans-serif;fill:#333;text-anchor:middle}"
    ".title{font:12px sans-serif;fill:#111;text-anchor:middle}"
    "</style>"
)


def _fmt(x) -> str:
    value = float(x)
    if value == 0:
        value = 0.0  # avoid -0.0000
    return f"{value:.4f}"


def _line(a, b, cls="curve") -> str:
    return (
        f'<line class="{cls}" x1="{_fmt(a[0])}" y1="{_fmt(a[1])}" '
        f'x2="{_fmt(b[0])}" y2="{_fmt(b[1])}"/>'
    )


def _circle(c, r, cls="curve") -> str:
    return f'<circle class="{cls}" cx="{_fmt(c[0])}" cy="{_fmt(c[1])}" r="{_fmt(r)}"/>'


def _dot(c) -> str:
    return f'<circle class="mark" cx="{_fmt(c[0])}" cy="{_fmt(c[1])}" r="2.5"/>'


def _text(c, s, cls="label") -> str:
    return f'<text class="{cls}" x="{_fmt(c[0])}" y="{_fmt(c[1])}">{s}</text>'


def _polyline(points, cls="curve") -> str:
    coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)
    return f'<polyline class="{cls}" points="{coords}"/>'


def _on_circle(center, radius, frac):
    """Point at angle ``frac`` of a full counterclockwise turn from east."""
    ang = 2 * math.pi * float(frac)
    return (center[0] + radius * math.cos(ang), center[1] - radius * math.sin(ang))


def _lerp(a, b, t):
    t = float(t)
    return (a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t)


def _document(groups, width, height) -> str:
    body = "".join(groups)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">'
        f"{_STYLE}{body}</svg>\n"
    )


# -- round models -------------------------------------------------------------------


def _float_elements(place_probe, floats):
    out = []
    for fl in floats:
        center, radius = place_probe(fl)
        out.append(_circle(center, radius))
    return out


def _disk_panel(system: CurveSystem):
    surface = system.surface
    center = (PANEL / 2, PANEL / 2)
    radius = PANEL / 2 - 30
    (face, word), = surface.faces.items()
    n = len(word)

    def bpoint(edge, t, r=radius):
        i = word.index(edge)
        return _on_circle(center, r, (i + t) / n)

    parts = [_circle(center, radius, "boundary")]
    for i, edge in enumerate(word):
        tick_in = _on_circle(center, radius - 5, i / n)
        tick_out = _on_circle(center, radius + 5, i / n)
        parts.append(_line(tick_in, tick_out, "tick"))
        parts.append(_text(_on_circle(center, radius + 14, (i + 0.5) / n), edge))
    for arc in system.arcs:
        a = bpoint(arc.start.edge, arc.start.t)
        b = bpoint(arc.end.edge, arc.end.t)
        parts.append(_line(a, b))
        parts.extend([_dot(a), _dot(b)])

    def probe(fl):
        base = _on_circle(center, radius, (fl.slot + fl.t) / n)
        pull = 0.45 + 0.14 * min(fl.depth, 3)
        return _lerp(base, center, pull), max(12 - 3 * fl.depth, 4)

    parts.extend(_float_elements(probe, system.floats))
    return parts


def _rectangle_panel(system: CurveSystem):
    surface = system.surface
    (face, word), = surface.faces.items()
    x0, y0, x1, y1 = 30.0, 60.0, PANEL - 30.0, PANEL - 60.0
    corners = [(x0, y1), (x1, y1), (x1, y0), (x0, y0)]  # counterclockwise from
    # the bottom-left corner, so side i runs corner i -> corner i+1

    def side_point(i, t):
        return _lerp(corners[i], corners[(i + 1) % 4], t)

    def bpoint(edge, t):
        return side_point(word.index(edge), t)

    parts = [
        f'<rect class="boundary" x="{_fmt(x0)}" y="{_fmt(y0)}" '
        f'width="{_fmt(x1 - x0)}" height="{_fmt(y1 - y0)}"/>'
    ]
    offsets = [(0, 14), (16, 0), (0, -8), (-16, 0)]
    for i, edge in enumerate(word):
        mid = side_point(i, 0.5)
        parts.append(_text((mid[0] + offsets[i][0], mid[1] + offsets[i][1]), edge))
    for arc in system.arcs:
        a = bpoint(arc.start.edge, arc.start.t)
        b = bpoint(arc.end.edge, arc.end.t)
        parts.append(_line(a, b))
        parts.extend([_dot(a), _dot(b)])
    cx, cy = (x0 + x1) / 2, (y0 + y1) / 2

    def probe(fl):
        base = side_point(fl.slot, fl.t)
        pull = 0.45 + 0.14 * min(fl.depth, 3)
        return _lerp(base, (cx, cy), pull), max(12 - 3 * fl.depth, 4)

    parts.extend(_float_elements(probe, system.floats))
    return parts


def _annulus_panel(system: CurveSystem):
    surface = system.surface
    meta = surface.kind_meta
    bot, top, seam = meta["bot"], meta["top"], meta["seam"]
    center = (PANEL / 2, PANEL / 2)
    r_in, r_out = 52.0, PANEL / 2 - 30

    def radial(t):
        return r_in + (r_out - r_in) * float(t)

    def bpoint(edge, t):
        if edge == bot:
            return _on_circle(center, r_in, t)
        return _on_circle(center, r_out, t)

    parts = [
        _circle(center, r_out, "boundary"),
        _circle(center, r_in, "boundary"),
        _line(_on_circle(center, r_in, 0), _on_circle(center, r_out, 0), "seam"),
        _text(_on_circle(center, r_out + 14, 0.25), top),
        _text(_on_circle(center, r_in - 14, 0.25), bot),
    ]
    for arc in system.arcs:
        points = [bpoint(arc.start.edge, arc.start.t)]
        for cr in arc.crossings:
            points.append(_on_circle(center, radial(cr.t), 0))
        points.append(bpoint(arc.end.edge, arc.end.t))
        parts.append(_polyline(points))
        parts.extend([_dot(points[0]), _dot(points[-1])])
    for comp in system.closed:
        # every pass over the seam becomes one concentric circle
        for cr in comp.crossings:
            parts.append(_circle(center, radial(cr.t)))

    word = surface.faces["A"]

    def probe(fl):
        edge = word[fl.slot]
        if edge == bot:
            base = _on_circle(center, r_in, fl.t)
        elif edge == top:
            base = _on_circle(center, r_out, fl.t)
        else:
            base = _on_circle(center, radial(fl.t), 0)
        mid = _on_circle(center, (r_in + r_out) / 2, 0.125)
        pull = 0.5 + 0.14 * min(fl.depth, 3)
        return _lerp(base, mid, pull), max(12 - 3 * fl.depth, 4)

    parts.extend(_float_elements(probe, system.floats))
    return parts


_ROUND_PANELS = {
    "disk": _disk_panel,
    "rectangle": _rectangle_panel,
    "annulus": _annulus_panel,
}


def render_svg(system: CurveSystem, title: str | None = None) -> str:
    """Round picture of a system on a standard disk, rectangle, or annulus."""
    kind = system.surface.kind
    panel = _ROUND_PANELS.get(kind)
    if panel is None:
        raise UnsupportedSurface(
            f"no round rendering for kind {kind or 'unlabeled'}; "
            "draw the cut polygon chart instead"
        )
    parts = panel(system)
    if title:
        parts.append(_text((PANEL / 2, 20), title, "title"))
    return _document(["<g>" + "".join(parts) + "</g>"], PANEL, PANEL)


# -- cut polygon charts ---------------------------------------------------------------


def _polygon_geometry(n: int, center, radius):
    """Vertex list plus a point-on-side function for a regular n-gon.

    One- and two-sided faces are drawn on a circle (full circle, two
    semicircles) since straight sides degenerate there.
    """
    if n >= 3:
        verts = [
            _on_circle(center, radius, 0.25 + i / n) for i in range(n)
        ]

        def at(i, t):
            return _lerp(verts[i], verts[(i + 1) % n], t)

        outline = (
            "<polygon class=\"boundary\" points=\""
            + " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in verts)
            + "\"/>"
        )
        return verts, at, outline

    def at(i, t):
        return _on_circle(center, radius, 0.25 + (i + float(t)) / n)

    verts = [at(i, 0) for i in range(n)]
    return verts, at, _circle(center, radius, "boundary")


def _chart_panel(system: CurveSystem, face: str, origin_x: float):
    surface = system.surface
    word = surface.faces[face]
    n = len(word)
    center = (origin_x + PANEL / 2, PANEL / 2 + 10)
    radius = PANEL / 2 - 36
    verts, at, outline = _polygon_geometry(n, center, radius)

    def side_point(slot_index, t):
        # t runs along the edge's own direction; a negative occurrence
        # traverses the side against it
        spec = word[slot_index]
        if spec.startswith("-"):
            t = 1 - t
        return at(slot_index, t)

    parts = [outline, _text((center[0], PANEL + 6), face, "title")]
    for i, spec in enumerate(word):
        mid = at(i, 0.5)
        out = _lerp(center, mid, 1.16)
        parts.append(_text(out, spec))
    for chord in system.chords():
        if chord.face != face:
            continue
        a = side_point(chord.a_slot.index, chord.a_t)
        b = side_point(chord.b_slot.index, chord.b_t)
        parts.append(_line(a, b))
        parts.extend([_dot(a), _dot(b)])

    def probe(fl):
        base = side_point(fl.slot, fl.t)
        pull = 0.4 + 0.13 * min(fl.depth, 4)
        return _lerp(base, center, pull), max(11 - 2 * fl.depth, 4)

    parts.extend(_float_elements(probe, [f for f in system.floats if f.face == face]))
    return parts


def render_chart_svg(system: CurveSystem, title: str | None = None) -> str:
    """One panel per face: the cut polygons with their curve chords."""
    faces = sorted(system.surface.faces)
    groups = []
    for k, face in enumerate(faces):
        parts = _chart_panel(system, face, k * PANEL)
        groups.append("<g>" + "".join(parts) + "</g>")
    if title:
        groups.append(
            "<g>" + _text((len(faces) * PANEL / 2, 20), title, "title") + "</g>"
        )
    return _document(groups, PANEL * len(faces), PANEL + 24)


# -- panel composition ----------------------------------------------------------------


def render_panels(panels) -> str:
    """Labeled pictures side by side, e.g. before/after pairs.

    Each entry is (title, system).  Systems that have no round model
    fall back to their chart picture inside the strip.
    """
    groups = []
    x = 0.0
    height = PANEL
    for title, system in panels:
        try:
            parts = _ROUND_PANELS[system.surface.kind](system)
            width = PANEL
        except (KeyError, UnsupportedSurface):
            faces = sorted(system.surface.faces)
            parts = []
            for k, face in enumerate(faces):
                parts.extend(_chart_panel(system, face, k * PANEL))
            width = PANEL * len(faces)
            height = max(height, PANEL + 24)
        parts.append(_text((width / 2, 20), title, "title"))
        groups.append(f'<g transform="translate({_fmt(x)},0)">' + "".join(parts) + "</g>")
        x += width + MARGIN
    return _document(groups, int(x - MARGIN) if x else PANEL, height)
