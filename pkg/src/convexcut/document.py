"""Document files: named records for every core object, in YAML.

A document collects surfaces, curve systems, attachment routes, convex
structures, splitting scripts, and slab records under explicit ids so
fixtures are diffable and self-describing.  The concrete grammar is
YAML (format version "1"); ``docs/document.schema.json`` publishes the
same shape for other tooling.

Parsing is eager: shapes first, then cross-references, then the core
constructors, so the first broken node is reported with a path into
the file.  Positions are exact rationals written as ``"p/q"`` strings
or integers; floats are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import yaml

from .bypass import AnchorStop, AttachArc, EdgeStop, FreeStop
from .curves import (
    ArcComponent,
    BoundaryPoint,
    ClosedComponent,
    Crossing,
    CurveSystem,
    FloatingCircle,
)
from .decompose import (
    ConvexStructure,
    SplittingSurface,
    SuturedPiece,
    SuturedPresentation,
    sutured_to_convex,
)
from .errors import (
    DanglingReference,
    DocumentSyntaxError,
    DomainError,
    InvariantViolation,
    UnknownVersion,
)
from .slabs import INFINITE_SLOPE, SigmaISlab, TorusModel
from .surfaces import (
    PolygonalSurface,
    standard_annulus,
    standard_disk,
    standard_rectangle,
    standard_sphere,
    standard_torus,
)

KNOWN_VERSIONS = ("1",)

SECTIONS = (
    "surfaces",
    "curves",
    "arcs",
    "convex_structures",
    "splitting_scripts",
    "slabs",
)


# -- shape helpers ------------------------------------------------------------------


def _fail(message: str, path: str):
    raise DocumentSyntaxError(message, location=path)


def _as_map(node, path, required=(), optional=()):
    if not isinstance(node, dict):
        _fail(f"expected a mapping, got {type(node).__name__}", path)
    allowed = set(required) | set(optional)
    for key in node:
        if not isinstance(key, str):
            _fail(f"keys must be strings, got {key!r}", path)
        if key not in allowed:
            _fail(f"unknown key {key!r} (allowed: {', '.join(sorted(allowed))})", path)
    for key in required:
        if key not in node:
            _fail(f"missing required key {key!r}", path)
    return node


def _as_list(node, path, min_len=0):
    if not isinstance(node, list):
        _fail(f"expected a list, got {type(node).__name__}", path)
    if len(node) < min_len:
        _fail(f"expected at least {min_len} entries, got {len(node)}", path)
    return node


def _as_str(node, path):
    if not isinstance(node, str) or not node:
        _fail(f"expected a non-empty string, got {node!r}", path)
    return node


def _as_int(node, path):
    if isinstance(node, bool) or not isinstance(node, int):
        _fail(f"expected an integer, got {node!r}", path)
    return node


def _as_bool(node, path):
    if not isinstance(node, bool):
        _fail(f"expected true or false, got {node!r}", path)
    return node


def _as_frac(node, path) -> Fraction:
    if isinstance(node, bool):
        _fail(f"expected an exact rational, got {node!r}", path)
    if isinstance(node, int):
        return Fraction(node)
    if isinstance(node, float):
        _fail("floats are not accepted; write rationals as strings like \"1/3\"", path)
    if isinstance(node, str):
        try:
            return Fraction(node)
        except (ValueError, ZeroDivisionError):
            _fail(f"cannot read {node!r} as a rational p/q", path)
    _fail(f"expected an exact rational, got {node!r}", path)


def _point_pair(node, path):
    """[edge-or-spec, t] with t an exact rational."""
    node = _as_list(node, path)
    if len(node) != 2:
        _fail(f"expected [edge, t], got {node!r}", path)
    return [_as_str(node[0], f"{path}/0"), _as_frac(node[1], f"{path}/1")]


def _named_section(tree, name):
    section = tree.get(name) or {}
    if not isinstance(section, dict):
        _fail(f"expected a mapping of names to records", name)
    for key in section:
        if not isinstance(key, str) or not key:
            _fail(f"record names must be non-empty strings, got {key!r}", name)
    return section


# -- record validation (shape only; core invariants run at build) -------------------

_SURFACE_KEYS = {
    "disk": ("boundary", "edge_count"),
    "rectangle": ("sides",),
    "annulus": ("bot", "top", "seam"),
    "torus": ("basis",),
    "sphere": ("edges",),
    "polygonal": ("faces",),
}


def _check_surface(rec, path):
    _as_map(rec, path, required=("kind",), optional=sum(_SURFACE_KEYS.values(), ()))
    kind = _as_str(rec["kind"], f"{path}/kind")
    if kind not in _SURFACE_KEYS:
        _fail(f"unknown surface kind {kind!r}", f"{path}/kind")
    for key in rec:
        if key != "kind" and key not in _SURFACE_KEYS[kind]:
            _fail(f"key {key!r} does not apply to kind {kind!r}", f"{path}/{key}")
    if kind == "disk":
        if "boundary" in rec and "edge_count" in rec:
            _fail("give either boundary or edge_count, not both", path)
        if "boundary" in rec:
            rec["boundary"] = [
                _as_str(e, f"{path}/boundary/{i}")
                for i, e in enumerate(_as_list(rec["boundary"], f"{path}/boundary", 1))
            ]
        if "edge_count" in rec:
            _as_int(rec["edge_count"], f"{path}/edge_count")
    elif kind == "rectangle":
        if "sides" in rec:
            sides = _as_map(
                rec["sides"],
                f"{path}/sides",
                optional=("bottom", "right", "top", "left"),
            )
            for k, v in sides.items():
                _as_str(v, f"{path}/sides/{k}")
    elif kind == "annulus":
        for k in ("bot", "top", "seam"):
            if k in rec:
                _as_str(rec[k], f"{path}/{k}")
    elif kind in ("torus", "sphere"):
        key = "basis" if kind == "torus" else "edges"
        if key in rec:
            pair = _as_list(rec[key], f"{path}/{key}")
            if len(pair) != 2:
                _fail(f"{key} needs exactly two edge names", f"{path}/{key}")
            rec[key] = [_as_str(e, f"{path}/{key}/{i}") for i, e in enumerate(pair)]
    else:
        faces = rec["faces"]
        if not isinstance(faces, dict) or not faces:
            _fail("faces must be a non-empty mapping of face names to edge words",
                  f"{path}/faces")
        for fname, word in faces.items():
            _as_str(fname, f"{path}/faces")
            faces[fname] = [
                _as_str(s, f"{path}/faces/{fname}/{i}")
                for i, s in enumerate(_as_list(word, f"{path}/faces/{fname}", 1))
            ]


def _check_component(comp, path):
    if not isinstance(comp, dict) or len(comp) != 1:
        _fail("each component is a one-key mapping: closed, arc, or circle", path)
    (kind, body), = comp.items()
    if kind == "closed":
        comp[kind] = [
            _point_pair(p, f"{path}/closed/{i}")
            for i, p in enumerate(_as_list(body, f"{path}/closed", 1))
        ]
    elif kind == "arc":
        _as_map(body, f"{path}/arc", required=("start", "end"), optional=("crossings",))
        body["start"] = _point_pair(body["start"], f"{path}/arc/start")
        body["end"] = _point_pair(body["end"], f"{path}/arc/end")
        if "crossings" in body:
            body["crossings"] = [
                _point_pair(p, f"{path}/arc/crossings/{i}")
                for i, p in enumerate(_as_list(body["crossings"], f"{path}/arc/crossings"))
            ]
    elif kind == "circle":
        _as_map(body, f"{path}/circle", required=("face", "slot", "t"),
                optional=("depth",))
        _as_str(body["face"], f"{path}/circle/face")
        _as_int(body["slot"], f"{path}/circle/slot")
        body["t"] = _as_frac(body["t"], f"{path}/circle/t")
        if "depth" in body:
            _as_int(body["depth"], f"{path}/circle/depth")
    else:
        _fail(f"unknown component kind {kind!r}", path)


def _check_curves(rec, path):
    _as_map(rec, path, required=("surface", "components"))
    _as_str(rec["surface"], f"{path}/surface")
    for i, comp in enumerate(_as_list(rec["components"], f"{path}/components")):
        _check_component(comp, f"{path}/components/{i}")


def _check_stop(stop, path):
    if not isinstance(stop, dict) or len(stop) != 1:
        _fail("each stop is a one-key mapping: anchor, edge, or free", path)
    (kind, body), = stop.items()
    if kind == "anchor":
        _as_map(body, f"{path}/anchor", required=("component", "chord", "s"))
        comp = _as_list(body["component"], f"{path}/anchor/component")
        if len(comp) != 2 or comp[0] not in ("closed", "arc"):
            _fail("component is [\"closed\"|\"arc\", index]", f"{path}/anchor/component")
        _as_int(comp[1], f"{path}/anchor/component/1")
        _as_int(body["chord"], f"{path}/anchor/chord")
        body["s"] = _as_frac(body["s"], f"{path}/anchor/s")
    elif kind == "edge":
        stop[kind] = _point_pair(body, f"{path}/edge")
    elif kind == "free":
        _as_map(body, f"{path}/free", required=("face", "x", "y"))
        _as_str(body["face"], f"{path}/free/face")
        body["x"] = _as_frac(body["x"], f"{path}/free/x")
        body["y"] = _as_frac(body["y"], f"{path}/free/y")
    else:
        _fail(f"unknown stop kind {kind!r}", path)


def _check_route(rec, path):
    _as_map(rec, path, required=("curves", "stops"), optional=("direction",))
    _as_str(rec["curves"], f"{path}/curves")
    if "direction" in rec:
        if rec["direction"] not in ("front", "back"):
            _fail(f"direction is front or back, got {rec['direction']!r}",
                  f"{path}/direction")
    for i, stop in enumerate(_as_list(rec["stops"], f"{path}/stops", 2)):
        _check_stop(stop, f"{path}/stops/{i}")


def _check_convex(rec, path):
    _as_map(rec, path, required=("pieces",), optional=("irreducible",))
    if "irreducible" in rec:
        _as_bool(rec["irreducible"], f"{path}/irreducible")
    for i, piece in enumerate(_as_list(rec["pieces"], f"{path}/pieces", 1)):
        ppath = f"{path}/pieces/{i}"
        _as_map(piece, ppath, required=("name", "surface"),
                optional=("curves", "toroidal"))
        _as_str(piece["name"], f"{ppath}/name")
        _as_str(piece["surface"], f"{ppath}/surface")
        if "curves" in piece:
            _as_str(piece["curves"], f"{ppath}/curves")
        if "toroidal" in piece:
            _as_bool(piece["toroidal"], f"{ppath}/toroidal")


def _check_script(steps, path):
    for i, step in enumerate(_as_list(steps, path, 1)):
        spath = f"{path}/{i}"
        _as_map(step, spath, required=("piece", "surface", "cuts", "correspondence"),
                optional=("sigma",))
        _as_str(step["piece"], f"{spath}/piece")
        _as_str(step["surface"], f"{spath}/surface")
        step["cuts"] = [
            [_as_str(e, f"{spath}/cuts/{j}/{k}") for k, e in
             enumerate(_as_list(cyc, f"{spath}/cuts/{j}", 1))]
            for j, cyc in enumerate(_as_list(step["cuts"], f"{spath}/cuts", 1))
        ]
        corr = step["correspondence"]
        if not isinstance(corr, dict) or not corr:
            _fail("correspondence maps splitting-surface edges to cut edges",
                  f"{spath}/correspondence")
        for k, v in corr.items():
            _as_str(k, f"{spath}/correspondence")
            _as_str(v, f"{spath}/correspondence/{k}")
        if "sigma" in step:
            _as_str(step["sigma"], f"{spath}/sigma")


def _check_slab(rec, path):
    if not isinstance(rec, dict):
        _fail("expected a mapping", path)
    if "curve_count" in rec:
        _as_map(rec, path, required=("curve_count", "slope"), optional=("torsion",))
        _as_int(rec["curve_count"], f"{path}/curve_count")
        if rec["slope"] != INFINITE_SLOPE:
            rec["slope"] = _as_frac(rec["slope"], f"{path}/slope")
        if "torsion" in rec:
            _as_int(rec["torsion"], f"{path}/torsion")
        return
    _as_map(rec, path, required=("genus",),
            optional=("pair", "product", "straddled_bottom", "straddled_top"))
    _as_int(rec["genus"], f"{path}/genus")
    if "pair" in rec:
        pair = _as_list(rec["pair"], f"{path}/pair")
        if len(pair) != 2:
            _fail("pair needs exactly two curve names", f"{path}/pair")
        rec["pair"] = [_as_str(c, f"{path}/pair/{i}") for i, c in enumerate(pair)]
    if "product" in rec:
        _as_bool(rec["product"], f"{path}/product")
    for k in ("straddled_bottom", "straddled_top"):
        if k in rec:
            _as_str(rec[k], f"{path}/{k}")


def _check_conventions(rec):
    path = "conventions"
    _as_map(rec, path, required=("rounding_direction",), optional=("sign_anchors",))
    if rec["rounding_direction"] not in ("left", "right"):
        _fail(f"rounding_direction is left or right, got {rec['rounding_direction']!r}",
              f"{path}/rounding_direction")
    anchors = rec.setdefault("sign_anchors", {})
    if not isinstance(anchors, dict):
        _fail("sign_anchors maps curve-system names to anchor points",
              f"{path}/sign_anchors")
    for name, anchor in anchors.items():
        apath = f"{path}/sign_anchors/{name}"
        _as_map(anchor, apath, required=("face", "slot", "t", "sign"))
        _as_str(anchor["face"], f"{apath}/face")
        _as_int(anchor["slot"], f"{apath}/slot")
        anchor["t"] = _as_frac(anchor["t"], f"{apath}/t")
        if _as_int(anchor["sign"], f"{apath}/sign") not in (1, -1):
            _fail("sign is 1 or -1", f"{apath}/sign")


# -- the document -------------------------------------------------------------------


@dataclass
class Document:
    version: str
    conventions: dict | None
    surfaces: dict
    curves: dict
    arcs: dict
    convex_structures: dict
    splitting_scripts: dict
    slabs: dict
    _built: dict = field(default_factory=dict, compare=False, repr=False)

    # builders; records were shape-checked at parse, so failures here come
    # from the core validators and surface as InvariantViolation

    def _build(self, kind, name, maker):
        key = (kind, name)
        if key not in self._built:
            try:
                self._built[key] = maker()
            except (DomainError, ValueError, KeyError) as exc:
                raise InvariantViolation(str(exc), location=f"{kind}/{name}") from exc
        return self._built[key]

    def surface(self, name: str) -> PolygonalSurface:
        rec = self.surfaces[name]
        return self._build("surfaces", name, lambda: _make_surface(rec))

    def curve_system(self, name: str) -> CurveSystem:
        rec = self.curves[name]
        return self._build(
            "curves", name, lambda: _make_system(self.surface(rec["surface"]), rec)
        )

    def attach_route(self, name: str):
        """(curve-system name, AttachArc, direction)."""
        rec = self.arcs[name]
        arc = self._build("arcs", name, lambda: _make_route(rec))
        return rec["curves"], arc, rec.get("direction", "front")

    def anchor_for(self, curves_name: str):
        if not self.conventions:
            return None
        anchor = self.conventions.get("sign_anchors", {}).get(curves_name)
        if anchor is None:
            return None
        return ((anchor["face"], anchor["slot"], anchor["t"]), anchor["sign"])

    def convex_structure(self, name: str) -> ConvexStructure:
        rec = self.convex_structures[name]

        def make():
            pieces = []
            pending = []
            for p in rec["pieces"]:
                cores = None
                if "curves" in p:
                    cores = self.curve_system(p["curves"])
                if p.get("toroidal", False):
                    pending.append(p["name"])
                pieces.append(
                    SuturedPiece(
                        p["name"],
                        self.surface(p["surface"]),
                        cores=cores,
                        toroidal=p.get("toroidal", False),
                        anchor=self.anchor_for(p["curves"]) if "curves" in p else None,
                    )
                )
            convex = sutured_to_convex(
                SuturedPresentation(name, tuple(pieces)), pending_tori=pending
            )
            if not rec.get("irreducible", True):
                convex = ConvexStructure(convex.name, convex.boundary, False)
            return convex

        return self._build("convex_structures", name, make)

    def script(self, name: str) -> tuple:
        steps = self.splitting_scripts[name]

        def make():
            out = []
            for step in steps:
                sigma = None
                if "sigma" in step:
                    sigma = self.curve_system(step["sigma"])
                out.append(
                    SplittingSurface(
                        step["piece"],
                        self.surface(step["surface"]),
                        sigma,
                        tuple(tuple(c) for c in step["cuts"]),
                        dict(step["correspondence"]),
                    )
                )
            return tuple(out)

        return self._build("splitting_scripts", name, make)

    def slab(self, name: str):
        rec = self.slabs[name]

        def make():
            if "curve_count" in rec:
                return TorusModel(
                    rec["curve_count"], rec["slope"], rec.get("torsion", 0)
                )
            pair = tuple(rec.get("pair", ["a", "b"]))
            return SigmaISlab(
                rec["genus"],
                pair,
                pair,
                rec.get("product", False),
                rec.get("straddled_bottom"),
                rec.get("straddled_top"),
            )

        return self._build("slabs", name, make)


def _make_surface(rec) -> PolygonalSurface:
    kind = rec["kind"]
    if kind == "disk":
        if "boundary" in rec:
            return standard_disk(tuple(rec["boundary"]))
        return standard_disk(rec.get("edge_count", 1))
    if kind == "rectangle":
        return standard_rectangle(**rec.get("sides", {}))
    if kind == "annulus":
        return standard_annulus(
            rec.get("bot", "bot"), rec.get("top", "top"), rec.get("seam", "seam")
        )
    if kind == "torus":
        return standard_torus(*rec.get("basis", ["a", "b"]))
    if kind == "sphere":
        return standard_sphere(*rec.get("edges", ["a", "b"]))
    return PolygonalSurface({f: tuple(w) for f, w in rec["faces"].items()})


def _make_system(surface, rec) -> CurveSystem:
    closed, arcs, floats = [], [], []
    for comp in rec["components"]:
        (kind, body), = comp.items()
        if kind == "closed":
            closed.append(ClosedComponent(tuple(Crossing(s, t) for s, t in body)))
        elif kind == "arc":
            arcs.append(
                ArcComponent(
                    BoundaryPoint(*body["start"]),
                    tuple(Crossing(s, t) for s, t in body.get("crossings", [])),
                    BoundaryPoint(*body["end"]),
                )
            )
        else:
            floats.append(
                FloatingCircle(
                    body["face"], body["slot"], body["t"], body.get("depth", 0)
                )
            )
    return CurveSystem(surface, tuple(closed), tuple(arcs), tuple(floats))


def _make_route(rec) -> AttachArc:
    stops = []
    for stop in rec["stops"]:
        (kind, body), = stop.items()
        if kind == "anchor":
            stops.append(AnchorStop(tuple(body["component"]), body["chord"], body["s"]))
        elif kind == "edge":
            stops.append(EdgeStop(body[0], body[1]))
        else:
            stops.append(FreeStop(body["face"], body["x"], body["y"]))
    return AttachArc(tuple(stops))


# -- parse / serialize ---------------------------------------------------------------


def parse_document(text: str) -> Document:
    """Validated Document, or the first error with its location."""
    try:
        tree = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise DocumentSyntaxError(f"not valid YAML: {exc}") from exc
    if tree is None:
        tree = {}
    if not isinstance(tree, dict):
        _fail(f"a document is a mapping, got {type(tree).__name__}", "")
    for key in tree:
        if key not in ("version", "conventions") + SECTIONS:
            _fail(f"unknown section {key!r}", str(key))

    if "version" not in tree:
        _fail("missing format version", "version")
    version = tree["version"]
    version = str(version) if isinstance(version, int) else version
    if not isinstance(version, str) or version not in KNOWN_VERSIONS:
        raise UnknownVersion(
            f"version {version!r}; this build reads {', '.join(KNOWN_VERSIONS)}",
            location="version",
        )

    conventions = tree.get("conventions")
    if conventions is not None:
        _check_conventions(conventions)

    doc = Document(
        version,
        conventions,
        _named_section(tree, "surfaces"),
        _named_section(tree, "curves"),
        _named_section(tree, "arcs"),
        _named_section(tree, "convex_structures"),
        _named_section(tree, "splitting_scripts"),
        _named_section(tree, "slabs"),
    )

    for name, rec in doc.surfaces.items():
        _check_surface(rec, f"surfaces/{name}")
    for name, rec in doc.curves.items():
        _check_curves(rec, f"curves/{name}")
    for name, rec in doc.arcs.items():
        _check_route(rec, f"arcs/{name}")
    for name, rec in doc.convex_structures.items():
        _check_convex(rec, f"convex_structures/{name}")
    for name, steps in doc.splitting_scripts.items():
        _check_script(steps, f"splitting_scripts/{name}")
    for name, rec in doc.slabs.items():
        _check_slab(rec, f"slabs/{name}")

    _check_references(doc)

    # run the core constructors now so a broken record fails the parse,
    # not the first command that happens to touch it; routes stay lazy
    # because route validity is a command-time domain question
    for name in doc.surfaces:
        doc.surface(name)
    for name in doc.curves:
        doc.curve_system(name)
    for name in doc.arcs:
        doc.attach_route(name)
    for name in doc.convex_structures:
        doc.convex_structure(name)
    for name in doc.splitting_scripts:
        doc.script(name)
    for name in doc.slabs:
        doc.slab(name)
    return doc


def _check_references(doc: Document):
    def need(section, name, path):
        if name not in getattr(doc, section):
            raise DanglingReference(
                f"no {section} record named {name!r}", location=path
            )

    for name, rec in doc.curves.items():
        need("surfaces", rec["surface"], f"curves/{name}/surface")
    for name, rec in doc.arcs.items():
        need("curves", rec["curves"], f"arcs/{name}/curves")
    for name, rec in doc.convex_structures.items():
        for i, p in enumerate(rec["pieces"]):
            need("surfaces", p["surface"], f"convex_structures/{name}/pieces/{i}/surface")
            if "curves" in p:
                need("curves", p["curves"], f"convex_structures/{name}/pieces/{i}/curves")
    for name, steps in doc.splitting_scripts.items():
        for i, step in enumerate(steps):
            need("surfaces", step["surface"], f"splitting_scripts/{name}/{i}/surface")
            if "sigma" in step:
                need("curves", step["sigma"], f"splitting_scripts/{name}/{i}/sigma")
    if doc.conventions:
        for cname in doc.conventions.get("sign_anchors", {}):
            need("curves", cname, f"conventions/sign_anchors/{cname}")


def _plain(node):
    """The tree with Fractions written back as p/q strings."""
    if isinstance(node, Fraction):
        return str(node)
    if isinstance(node, dict):
        return {k: _plain(v) for k, v in node.items()}
    if isinstance(node, (list, tuple)):
        return [_plain(v) for v in node]
    return node


def serialize_document(doc: Document) -> str:
    tree = {"version": doc.version}
    if doc.conventions is not None:
        tree["conventions"] = _plain(doc.conventions)
    for section in SECTIONS:
        records = getattr(doc, section)
        if records:
            tree[section] = _plain(records)
    return yaml.safe_dump(tree, sort_keys=False, default_flow_style=False)
