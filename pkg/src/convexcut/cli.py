"""Command orchestration: documents in, deterministic reports out.

Exit codes: 0 success, 1 domain error (a core validator or verdict
rejected the input), 2 usage or document error.  Every failure prints
one ``error[CODE]: message`` line on stderr; codes are stable.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import yaml

from .bypass import apply_bypass
from .canonical import canonical_signature
from .decompose import explore, split, tight_ball_check
from .errors import (
    DanglingReference,
    DocumentError,
    DomainError,
    InvariantViolation,
    UnsupportedSurface,
)
from .document import Document, parse_document
from .regions import analyze_dividing_set, giroux_criterion
from .slabs import (
    OVERTWISTED,
    SigmaISlab,
    TIGHT,
    TorusModel,
    addition_check,
    bundle_glue_check,
    bundle_survey,
    legendrian_neighborhood,
    nonproduct_slabs,
    pair_identifications,
    torsion_insert,
    vertical_annulus_count,
)
from . import svg as svgmod

REPORT_VERSION = "1"


def _plain(node):
    """JSON-safe copy: Fractions as p/q strings, sets sorted, tuples as lists."""
    if isinstance(node, Fraction):
        return str(node)
    if isinstance(node, dict):
        return {str(k): _plain(v) for k, v in node.items()}
    if isinstance(node, (frozenset, set)):
        items = [_plain(v) for v in node]
        return sorted(items, key=lambda v: json.dumps(v, sort_keys=True))
    if isinstance(node, (list, tuple)):
        return [_plain(v) for v in node]
    return node


@dataclass
class Report:
    command: tuple[str, ...]
    results: dict
    diagnostics: list = field(default_factory=list)

    def to_tree(self) -> dict:
        return {
            "report_version": REPORT_VERSION,
            "command": list(self.command),
            "results": _plain(self.results),
            "diagnostics": _plain(self.diagnostics),
        }

    def to_text(self) -> str:
        return yaml.safe_dump(self.to_tree(), sort_keys=True, default_flow_style=False)

    def to_json(self) -> str:
        return json.dumps(self.to_tree(), sort_keys=True, indent=2) + "\n"


# -- command bodies -----------------------------------------------------------------


def _require_conventions(doc: Document, verb: str):
    if not doc.conventions:
        raise InvariantViolation(
            f"the {verb} command needs a conventions block "
            "(rounding_direction, sign_anchors)",
            location="conventions",
        )


def _cmd_validate(doc: Document, args) -> Report:
    results = {
        "ok": True,
        "counts": {
            "surfaces": len(doc.surfaces),
            "curves": len(doc.curves),
            "arcs": len(doc.arcs),
            "convex_structures": len(doc.convex_structures),
            "splitting_scripts": len(doc.splitting_scripts),
            "slabs": len(doc.slabs),
        },
    }
    return Report(("validate",), results)


def _analysis_row(analysis) -> dict:
    return {
        "chi_plus": analysis.chi_plus,
        "chi_minus": analysis.chi_minus,
        "euler_class": analysis.euler_class,
        "num_regions": analysis.num_regions,
        "extremal": analysis.is_extremal,
        "extremal_positive": analysis.extremal_positive,
        "extremal_negative": analysis.extremal_negative,
    }


def _cmd_analyze(doc: Document, args) -> Report:
    target = args.target
    if target in doc.curves:
        system = doc.curve_system(target)
        analysis = analyze_dividing_set(system, anchor=doc.anchor_for(target))
        results = {
            "target": target,
            "kind": "curves",
            "num_components": system.num_components,
            "giroux": giroux_criterion(system),
            **_analysis_row(analysis),
        }
        return Report(("analyze", target), results)
    if target in doc.convex_structures:
        convex = doc.convex_structure(target)
        pieces = {}
        for piece in convex.boundary:
            if piece.analysis is None:
                pieces[piece.name] = {"pending": True}
            else:
                pieces[piece.name] = {
                    "num_components": piece.gamma.num_components,
                    "giroux": giroux_criterion(piece.gamma),
                    **_analysis_row(piece.analysis),
                }
        results = {"target": target, "kind": "convex_structure", "pieces": pieces}
        return Report(("analyze", target), results)
    raise DanglingReference(
        f"no curves or convex_structures record named {target!r}", location=target
    )


def _cmd_classify(doc: Document, args) -> Report:
    system = _need(doc, "curves", args.target).curve_system(args.target)
    signature = canonical_signature(system)
    results = {
        "target": args.target,
        "surface_kind": system.surface.kind,
        "signature": signature,
    }
    return Report(("classify", args.target), results)


def _cmd_bypass(doc: Document, args) -> Report:
    _require_conventions(doc, "bypass")
    curves_name, arc, direction = _need(doc, "arcs", args.route).attach_route(
        args.route
    )
    system = doc.curve_system(curves_name)
    result = apply_bypass(system, arc, direction)
    results = {
        "route": args.route,
        "curves": curves_name,
        "direction": direction,
        "verdict": result.verdict,
        "components_before": system.num_components,
        "components_after": result.system.num_components,
    }
    try:
        results["signature_before"] = canonical_signature(system)
        results["signature_after"] = canonical_signature(result.system)
    except UnsupportedSurface:
        pass
    report = Report(("bypass", args.route), results)
    if args.svg:
        path = _write_svg(
            args.svg,
            f"bypass_{args.route}",
            svgmod.render_panels(
                [("before", system), ("after", result.system)]
            ),
        )
        report.diagnostics.append({"code": "SvgWritten", "message": path})
    return report


def _cmd_split(doc: Document, args) -> Report:
    _require_conventions(doc, "split")
    convex = _need(doc, "convex_structures", args.structure).convex_structure(
        args.structure
    )
    steps = _need(doc, "splitting_scripts", args.script).script(args.script)
    rounding = doc.conventions["rounding_direction"]
    state = convex
    rows = []
    panels = []
    for i, step in enumerate(steps):
        if step.sigma is None:
            raise InvariantViolation(
                "split needs an explicit sigma on every step; "
                "use explore to enumerate choices",
                location=f"splitting_scripts/{args.script}/{i}",
            )
        if args.svg and not panels:
            panels.append((f"before {step.piece}", state.piece(step.piece).gamma))
        outcome = split(state, step, rounding=rounding)
        state = outcome.structure
        rows.append(
            {
                "piece": step.piece,
                "euler_pair": list(outcome.euler_pair),
                "new_pieces": list(outcome.new_pieces),
            }
        )
    pieces = {
        p.name: {
            "num_components": p.gamma.num_components,
            "closed_ball": p.surface.is_closed
            and p.surface.euler_characteristic == 2,
        }
        for p in state.boundary
    }
    results = {
        "structure": args.structure,
        "script": args.script,
        "rounding": rounding,
        "steps": rows,
        "pieces": pieces,
    }
    report = Report(("split", args.structure, args.script), results)
    if args.svg:
        panels.extend((f"after {p.name}", p.gamma) for p in state.boundary)
        path = _write_svg(
            args.svg,
            f"split_{args.structure}_{args.script}",
            svgmod.render_panels(panels),
        )
        report.diagnostics.append({"code": "SvgWritten", "message": path})
    return report


def _cmd_explore(doc: Document, args) -> Report:
    _require_conventions(doc, "explore")
    convex = _need(doc, "convex_structures", args.structure).convex_structure(
        args.structure
    )
    steps = _need(doc, "splitting_scripts", args.script).script(args.script)
    rounding = doc.conventions["rounding_direction"]
    report = explore(convex, steps, rounding=rounding)
    results = {
        "structure": args.structure,
        "script": args.script,
        "rounding": rounding,
        "candidate_count": report.candidate_count,
        "pruned": report.pruned,
        "indistinguishable": [list(g) for g in report.indistinguishable],
        "leaves": [
            {
                "choices": list(leaf.choices),
                "euler_pairs": [list(p) for p in leaf.euler_pairs],
                "verdict": leaf.verdict,
            }
            for leaf in report.leaves
        ],
    }
    return Report(("explore", args.structure, args.script), results)


def _cmd_slabs(doc: Document, args) -> Report:
    if args.what[0] == "neighborhood":
        if len(args.what) != 2:
            raise InvariantViolation("usage: slabs neighborhood K")
        model = legendrian_neighborhood(_int_arg(args.what[1]))
        results = {
            "curve_count": model.curve_count,
            "slope": model.slope,
            "torsion": model.torsion,
            "unique": model.unique,
        }
        return Report(("slabs",) + tuple(args.what), results)
    if len(args.what) != 1:
        raise InvariantViolation("usage: slabs GENUS | slabs neighborhood K")
    genus = _int_arg(args.what[0])
    slabs = nonproduct_slabs(genus)
    addition = {}
    overtwisted = 0
    for i, low in enumerate(slabs):
        for j, high in enumerate(slabs):
            verdict = addition_check(low, high)
            addition[f"{i},{j}"] = verdict
            overtwisted += verdict == OVERTWISTED
    survey = bundle_survey(genus)
    results = {
        "genus": genus,
        "slab_count": len(slabs),
        "slabs": [
            {
                "straddled_bottom": s.straddled_bottom,
                "straddled_top": s.straddled_top,
            }
            for s in slabs
        ],
        "addition": addition,
        "addition_overtwisted": overtwisted,
        "bundle": {
            name: {
                "tight_count": len(row["tight"]),
                "class_count": row["class_count"],
            }
            for name, row in survey.items()
        },
    }
    return Report(("slabs",) + tuple(args.what), results)


def _cmd_glue(doc: Document, args) -> Report:
    first = args.what[0]
    if len(args.what) != 2:
        raise InvariantViolation(
            "usage: glue LOWER UPPER | glue SLAB straight|crossed | glue MODEL K"
        )
    second = args.what[1]
    obj = _need(doc, "slabs", first).slab(first)
    if second in doc.slabs:
        upper = doc.slab(second)
        if not isinstance(obj, SigmaISlab) or not isinstance(upper, SigmaISlab):
            raise InvariantViolation(
                "stacking verdicts need two slab records", location=f"slabs/{first}"
            )
        results = {"lower": first, "upper": second,
                   "verdict": addition_check(obj, upper)}
        return Report(("glue", first, second), results)
    if second in ("straight", "crossed"):
        if not isinstance(obj, SigmaISlab):
            raise InvariantViolation(
                "bundle verdicts need a slab record", location=f"slabs/{first}"
            )
        ident = _pair_ident(obj, second)
        results = {"slab": first, "identification": second,
                   "verdict": bundle_glue_check(obj, ident)}
        return Report(("glue", first, second), results)
    k = _int_arg(second)
    if not isinstance(obj, TorusModel):
        raise InvariantViolation(
            "layer insertion needs a torus model record", location=f"slabs/{first}"
        )
    model = torsion_insert(obj, k)
    results = {
        "model": first,
        "inserted": k,
        "torsion": model.torsion,
        "vertical_annulus_count": vertical_annulus_count(model),
    }
    return Report(("glue", first, second), results)


def _pair_ident(slab: SigmaISlab, name: str) -> dict:
    straight = {t: b for t, b in zip(slab.top_pair, slab.bottom_pair)}
    if name == "straight":
        return straight
    return {t: b for t, b in zip(slab.top_pair, reversed(slab.bottom_pair))}


def _int_arg(token: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise DanglingReference(f"expected an integer or a known record, got {token!r}")


def _need(doc: Document, section: str, name: str) -> Document:
    if name not in getattr(doc, section):
        raise DanglingReference(f"no {section} record named {name!r}", location=name)
    return doc


# -- svg plumbing -------------------------------------------------------------------


def _write_svg(directory: str, stem: str, text: str) -> str:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{stem}.svg"
    path.write_text(text)
    return str(path)


def _maybe_render(report: Report, doc: Document, args):
    """Attach single-system diagrams for analyze/classify."""
    if not getattr(args, "svg", None):
        return
    target = getattr(args, "target", None)
    if target and target in doc.curves:
        system = doc.curve_system(target)
        try:
            text = svgmod.render_svg(system)
        except UnsupportedSurface:
            text = svgmod.render_chart_svg(system)
            report.diagnostics.append(
                {
                    "code": "UnsupportedSurface",
                    "message": "no direct rendering for this model; "
                    "drew the cut polygon chart instead",
                }
            )
        path = _write_svg(args.svg, f"{report.command[0]}_{target}", text)
        report.diagnostics.append({"code": "SvgWritten", "message": path})


# -- entry point --------------------------------------------------------------------


def _load(args) -> Document:
    if getattr(args, "input", None):
        text = Path(args.input).read_text()
    else:
        text = 'version: "1"\n'
    return parse_document(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="convexcut",
        description="dividing-set calculus on polygonal surfaces",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p):
        p.add_argument("--input", help="document file (YAML)")
        p.add_argument("--output", help="write the report here instead of stdout")
        p.add_argument("--svg", help="directory for SVG diagrams")
        p.add_argument("--json", action="store_true", help="JSON report format")

    p = sub.add_parser("validate", help="parse and check a document")
    common(p)

    p = sub.add_parser("analyze", help="two-color a dividing set and tally")
    p.add_argument("target", help="curves or convex_structures record")
    common(p)

    p = sub.add_parser("classify", help="canonical isotopy signature")
    p.add_argument("target", help="curves record")
    common(p)

    p = sub.add_parser("bypass", help="attach a bypass along a stored route")
    p.add_argument("route", help="arcs record")
    common(p)

    p = sub.add_parser("split", help="run a splitting script with explicit sigmas")
    p.add_argument("structure")
    p.add_argument("script")
    common(p)

    p = sub.add_parser("explore", help="enumerate sigma choices along a script")
    p.add_argument("structure")
    p.add_argument("script")
    common(p)

    p = sub.add_parser("slabs", help="slab tables: slabs GENUS | slabs neighborhood K")
    p.add_argument("what", nargs="+")
    common(p)

    p = sub.add_parser(
        "glue", help="verdicts: glue LOWER UPPER | glue SLAB straight|crossed | glue MODEL K"
    )
    p.add_argument("what", nargs="+")
    common(p)

    return parser


_COMMANDS = {
    "validate": _cmd_validate,
    "analyze": _cmd_analyze,
    "classify": _cmd_classify,
    "bypass": _cmd_bypass,
    "split": _cmd_split,
    "explore": _cmd_explore,
    "slabs": _cmd_slabs,
    "glue": _cmd_glue,
}


def execute(doc: Document, command: Sequence[str]) -> Report:
    """Run one command against a parsed document.

    ``command`` is the argv tail, e.g. ("explore", "M", "meridians").
    Raises DocumentError for reference and usage problems and other
    DomainError subtypes for verdict-level failures.
    """
    parser = build_parser()
    args = parser.parse_args(list(command))
    body = _COMMANDS[args.verb]
    report = body(doc, args)
    _maybe_render(report, doc, args)
    return report


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc = _load(args)
        report = _COMMANDS[args.verb](doc, args)
        _maybe_render(report, doc, args)
    except DocumentError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error[IO]: {exc}", file=sys.stderr)
        return 2
    text = report.to_json() if args.json else report.to_text()
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
