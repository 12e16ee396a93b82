"""Combinatorics of dividing curves on polygonal surfaces.

The package models surfaces as glued polygons, curve systems on them as
exact-rational chord diagrams, and implements the moves used to study
them: two-coloring and Euler counts, surgery along attached arcs,
cutting along boundary-parallel systems with corner rounding, and a
symbolic calculus of layered blocks.
"""

from .bypass import (
    AnchorStop,
    AttachArc,
    BypassResult,
    EdgeStop,
    FreeStop,
    apply_bypass,
    enumerate_attach_arcs,
)
from .canonical import canonical_signature
from .curves import (
    ArcComponent,
    BoundaryPoint,
    ClosedComponent,
    Crossing,
    CurveSystem,
    FloatingCircle,
)
from .decompose import (
    ConvexBoundary,
    ConvexStructure,
    DecompositionReport,
    SplitResult,
    SplittingSurface,
    SuturedPiece,
    SuturedPresentation,
    enumerate_sigmas,
    explore,
    make_boundary_parallel_sigma,
    split,
    sutured_to_convex,
    tight_ball_check,
)
from .document import Document, parse_document, serialize_document
from .regions import (
    DividingAnalysis,
    RegionDecomposition,
    analyze_dividing_set,
    giroux_criterion,
    is_non_isolating,
    is_null_homotopic,
)
from .slabs import (
    SigmaISlab,
    TorusModel,
    addition_check,
    bundle_glue_check,
    bundle_survey,
    legendrian_neighborhood,
    nonproduct_slabs,
    pair_identifications,
    product_slab,
    relabel_boundary,
    torsion_insert,
    vertical_annulus_count,
)
from .surfaces import (
    PolygonalSurface,
    Slot,
    mirror_surface,
    standard_annulus,
    standard_disk,
    standard_rectangle,
    standard_sphere,
    standard_torus,
)
from .svg import render_chart_svg, render_panels, render_svg

__all__ = [
    "AnchorStop",
    "ArcComponent",
    "AttachArc",
    "BoundaryPoint",
    "BypassResult",
    "ClosedComponent",
    "ConvexBoundary",
    "ConvexStructure",
    "Crossing",
    "CurveSystem",
    "DecompositionReport",
    "DividingAnalysis",
    "Document",
    "EdgeStop",
    "FloatingCircle",
    "FreeStop",
    "PolygonalSurface",
    "RegionDecomposition",
    "SigmaISlab",
    "Slot",
    "SplitResult",
    "SplittingSurface",
    "SuturedPiece",
    "SuturedPresentation",
    "TorusModel",
    "addition_check",
    "analyze_dividing_set",
    "apply_bypass",
    "bundle_glue_check",
    "bundle_survey",
    "canonical_signature",
    "enumerate_attach_arcs",
    "enumerate_sigmas",
    "explore",
    "giroux_criterion",
    "is_non_isolating",
    "is_null_homotopic",
    "legendrian_neighborhood",
    "make_boundary_parallel_sigma",
    "mirror_surface",
    "nonproduct_slabs",
    "pair_identifications",
    "parse_document",
    "product_slab",
    "relabel_boundary",
    "render_chart_svg",
    "render_panels",
    "render_svg",
    "serialize_document",
    "split",
    "standard_annulus",
    "standard_disk",
    "standard_rectangle",
    "standard_sphere",
    "standard_torus",
    "sutured_to_convex",
    "tight_ball_check",
    "torsion_insert",
    "vertical_annulus_count",
]

__version__ = "0.1.0"
