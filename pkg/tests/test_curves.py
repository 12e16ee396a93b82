"""Curve system validation and bigon normalization."""

from fractions import Fraction

import pytest

from convexcut.curves import (
    ArcComponent,
    BoundaryPoint,
    ClosedComponent,
    Crossing,
    CurveSystem,
    FloatingCircle,
    build_charts,
)
from convexcut.surfaces import standard_annulus, standard_torus

F = Fraction


def closed(*crossings):
    return ClosedComponent(tuple(Crossing(s, F(t)) for s, t in crossings))


def test_torus_basis_curve():
    t = standard_torus()
    sys = CurveSystem(t, closed=[closed(("a", "1/2"))])
    assert sys.num_components == 1
    assert len(sys.chords()) == 1
    assert sys.is_normal
    ch = sys.chords()[0]
    assert ch.face == "T"
    assert ch.a_slot != ch.b_slot


def test_torus_diagonal_curve():
    t = standard_torus()
    sys = CurveSystem(t, closed=[closed(("a", "1/2"), ("b", "1/2"))])
    assert len(sys.chords()) == 2
    assert sys.is_normal


def test_dual_basis_curves_cross():
    t = standard_torus()
    with pytest.raises(ValueError, match="cross"):
        CurveSystem(t, closed=[closed(("a", "1/2")), closed(("b", "1/2"))])


def test_parallel_curves_ok():
    t = standard_torus()
    sys = CurveSystem(t, closed=[closed(("a", "1/3")), closed(("a", "2/3"))])
    assert sys.num_components == 2


def test_annulus_core():
    a = standard_annulus()
    sys = CurveSystem(a, closed=[closed(("seam", "1/2"))])
    assert sys.is_normal
    assert len(sys.chords()) == 1


def test_boundary_parallel_arc():
    a = standard_annulus()
    arc = ArcComponent(BoundaryPoint("bot", F(1, 4)), (), BoundaryPoint("bot", F(3, 4)))
    sys = CurveSystem(a, arcs=[arc])
    assert sys.is_normal
    assert len(sys.chords()) == 1


def test_arc_crossing_seam():
    a = standard_annulus()
    arc = ArcComponent(
        BoundaryPoint("bot", F(1, 4)),
        (Crossing("seam", F(1, 2)),),
        BoundaryPoint("bot", F(3, 4)),
    )
    sys = CurveSystem(a, arcs=[arc])
    assert len(sys.chords()) == 2


def test_bad_inputs():
    a = standard_annulus()
    with pytest.raises(ValueError, match="not an interior edge"):
        CurveSystem(a, closed=[closed(("bot", "1/2"))])
    with pytest.raises(ValueError, match="not a boundary edge"):
        CurveSystem(
            a,
            arcs=[ArcComponent(BoundaryPoint("seam", F(1, 2)), (),
                               BoundaryPoint("bot", F(1, 2)))],
        )
    with pytest.raises(ValueError, match="coincide"):
        CurveSystem(a, closed=[closed(("seam", "1/2")), closed(("seam", "1/2"))])
    with pytest.raises(ValueError):
        Crossing("seam", F(0))
    with pytest.raises(ValueError):
        ClosedComponent(())


def test_face_chain_mismatch():
    t = standard_torus()
    # a lone crossing of "a" followed immediately by another lone "a"
    # crossing forces a chord between the right faces, so that's fine;
    # but a sphere-like mismatch is caught on multi-face surfaces
    from convexcut.surfaces import PolygonalSurface

    s = PolygonalSurface({"F0": ("a", "x", "-x"), "F1": ("-a", "y", "-y")})
    with pytest.raises(ValueError, match="chain"):
        CurveSystem(s, closed=[closed(("x", "1/2"), ("y", "1/2"))])


def test_float_chain_validation():
    a = standard_annulus()
    CurveSystem(a, floats=[FloatingCircle("A", 0, F(1, 2), 0),
                           FloatingCircle("A", 0, F(1, 2), 1)])
    with pytest.raises(ValueError, match="chain"):
        CurveSystem(a, floats=[FloatingCircle("A", 0, F(1, 2), 1)])
    with pytest.raises(ValueError, match="chain"):
        CurveSystem(a, floats=[FloatingCircle("A", 0, F(1, 2), 0),
                               FloatingCircle("A", 0, F(1, 2), 2)])
    # distinct probes need no chain relation
    CurveSystem(a, floats=[FloatingCircle("A", 0, F(1, 3), 0),
                           FloatingCircle("A", 0, F(2, 3), 0)])


def test_trivial_circle_collapses_to_float():
    a = standard_annulus()
    sys = CurveSystem(
        a, closed=[closed(("seam", "1/3"), ("-seam", "2/3"))]
    )
    assert not sys.is_normal
    norm = sys.normalize()
    assert len(norm.closed) == 0
    assert len(norm.floats) == 1
    fl = norm.floats[0]
    assert fl.face == "A" and fl.t == F(1, 2) and fl.depth == 0


def test_collapse_captures_trapped_float():
    a = standard_annulus()
    sys = CurveSystem(
        a,
        closed=[closed(("seam", "1/3"), ("-seam", "2/3"))],
        floats=[FloatingCircle("A", 1, F(1, 2), 0)],
    )
    norm = sys.normalize()
    assert len(norm.closed) == 0
    assert len(norm.floats) == 2
    depths = sorted((fl.depth, fl.probe) for fl in norm.floats)
    # the collapsing circle swallows the old float: same probe, new outer level
    assert depths[0][0] == 0 and depths[1][0] == 1
    assert depths[0][1] == depths[1][1] == ("A", 1, F(1, 2))


def test_arc_bigon_reduction():
    a = standard_annulus()
    arc = ArcComponent(
        BoundaryPoint("bot", F(1, 10)),
        (Crossing("seam", F(1, 3)), Crossing("-seam", F(2, 3))),
        BoundaryPoint("bot", F(9, 10)),
    )
    sys = CurveSystem(a, arcs=[arc])
    assert not sys.is_normal
    norm = sys.normalize()
    assert len(norm.arcs) == 1
    assert norm.arcs[0].crossings == ()
    assert norm.is_normal


def test_nested_circles_collapse_to_chain():
    a = standard_annulus()
    # outer circle spans the inner circle's crossings, so the inner pair
    # must cancel first; the outer collapse then swallows the inner float
    sys = CurveSystem(
        a,
        closed=[
            closed(("seam", "1/5"), ("-seam", "4/5")),
            closed(("seam", "2/5"), ("-seam", "3/5")),
        ],
    )
    norm = sys.normalize()
    assert len(norm.closed) == 0
    assert len(norm.floats) == 2
    probes = {fl.probe for fl in norm.floats}
    assert len(probes) == 1
    assert sorted(fl.depth for fl in norm.floats) == [0, 1]


def test_points_on_edge_sorted():
    a = standard_annulus()
    sys = CurveSystem(
        a,
        closed=[closed(("seam", "1/2")), closed(("seam", "1/4"))],
        floats=[FloatingCircle("A", 1, F(3, 4), 0)],
    )
    pts = sys.points_on_edge("seam")
    assert [p[0] for p in pts] == [F(1, 4), F(1, 2), F(3, 4)]
    assert [p[1] for p in pts] == ["crossing", "crossing", "probe"]


def test_build_charts_shapes():
    t = standard_torus()
    sys = CurveSystem(t, closed=[closed(("a", "1/3")), closed(("a", "2/3"))])
    charts = build_charts([("g", sys)])
    assert set(charts) == {"T"}
    chart = charts["T"]
    assert chart.size == 4 + 4  # four corners, four crossing items
    assert len(chart.cells()) == 3
