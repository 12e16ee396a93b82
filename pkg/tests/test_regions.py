from fractions import Fraction as F

import pytest

from convexcut.curves import (
    ArcComponent,
    BoundaryPoint,
    ClosedComponent,
    Crossing,
    CurveSystem,
    FloatingCircle,
)
from convexcut.errors import EmptyOnComponent, IsArc, NotDividing, NotTransverse
from convexcut.regions import (
    RegionDecomposition,
    analyze_dividing_set,
    giroux_criterion,
    is_non_isolating,
    is_null_homotopic,
)
from convexcut.surfaces import (
    PolygonalSurface,
    standard_annulus,
    standard_disk,
    standard_sphere,
    standard_torus,
)


def genus_two():
    return PolygonalSurface({"O": ("a", "b", "-a", "-b", "c", "d", "-c", "-d")})


def dual(edge, t):
    # circle crossing the given edge once
    return ClosedComponent((Crossing(edge, F(t)),))


def genus_two_pair():
    surface = genus_two()
    system = CurveSystem(surface, closed=[dual("a", F(1, 3)), dual("a", F(2, 3))])
    return surface, system


def test_genus_two_pair_region_shapes():
    surface, system = genus_two_pair()
    dec = RegionDecomposition(system)
    assert len(dec.regions) == 2
    assert sorted(r.euler for r in dec.regions) == [-2, 0]
    for region in dec.regions:
        assert region.kind == "base"
        assert not region.touches_boundary
        assert region.surface.num_boundary_components == 2
        assert region.components == {("g", ("closed", 0)), ("g", ("closed", 1))}
    assert sum(r.euler for r in dec.regions) == surface.euler_characteristic


def test_genus_two_pair_coloring_and_euler_number():
    _, system = genus_two_pair()
    # paint the large region positive: slot 1 is edge b, away from the curves
    plus_big = analyze_dividing_set(system, anchor=(("O", 1, F(1, 2)), 1))
    assert (plus_big.chi_plus, plus_big.chi_minus) == (-2, 0)
    assert plus_big.euler_class == -2
    assert plus_big.extremal_positive and not plus_big.extremal_negative
    assert plus_big.is_extremal

    minus_big = analyze_dividing_set(system, anchor=(("O", 1, F(1, 2)), -1))
    assert minus_big.euler_class == 2
    assert minus_big.extremal_negative


def test_single_nonseparating_curve_is_not_dividing():
    system = CurveSystem(standard_torus(), closed=[dual("a", F(1, 2))])
    with pytest.raises(NotDividing):
        analyze_dividing_set(system)


def test_annulus_core_divides_into_two_annuli():
    system = CurveSystem(standard_annulus(), closed=[dual("seam", F(1, 2))])
    analysis = analyze_dividing_set(system)
    dec = analysis.decomposition
    assert len(dec.regions) == 2
    assert [r.euler for r in dec.regions] == [0, 0]
    assert all(r.touches_boundary for r in dec.regions)
    assert analysis.euler_class == 0
    assert analysis.is_extremal  # chi of the annulus is 0 as well


def test_disk_with_boundary_arc():
    surface = standard_disk(("r1", "r2", "r3", "r4"))
    arc = ArcComponent(BoundaryPoint("r1", F(1, 4)), (), BoundaryPoint("r1", F(3, 4)))
    system = CurveSystem(surface, arcs=[arc])
    analysis = analyze_dividing_set(system)
    dec = analysis.decomposition
    assert [r.euler for r in dec.regions] == [1, 1]
    # cutting along a proper arc raises the total by one
    assert sum(r.euler for r in dec.regions) == surface.euler_characteristic + 1
    assert analysis.euler_class == 0


def test_sphere_nested_chain_regions():
    sphere = standard_sphere()
    chain = [FloatingCircle("N", 0, F(1, 2), 0), FloatingCircle("N", 0, F(1, 2), 1)]
    system = CurveSystem(sphere, floats=chain)
    analysis = analyze_dividing_set(system)
    dec = analysis.decomposition
    assert sorted((r.kind, r.euler) for r in dec.regions) == [
        ("base", 1),
        ("core", 1),
        ("ring", 0),
    ]
    # base anchored positive, alternating inward: disk + disk vs annulus
    assert (analysis.chi_plus, analysis.chi_minus) == (2, 0)
    assert analysis.euler_class == 2
    core = next(r for r in dec.regions if r.kind == "core")
    assert core.is_disk


def test_null_homotopy_detection():
    torus = standard_torus()
    bubble = ClosedComponent((Crossing("a", F(1, 4)), Crossing("-a", F(3, 4))))
    system = CurveSystem(torus, closed=[bubble, dual("b", F(1, 2))])
    assert is_null_homotopic(system, ("closed", 0))
    assert not is_null_homotopic(system, ("closed", 1))

    floaty = CurveSystem(torus, floats=[FloatingCircle("T", 0, F(1, 2), 0)])
    assert is_null_homotopic(floaty, ("float", 0))

    disk = standard_disk(("r1", "r2"))
    arc = ArcComponent(BoundaryPoint("r1", F(1, 3)), (), BoundaryPoint("r1", F(2, 3)))
    with pytest.raises(IsArc):
        is_null_homotopic(CurveSystem(disk, arcs=[arc]), ("arc", 0))


def test_giroux_criterion_cases():
    sphere = PolygonalSurface({"F": ("a", "-a")})
    one = CurveSystem(sphere, closed=[dual("a", F(1, 2))])
    assert giroux_criterion(one)
    two = CurveSystem(sphere, closed=[dual("a", F(1, 3)), dual("a", F(2, 3))])
    assert not giroux_criterion(two)
    lone_float = CurveSystem(standard_sphere(), floats=[FloatingCircle("N", 0, F(1, 2), 0)])
    assert giroux_criterion(lone_float)

    _, pair = genus_two_pair()
    assert giroux_criterion(pair)
    surface = genus_two()
    with_float = CurveSystem(
        surface,
        closed=[dual("a", F(1, 3)), dual("a", F(2, 3))],
        floats=[FloatingCircle("O", 4, F(1, 2), 0)],
    )
    assert not giroux_criterion(with_float)

    torus = standard_torus()
    bubble = ClosedComponent((Crossing("a", F(1, 4)), Crossing("-a", F(3, 4))))
    assert not giroux_criterion(CurveSystem(torus, closed=[bubble]))


def test_non_isolating_families():
    surface, gamma = genus_two_pair()
    empty = CurveSystem(surface)
    assert is_non_isolating(gamma, empty)

    one_c = CurveSystem(surface, closed=[dual("c", F(1, 2))])
    assert is_non_isolating(gamma, one_c)

    two_c = CurveSystem(surface, closed=[dual("c", F(1, 3)), dual("c", F(2, 3))])
    assert not is_non_isolating(gamma, two_c)

    between = CurveSystem(surface, closed=[dual("a", F(1, 2))])
    assert is_non_isolating(gamma, between)


def test_non_isolating_rejects_shared_points_and_arcs():
    surface, gamma = genus_two_pair()
    colliding = CurveSystem(surface, closed=[dual("a", F(1, 3))])
    with pytest.raises(NotTransverse):
        is_non_isolating(gamma, colliding)
    arc = ArcComponent(BoundaryPoint("r1", F(1, 3)), (), BoundaryPoint("r1", F(2, 3)))
    disk = standard_disk(("r1", "r2"))
    arc_system = CurveSystem(disk, arcs=[arc])
    with pytest.raises(ValueError):
        is_non_isolating(arc_system, arc_system)


def test_trivial_transverse_circle_isolates_its_disk():
    surface, gamma = genus_two_pair()
    c_float = CurveSystem(surface, floats=[FloatingCircle("O", 4, F(1, 2), 0)])
    assert not is_non_isolating(gamma, c_float)


def test_anchor_must_avoid_curve_points():
    _, system = genus_two_pair()
    with pytest.raises(ValueError):
        analyze_dividing_set(system, anchor=(("O", 0, F(1, 3)), 1))
    with pytest.raises(ValueError):
        analyze_dividing_set(system, anchor=(("O", 1, F(1, 2)), 0))


def test_empty_system_is_rejected():
    with pytest.raises(EmptyOnComponent):
        analyze_dividing_set(CurveSystem(standard_torus()))


def test_region_euler_sum_invariant():
    fixtures = []
    surface, pair = genus_two_pair()
    fixtures.append(pair)
    torus = standard_torus()
    fixtures.append(
        CurveSystem(
            torus,
            closed=[ClosedComponent((Crossing("a", F(1, 4)), Crossing("-a", F(3, 4))))],
            floats=[FloatingCircle("T", 1, F(1, 2), 0)],
        )
    )
    rect = standard_disk(("r1", "r2", "r3", "r4"))
    fixtures.append(
        CurveSystem(
            rect,
            arcs=[
                ArcComponent(BoundaryPoint("r1", F(1, 4)), (), BoundaryPoint("r3", F(1, 4))),
                ArcComponent(BoundaryPoint("r1", F(3, 4)), (), BoundaryPoint("r2", F(1, 2))),
            ],
        )
    )
    for system in fixtures:
        dec = RegionDecomposition(system)
        expected = system.surface.euler_characteristic + len(system.arcs)
        assert sum(r.euler for r in dec.regions) == expected
        for (key, r), (left, right) in dec.piece_regions.items():
            assert left is not None and right is not None


def test_probe_region_lookup():
    surface, system = genus_two_pair()
    dec = RegionDecomposition(system)
    big = dec.region_at("O", 1, F(1, 2))
    middle = dec.region_at("O", 0, F(1, 2))
    assert big != middle
    assert dec.regions[middle].euler == 0
    assert dec.regions[big].euler == -2
