"""Surface presentation invariants: counts, boundary walks, error cases."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convexcut.errors import Disconnected, NonInvolutiveGluing, NonOrientable
from convexcut.surfaces import (
    PolygonalSurface,
    label_of,
    mirror_surface,
    sign_of,
    standard_annulus,
    standard_disk,
    standard_rectangle,
    standard_sphere,
    standard_torus,
)


def test_torus_square():
    t = standard_torus()
    assert t.num_vertices == 1
    assert t.num_edges == 2
    assert t.num_faces == 1
    assert t.euler_characteristic == 0
    assert t.num_boundary_components == 0
    assert t.genus == 1
    assert t.is_closed


def test_genus_two_octagon():
    s = PolygonalSurface({"F": ("a", "b", "-a", "-b", "c", "d", "-c", "-d")})
    assert s.num_vertices == 1
    assert s.euler_characteristic == -2
    assert s.genus == 2
    assert s.is_closed


def test_torus_with_split_side():
    # Same torus, but one basis edge presented in two segments.
    s = PolygonalSurface({"T": ("a", "b1", "b2", "-a", "-b2", "-b1")})
    assert s.num_vertices == 2
    assert s.num_edges == 3
    assert s.euler_characteristic == 0
    assert s.genus == 1


def test_disk_and_rectangle():
    d = standard_disk(("e0", "e1", "e2"))
    assert d.euler_characteristic == 1
    assert d.num_boundary_components == 1
    assert d.genus == 0
    assert [s.index for s in d.boundary_cycles()[0]] == [0, 1, 2]

    r = standard_rectangle()
    assert r.euler_characteristic == 1
    assert r.kind == "rectangle"
    assert r.kind_meta["sides"]["top"] == "top"


def test_annulus_model():
    a = standard_annulus()
    assert a.euler_characteristic == 0
    assert a.num_boundary_components == 2
    assert a.genus == 0
    assert a.boundary_cycle_of_edge("bot") != a.boundary_cycle_of_edge("top")
    # Each boundary circle is a single edge in this model.
    assert all(len(c) == 1 for c in a.boundary_cycles())


def test_sphere_models():
    s = standard_sphere()
    assert s.euler_characteristic == 2
    assert s.num_vertices == 2
    assert s.genus == 0
    one_gon = PolygonalSurface({"F": ("a", "-a")})
    assert one_gon.euler_characteristic == 2
    two_disks = PolygonalSurface({"F0": ("a",), "F1": ("-a",)})
    assert two_disks.euler_characteristic == 2


def test_pair_of_pants():
    p = PolygonalSurface({"P": ("b1", "s1", "b2", "-s1", "s2", "b3", "-s2")})
    assert p.euler_characteristic == -1
    assert p.num_boundary_components == 3
    assert p.genus == 0


def test_disk_with_folded_flap():
    s = PolygonalSurface({"F": ("a", "-a", "b")})
    assert s.euler_characteristic == 1
    assert s.num_boundary_components == 1
    assert s.genus == 0


def test_gluing_errors():
    with pytest.raises(NonOrientable):
        PolygonalSurface({"F": ("a", "a")})
    with pytest.raises(NonInvolutiveGluing):
        PolygonalSurface({"F": ("a", "-a", "a", "b")})
    with pytest.raises(Disconnected):
        PolygonalSurface({"F0": ("a", "-a"), "F1": ("b", "-b")})
    with pytest.raises(ValueError):
        PolygonalSurface({})
    with pytest.raises(ValueError):
        PolygonalSurface({"F": ()})


def test_boundary_walk_pants_cycles():
    p = PolygonalSurface({"P": ("b1", "s1", "b2", "-s1", "s2", "b3", "-s2")})
    cycles = p.boundary_cycles()
    edge_sets = sorted(tuple(sorted(p.slot_edge(s) for s in c)) for c in cycles)
    assert edge_sets == [("b1",), ("b2",), ("b3",)]


def test_mirror_surface():
    t = standard_torus()
    m = mirror_surface(t)
    assert m.euler_characteristic == 0 and m.genus == 1
    d = standard_disk(("x", "y"))
    md = mirror_surface(d)
    assert md.kind == "disk"
    assert mirror_surface(mirror_surface(d)).faces == d.faces
    a = standard_annulus()
    ma = mirror_surface(a)
    assert ma.euler_characteristic == 0 and ma.num_boundary_components == 2
    assert ma.kind is None


def _subdivide(faces):
    # Splitting every edge in half must not change chi, boundary count,
    # or genus, and adds exactly one vertex per edge.
    new = {}
    for face_id, word in faces.items():
        out = []
        for letter in word:
            lab, sgn = label_of(letter), sign_of(letter)
            if sgn > 0:
                out += [f"{lab}__1", f"{lab}__2"]
            else:
                out += [f"-{lab}__2", f"-{lab}__1"]
        new[face_id] = tuple(out)
    return new


@st.composite
def _one_face_surfaces(draw):
    n_pairs = draw(st.integers(min_value=1, max_value=6))
    n_free = draw(st.integers(min_value=0, max_value=4))
    length = 2 * n_pairs + n_free
    positions = draw(st.permutations(range(length)))
    word = [None] * length
    for k in range(n_pairs):
        i, j = positions[2 * k], positions[2 * k + 1]
        word[i] = f"g{k}"
        word[j] = f"-g{k}"
    free = [p for p in positions[2 * n_pairs :]]
    for k, i in enumerate(free):
        word[i] = f"f{k}"
    return {"F": tuple(word)}


@settings(max_examples=150, deadline=None)
@given(_one_face_surfaces())
def test_subdivision_preserves_invariants(faces):
    s = PolygonalSurface(faces)
    s2 = PolygonalSurface(_subdivide(faces))
    assert s2.euler_characteristic == s.euler_characteristic
    assert s2.num_boundary_components == s.num_boundary_components
    assert s2.genus == s.genus
    assert s2.num_vertices == s.num_vertices + s.num_edges
    assert s2.num_edges == 2 * s.num_edges
