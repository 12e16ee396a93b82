"""Slab stacking, relabeling, torus layers, and bundle gluing."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from convexcut.errors import (
    BadK,
    GenusTooSmall,
    InterfaceMismatch,
    NotNonSeparatingPair,
)
from convexcut.slabs import (
    INFINITE_SLOPE,
    OVERTWISTED,
    TIGHT,
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
    straddle_positions,
    torsion_insert,
    vertical_annulus_count,
)


# -- slab construction ------------------------------------------------------------


def test_four_slabs_per_genus():
    for genus in range(2, 6):
        slabs = nonproduct_slabs(genus)
        assert len(slabs) == 4
        assert [(s.straddled_bottom, s.straddled_top) for s in slabs] == [
            ("a", "a"),
            ("a", "b"),
            ("b", "a"),
            ("b", "b"),
        ]
        assert all(s.genus == genus and not s.product for s in slabs)


def test_genus_guard():
    with pytest.raises(GenusTooSmall):
        nonproduct_slabs(1)
    with pytest.raises(GenusTooSmall):
        SigmaISlab(1, ("a", "b"), ("a", "b"), True, None, None)


def test_slab_validation():
    with pytest.raises(ValueError):
        SigmaISlab(2, ("a", "b"), ("a", "b"), True, "a", None)
    with pytest.raises(ValueError):
        SigmaISlab(2, ("a", "b"), ("a", "b"), False, "c", "a")
    with pytest.raises(ValueError):
        SigmaISlab(2, ("a", "b"), ("a", "b"), False, "a", "c")
    with pytest.raises(ValueError):
        SigmaISlab(2, ("a", "a"), ("a", "b"), True, None, None)


def test_vertical_flip():
    s = SigmaISlab(2, ("a", "b"), ("a", "b"), False, "a", "b")
    f = s.vertical_flip()
    assert (f.straddled_bottom, f.straddled_top) == ("b", "a")
    assert f.vertical_flip() == s


# -- addition ---------------------------------------------------------------------


def test_addition_table_genus2():
    slabs = nonproduct_slabs(2)
    table = {
        (i, j): addition_check(slabs[i], slabs[j])
        for i in range(4)
        for j in range(4)
    }
    overtwisted = {key for key, verdict in table.items() if verdict == OVERTWISTED}
    # (a,a) on itself, (b,b) on itself, and the two mixed slabs on each other
    assert overtwisted == {(0, 0), (1, 2), (2, 1), (3, 3)}
    assert len(table) == 16


def test_addition_examples():
    slabs = nonproduct_slabs(2)
    by_straddle = {(s.straddled_bottom, s.straddled_top): s for s in slabs}
    # straddle-matched in both directions: overtwisted
    assert addition_check(by_straddle["a", "a"], by_straddle["a", "a"]) == OVERTWISTED
    assert addition_check(by_straddle["a", "b"], by_straddle["b", "a"]) == OVERTWISTED
    # interface match only on one side: tight
    assert addition_check(by_straddle["a", "a"], by_straddle["a", "b"]) == TIGHT
    assert addition_check(by_straddle["b", "a"], by_straddle["a", "a"]) == TIGHT
    # no interface match at all: tight
    assert addition_check(by_straddle["a", "a"], by_straddle["b", "a"]) == TIGHT


def test_product_slabs_are_identities():
    p = product_slab(2)
    for s in nonproduct_slabs(2) + [p]:
        assert addition_check(p, s) == TIGHT
        assert addition_check(s, p) == TIGHT


def test_addition_interface_guards():
    low = nonproduct_slabs(2)[0]
    high = nonproduct_slabs(3)[0]
    with pytest.raises(InterfaceMismatch):
        addition_check(low, high)
    other = nonproduct_slabs(2, pair=("c", "d"))[0]
    with pytest.raises(InterfaceMismatch):
        addition_check(low, other)


def test_addition_symmetry():
    # stacking order reverses under turning the whole stack upside down
    slabs = nonproduct_slabs(2) + [product_slab(2)]
    for low in slabs:
        for high in slabs:
            assert addition_check(low, high) == addition_check(
                high.vertical_flip(), low.vertical_flip()
            )


def test_unique_overtwisting_counterpart():
    # each slab is overtwisted against exactly one slab in the stack above,
    # namely its own vertical flip
    slabs = nonproduct_slabs(2)
    for low in slabs:
        partners = [
            high for high in slabs if addition_check(low, high) == OVERTWISTED
        ]
        assert partners == [low.vertical_flip()]


# -- relabeling -------------------------------------------------------------------


def test_relabel_identity():
    for s in nonproduct_slabs(2):
        assert relabel_boundary(s, ("a", "b")) == s


def test_relabel_transport():
    s = SigmaISlab(2, ("a", "b"), ("a", "b"), False, "a", "b")
    r = relabel_boundary(s, ("c", "d"))
    assert r.bottom_pair == r.top_pair == ("c", "d")
    assert (r.straddled_bottom, r.straddled_top) == ("c", "d")
    swapped = relabel_boundary(s, ("b", "a"))
    assert (swapped.straddled_bottom, swapped.straddled_top) == ("b", "a")


def test_relabel_product_slab():
    r = relabel_boundary(product_slab(2), ("x", "y"))
    assert r.product and r.straddled_bottom is None and r.straddled_top is None
    assert r.bottom_pair == ("x", "y")


def test_relabel_group_action():
    for s in nonproduct_slabs(2):
        once = relabel_boundary(relabel_boundary(s, ("c", "d")), ("e", "f"))
        assert once == relabel_boundary(s, ("e", "f"))


def test_relabel_rejects_separating_curves():
    s = nonproduct_slabs(2)[0]
    with pytest.raises(NotNonSeparatingPair):
        relabel_boundary(s, ("c", "d"), curve_metadata={"d": False})
    with pytest.raises(ValueError):
        relabel_boundary(s, ("c", "c"))


@given(
    st.permutations(["a", "b"]),
    st.permutations(["c", "d"]),
    st.integers(min_value=0, max_value=3),
)
def test_relabel_group_action_random(p, q, which):
    s = nonproduct_slabs(2)[which]
    assert relabel_boundary(relabel_boundary(s, tuple(p)), tuple(q)) == relabel_boundary(
        s, tuple(q)
    )


# -- torus layers -----------------------------------------------------------------


def test_torus_model_validation():
    with pytest.raises(ValueError):
        TorusModel(3, Fraction(1, 2))
    with pytest.raises(ValueError):
        TorusModel(0, Fraction(1, 2))
    with pytest.raises(ValueError):
        TorusModel(2, Fraction(1, 2), torsion=-1)
    assert TorusModel(2, Fraction(2, 4)).slope == Fraction(1, 2)
    assert TorusModel(4, INFINITE_SLOPE).slope == INFINITE_SLOPE


def test_torsion_counts():
    m = TorusModel(2, Fraction(0))
    assert vertical_annulus_count(m) == 0
    assert vertical_annulus_count(torsion_insert(m, 2)) == 4
    assert torsion_insert(m, 0) == m
    m1 = TorusModel(2, Fraction(0), torsion=1)
    assert vertical_annulus_count(torsion_insert(m1, 1)) == 4


def test_torsion_additivity():
    m = TorusModel(2, Fraction(-3, 7))
    for k1 in range(4):
        for k2 in range(4):
            assert torsion_insert(torsion_insert(m, k1), k2) == torsion_insert(
                m, k1 + k2
            )
            assert vertical_annulus_count(
                torsion_insert(m, k1 + k2)
            ) == vertical_annulus_count(m) + 2 * (k1 + k2)


def test_torsion_insert_rejects_negative():
    with pytest.raises(BadK):
        torsion_insert(TorusModel(2, Fraction(0)), -1)


def test_legendrian_neighborhood():
    for k in range(1, 6):
        m = legendrian_neighborhood(k)
        assert m.curve_count == 2
        assert m.slope == Fraction(-1, k)
        assert m.unique
    with pytest.raises(BadK):
        legendrian_neighborhood(0)
    with pytest.raises(BadK):
        legendrian_neighborhood(-3)


# -- bundle gluing ----------------------------------------------------------------


def test_bundle_verdicts_straight():
    slabs = nonproduct_slabs(2)
    ident = pair_identifications(("a", "b"))["straight"]
    verdicts = [bundle_glue_check(s, ident) for s in slabs]
    # straight gluing kills the slabs straddling the same curve twice
    assert verdicts == [OVERTWISTED, TIGHT, TIGHT, OVERTWISTED]


def test_bundle_verdicts_crossed():
    slabs = nonproduct_slabs(2)
    ident = pair_identifications(("a", "b"))["crossed"]
    verdicts = [bundle_glue_check(s, ident) for s in slabs]
    assert verdicts == [TIGHT, OVERTWISTED, OVERTWISTED, TIGHT]


def test_bundle_product_and_guards():
    ident = pair_identifications(("a", "b"))["straight"]
    assert bundle_glue_check(product_slab(2), ident) == TIGHT
    s = nonproduct_slabs(2)[0]
    with pytest.raises(InterfaceMismatch):
        bundle_glue_check(s, {"a": "a"})
    with pytest.raises(InterfaceMismatch):
        bundle_glue_check(s, {"a": "a", "b": "a"})
    with pytest.raises(InterfaceMismatch):
        bundle_glue_check(s, {"a": "c", "b": "d"})


def test_bundle_survivor_is_unique():
    # two tight slabs per identification, but they differ by the pair swap,
    # so each identification leaves a single class
    for genus in range(2, 6):
        survey = bundle_survey(genus)
        assert set(survey) == {"straight", "crossed"}
        for name, row in survey.items():
            assert len(row["tight"]) == 2
            assert row["class_count"] == 1
        straight = {straddle_positions(s) for s in survey["straight"]["tight"]}
        crossed = {straddle_positions(s) for s in survey["crossed"]["tight"]}
        assert straight == {(0, 1), (1, 0)}
        assert crossed == {(0, 0), (1, 1)}


def test_pair_swap_is_a_relabel():
    # the two straight-gluing survivors really are the same slab relabeled
    s_ab, s_ba = (
        SigmaISlab(2, ("a", "b"), ("a", "b"), False, "a", "b"),
        SigmaISlab(2, ("a", "b"), ("a", "b"), False, "b", "a"),
    )
    swapped = relabel_boundary(s_ab, ("b", "a"))
    assert (swapped.straddled_bottom, swapped.straddled_top) == (
        s_ba.straddled_bottom,
        s_ba.straddled_top,
    )
