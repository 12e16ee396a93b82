"""Straddle bookkeeping for slab pieces, torus layers, and bundle gluing.

A slab is a thickened surface whose two boundary copies each carry a
pair of parallel non-separating dividing curves.  The combinatorial
datum that classifies the non-product structures on it is which curve
of each pair is straddled (has a dual annulus with a boundary-parallel
dividing arc centered on it).  Everything in this module is symbolic:
curves are identifiers, not embedded multicurves.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Mapping

from .errors import (
    BadK,
    GenusTooSmall,
    InterfaceMismatch,
    NotNonSeparatingPair,
)

TIGHT = "tight"
OVERTWISTED = "overtwisted"


@dataclass(frozen=True)
class SigmaISlab:
    """Thickened genus >= 2 surface with straddle data on both sides.

    ``product`` slabs straddle nothing; non-product slabs straddle
    exactly one curve of each boundary pair.
    """

    genus: int
    bottom_pair: tuple[str, str]
    top_pair: tuple[str, str]
    product: bool
    straddled_bottom: str | None
    straddled_top: str | None

    def __post_init__(self):
        if self.genus < 2:
            raise GenusTooSmall(
                f"slab surfaces need genus at least 2, got {self.genus}"
            )
        object.__setattr__(self, "bottom_pair", tuple(self.bottom_pair))
        object.__setattr__(self, "top_pair", tuple(self.top_pair))
        for pair in (self.bottom_pair, self.top_pair):
            if len(pair) != 2 or pair[0] == pair[1]:
                raise ValueError(f"boundary pair must be two distinct curves: {pair}")
        if self.product:
            if self.straddled_bottom is not None or self.straddled_top is not None:
                raise ValueError("product slabs straddle nothing")
        else:
            if self.straddled_bottom not in self.bottom_pair:
                raise ValueError(
                    f"straddled bottom curve {self.straddled_bottom!r} "
                    f"is not in the pair {self.bottom_pair}"
                )
            if self.straddled_top not in self.top_pair:
                raise ValueError(
                    f"straddled top curve {self.straddled_top!r} "
                    f"is not in the pair {self.top_pair}"
                )

    def vertical_flip(self) -> "SigmaISlab":
        """The same slab upside down."""
        return replace(
            self,
            bottom_pair=self.top_pair,
            top_pair=self.bottom_pair,
            straddled_bottom=self.straddled_top,
            straddled_top=self.straddled_bottom,
        )


def product_slab(genus: int, pair: tuple[str, str] = ("a", "b")) -> SigmaISlab:
    return SigmaISlab(genus, pair, pair, True, None, None)


def nonproduct_slabs(
    genus: int, pair: tuple[str, str] = ("a", "b")
) -> list[SigmaISlab]:
    """The four non-product slabs over a fixed boundary pair.

    Listed by (straddled bottom, straddled top) in pair order:
    (a, a), (a, b), (b, a), (b, b).
    """
    if genus < 2:
        raise GenusTooSmall(f"need genus at least 2, got {genus}")
    a, b = pair
    return [
        SigmaISlab(genus, pair, pair, False, sb, st)
        for sb in (a, b)
        for st in (a, b)
    ]


def addition_check(lower: SigmaISlab, upper: SigmaISlab) -> str:
    """Verdict for stacking two slabs along the lower top boundary.

    Overtwisted exactly when the slabs straddle-match doubly: the curve
    the lower slab straddles at the interface is the one the upper slab
    straddles there, and the same agreement holds between the two outer
    straddles.  A single interface agreement alone is not penalized,
    and product slabs act as identities.
    """
    if lower.genus != upper.genus:
        raise InterfaceMismatch(
            f"genus {lower.genus} cannot stack on genus {upper.genus}"
        )
    if lower.top_pair != upper.bottom_pair:
        raise InterfaceMismatch(
            f"interface pairs differ: {lower.top_pair} vs {upper.bottom_pair}"
        )
    if lower.product or upper.product:
        return TIGHT
    doubly = (
        lower.straddled_top == upper.straddled_bottom
        and lower.straddled_bottom == upper.straddled_top
    )
    return OVERTWISTED if doubly else TIGHT


def relabel_boundary(
    slab: SigmaISlab,
    new_pair: tuple[str, str],
    curve_metadata: Mapping[str, bool] | None = None,
) -> SigmaISlab:
    """Replace the boundary pair, carrying straddles positionally.

    ``curve_metadata`` maps curve identifiers to a non-separating flag;
    curves without metadata are taken to be non-separating.
    """
    new_pair = tuple(new_pair)
    if len(new_pair) != 2 or new_pair[0] == new_pair[1]:
        raise ValueError(f"need two distinct curves, got {new_pair}")
    meta = dict(curve_metadata or {})
    for curve in new_pair:
        if not meta.get(curve, True):
            raise NotNonSeparatingPair(
                f"curve {curve!r} is declared separating; "
                "boundary pairs must be non-separating"
            )

    def carry(straddled, old_pair):
        if straddled is None:
            return None
        return new_pair[old_pair.index(straddled)]

    return replace(
        slab,
        bottom_pair=new_pair,
        top_pair=new_pair,
        straddled_bottom=carry(slab.straddled_bottom, slab.bottom_pair),
        straddled_top=carry(slab.straddled_top, slab.top_pair),
    )


# -- bundle gluing ---------------------------------------------------------------


def pair_identifications(pair: tuple[str, str]) -> dict[str, dict[str, str]]:
    """Both bijections of a boundary pair onto itself, top to bottom."""
    a, b = pair
    return {"straight": {a: a, b: b}, "crossed": {a: b, b: a}}


def bundle_glue_check(slab: SigmaISlab, identification: Mapping[str, str]) -> str:
    """Verdict for closing a slab up into a bundle.

    ``identification`` maps each top curve to the bottom curve it is
    glued to.  Overtwisted exactly when it sends the straddled top
    curve to the straddled bottom curve.
    """
    ident = dict(identification)
    if set(ident) != set(slab.top_pair) or sorted(ident.values()) != sorted(
        slab.bottom_pair
    ):
        raise InterfaceMismatch(
            "identification must match the top pair onto the bottom pair"
        )
    if slab.product:
        return TIGHT
    if ident[slab.straddled_top] == slab.straddled_bottom:
        return OVERTWISTED
    return TIGHT


def straddle_positions(slab: SigmaISlab) -> tuple[int, int]:
    """Straddle data as positions in the boundary pairs, relabel-invariant
    up to the pair swap."""
    return (
        slab.bottom_pair.index(slab.straddled_bottom),
        slab.top_pair.index(slab.straddled_top),
    )


def bundle_survey(genus: int, pair: tuple[str, str] = ("a", "b")) -> dict:
    """Tight slabs per identification, grouped modulo the pair-swap relabel.

    Swapping the two curves of the pair is itself a relabeling, so slabs
    whose straddle positions are simultaneous complements describe the
    same structure.  For each identification the tight slabs form
    exactly one such class.
    """
    slabs = nonproduct_slabs(genus, pair)
    out = {}
    for name, ident in pair_identifications(pair).items():
        tight = [s for s in slabs if bundle_glue_check(s, ident) == TIGHT]
        classes = set()
        for s in tight:
            i, j = straddle_positions(s)
            classes.add(frozenset({(i, j), (1 - i, 1 - j)}))
        out[name] = {"tight": tight, "class_count": len(classes)}
    return out


# -- torus layers -----------------------------------------------------------------

INFINITE_SLOPE = "inf"


@dataclass(frozen=True)
class TorusModel:
    """Torus boundary bookkeeping: curve count, slope, stacked torsion."""

    curve_count: int
    slope: object
    torsion: int = 0
    unique: bool = False

    def __post_init__(self):
        if self.curve_count <= 0 or self.curve_count % 2 != 0:
            raise ValueError(
                f"dividing curves on a torus come in parallel pairs; "
                f"got count {self.curve_count}"
            )
        if self.slope != INFINITE_SLOPE:
            object.__setattr__(self, "slope", Fraction(self.slope))
        if self.torsion < 0:
            raise ValueError(f"torsion is a non-negative count, got {self.torsion}")


def torsion_insert(model: TorusModel, k: int) -> TorusModel:
    """Stack k twisted layers onto the model; torsion adds up."""
    if k < 0:
        raise BadK(f"cannot remove torsion (k = {k})")
    return replace(model, torsion=model.torsion + k)


def vertical_annulus_count(model: TorusModel) -> int:
    """Closed dividing curves on a vertical annulus through the layers."""
    return 2 * model.torsion


def legendrian_neighborhood(k: int) -> TorusModel:
    """Boundary model of the standard neighborhood of a closed curve.

    Two dividing curves of slope -1/k; the structure inside is the
    unique tight one, so the model carries the uniqueness marker.
    """
    if k <= 0:
        raise BadK(f"the neighborhood model needs k >= 1, got {k}")
    return TorusModel(curve_count=2, slope=Fraction(-1, k), unique=True)
