"""Exact planar geometry over the rationals.

Everything downstream (crossing detection, cell extraction, point
location) reduces to a handful of predicates on points with Fraction
coordinates.  No floats appear anywhere in this module, so all answers
are exact and deterministic.

Points are plain ``(Fraction, Fraction)`` tuples.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Point = tuple[Fraction, Fraction]


def cross(o: Point, a: Point, b: Point) -> Fraction:
    """Signed area of the parallelogram spanned by ``a - o`` and ``b - o``.

    Positive when the turn o -> a -> b is counterclockwise.
    """
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def orient(o: Point, a: Point, b: Point) -> int:
    """Sign of :func:`cross`: 1 for a left turn, -1 right, 0 collinear.

    Works on raw numerators and denominators so no gcd reduction
    happens; this predicate sits under every crossing test and the
    Fraction normalization cost dominates otherwise.
    """
    oxn, oxd = o[0].numerator, o[0].denominator
    oyn, oyd = o[1].numerator, o[1].denominator
    # a - o and b - o as unreduced pairs; denominators stay positive
    p = (a[0].numerator * oxd - oxn * a[0].denominator, a[0].denominator * oxd)
    q = (a[1].numerator * oyd - oyn * a[1].denominator, a[1].denominator * oyd)
    r = (b[0].numerator * oxd - oxn * b[0].denominator, b[0].denominator * oxd)
    s = (b[1].numerator * oyd - oyn * b[1].denominator, b[1].denominator * oyd)
    lhs = p[0] * s[0] * (q[1] * r[1])
    rhs = q[0] * r[0] * (p[1] * s[1])
    if lhs > rhs:
        return 1
    if lhs < rhs:
        return -1
    return 0


def on_segment(p: Point, a: Point, b: Point) -> bool:
    """True when p lies on the closed segment ab (collinearity assumed checked)."""
    return (
        min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool:
    """True when the open segments ab and cd meet in a single interior point.

    Shared endpoints and collinear overlaps do not count; callers that
    need those cases handle them before calling this.
    """
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    return o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4)


def segment_intersection(a: Point, b: Point, c: Point, d: Point) -> Point | None:
    """Intersection point of properly crossing segments ab and cd, else None."""
    if not segments_cross(a, b, c, d):
        return None
    # Solve a + s*(b-a) = c + u*(d-c) for s.
    denom = (b[0] - a[0]) * (d[1] - c[1]) - (b[1] - a[1]) * (d[0] - c[0])
    s = ((c[0] - a[0]) * (d[1] - c[1]) - (c[1] - a[1]) * (d[0] - c[0])) / denom
    return (a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1]))


def point_on_chord(a: Point, b: Point, t: Fraction) -> Point:
    """Affine point a + t*(b-a)."""
    return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))


def shoelace(points: Sequence[Point]) -> Fraction:
    """Twice the signed area of the polygon; positive when counterclockwise."""
    total = Fraction(0)
    n = len(points)
    for i in range(n):
        x1, y1 = points[i]
        x2, y2 = points[(i + 1) % n]
        total += x1 * y2 - x2 * y1
    return total


def point_in_polygon(p: Point, polygon: Sequence[Point]) -> bool:
    """Strict interior test by exact ray crossing parity.

    The polygon need not be convex.  Points on the boundary return False.
    """
    n = len(polygon)
    for i in range(n):
        a, b = polygon[i], polygon[(i + 1) % n]
        if orient(a, b, p) == 0 and on_segment(p, a, b):
            return False
    # Cast a ray to the right; count proper edge crossings with the usual
    # half-open rule on the y span so vertices are not double counted.
    inside = False
    for i in range(n):
        a, b = polygon[i], polygon[(i + 1) % n]
        if (a[1] > p[1]) != (b[1] > p[1]):
            # x coordinate of the edge at height p[1]
            x_at = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
            if x_at > p[0]:
                inside = not inside
    return inside


def angle_key(origin: Point, target: Point) -> tuple[int, Fraction]:
    """Sort key ordering directions around ``origin`` counterclockwise from east.

    Uses quadrant index plus an exact tangent comparator, so equal keys
    mean equal directions.  Within one quadrant the slope dy/dx increases
    monotonically with angle, and rotating a direction back into the
    first quadrant preserves relative order.
    """
    dx = target[0] - origin[0]
    dy = target[1] - origin[1]
    if dx == 0 and dy == 0:
        raise ValueError("coincident points have no direction")
    if dx > 0 and dy >= 0:
        quad = 0
    elif dx <= 0 and dy > 0:
        quad = 1
    elif dx < 0 and dy <= 0:
        quad = 2
    else:
        quad = 3
    for _ in range(quad):
        dx, dy = dy, -dx
    # After rotation dx > 0 always holds.
    return (quad, dy / dx)
