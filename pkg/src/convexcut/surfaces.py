"""Polygonal surfaces presented as faces glued along signed edge words.

A surface is a collection of polygonal faces.  Each face is a cyclic
word of signed edge labels read counterclockwise around the face.  A
label appearing twice with opposite signs names an interior edge whose
two sides are glued (the sign flip makes the identification reverse
orientation across the edge, which keeps the surface oriented).  A
label appearing exactly once is a boundary edge.

Points on an edge are addressed as ``(label, t)`` with ``t`` a Fraction
in (0, 1) measured along the edge's own direction, which is the
direction of its positively signed traversal.  The same point seen from
a face that traverses the edge negatively sits at local parameter
``1 - t`` in that face's walk order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import Disconnected, NonInvolutiveGluing, NonOrientable


def label_of(signed: str) -> str:
    """Unsigned edge label of a signed word letter."""
    return signed[1:] if signed.startswith("-") else signed


def sign_of(signed: str) -> int:
    return -1 if signed.startswith("-") else 1


def flip(signed: str) -> str:
    return signed[1:] if signed.startswith("-") else "-" + signed


def signed_label(label: str, sign: int) -> str:
    return label if sign > 0 else "-" + label


@dataclass(frozen=True, order=True)
class Slot:
    """One side of one edge: position ``index`` in the word of ``face``."""

    face: str
    index: int


class UnionFind:
    """Union-find over arbitrary hashable keys, with deterministic roots."""

    def __init__(self) -> None:
        self._parent: dict = {}

    def find(self, x):
        parent = self._parent
        if x not in parent:
            parent[x] = x
            return x
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self._parent[rb] = ra

    def classes(self, keys: Iterable) -> list[list]:
        """Partition ``keys`` into classes, preserving first-seen order."""
        groups: dict = {}
        for k in keys:
            groups.setdefault(self.find(k), []).append(k)
        return list(groups.values())


class PolygonalSurface:
    """Oriented connected surface built from signed face words.

    Raises :class:`NonInvolutiveGluing` when a label is used more than
    twice, :class:`NonOrientable` when a label repeats with equal signs,
    and :class:`Disconnected` when the glued faces fall apart.
    """

    def __init__(
        self,
        faces: Mapping[str, Sequence[str]],
        kind: str | None = None,
        kind_meta: dict | None = None,
    ):
        if not faces:
            raise ValueError("a surface needs at least one face")
        self.faces: dict[str, tuple[str, ...]] = {}
        for face_id, word in faces.items():
            if not isinstance(face_id, str) or not face_id:
                raise ValueError(f"bad face id {face_id!r}")
            word = tuple(word)
            if not word:
                raise ValueError(f"face {face_id!r} has an empty word")
            for letter in word:
                if not isinstance(letter, str) or not label_of(letter):
                    raise ValueError(f"bad edge letter {letter!r} in face {face_id!r}")
            self.faces[face_id] = word

        self.kind = kind
        self.kind_meta = dict(kind_meta or {})

        slots_by_label: dict[str, list[Slot]] = {}
        for face_id, word in self.faces.items():
            for i, letter in enumerate(word):
                slots_by_label.setdefault(label_of(letter), []).append(Slot(face_id, i))

        self.glued: dict[str, tuple[Slot, Slot]] = {}
        self.boundary_edges: dict[str, Slot] = {}
        for label, slots in slots_by_label.items():
            if len(slots) > 2:
                raise NonInvolutiveGluing(
                    f"edge {label!r} appears {len(slots)} times; at most two sides allowed"
                )
            if len(slots) == 1:
                self.boundary_edges[label] = slots[0]
                continue
            a, b = slots
            if self._slot_sign(a) == self._slot_sign(b):
                raise NonOrientable(
                    f"edge {label!r} is glued with matching signs; "
                    "orientations of the two faces disagree across it"
                )
            if self._slot_sign(a) < 0:
                a, b = b, a
            self.glued[label] = (a, b)

        components = UnionFind()
        for face_id in self.faces:
            components.find(face_id)
        for pos, neg in self.glued.values():
            components.union(pos.face, neg.face)
        roots = {components.find(f) for f in self.faces}
        if len(roots) > 1:
            raise Disconnected(f"surface splits into {len(roots)} pieces")

        self._corners = UnionFind()
        for face_id, word in self.faces.items():
            for i in range(len(word)):
                self._corners.find((face_id, i))
        for pos, neg in self.glued.values():
            n_pos = len(self.faces[pos.face])
            n_neg = len(self.faces[neg.face])
            # Gluing reverses direction: start of the positive side meets
            # the end of the negative side, and vice versa.
            self._corners.union(
                (pos.face, pos.index), (neg.face, (neg.index + 1) % n_neg)
            )
            self._corners.union(
                (pos.face, (pos.index + 1) % n_pos), (neg.face, neg.index)
            )
        all_corners = [
            (face_id, i)
            for face_id, word in self.faces.items()
            for i in range(len(word))
        ]
        self.num_vertices = len(self._corners.classes(all_corners))
        self.num_edges = len(slots_by_label)
        self.num_faces = len(self.faces)

        self._boundary_cycles = self._walk_boundary()

    # -- slot accessors ----------------------------------------------------

    def _slot_sign(self, slot: Slot) -> int:
        return sign_of(self.faces[slot.face][slot.index])

    def slot_sign(self, slot: Slot) -> int:
        return self._slot_sign(slot)

    def slot_edge(self, slot: Slot) -> str:
        return label_of(self.faces[slot.face][slot.index])

    def next_in_face(self, slot: Slot) -> Slot:
        n = len(self.faces[slot.face])
        return Slot(slot.face, (slot.index + 1) % n)

    def prev_in_face(self, slot: Slot) -> Slot:
        n = len(self.faces[slot.face])
        return Slot(slot.face, (slot.index - 1) % n)

    def is_glued(self, slot: Slot) -> bool:
        return self.slot_edge(slot) in self.glued

    def partner(self, slot: Slot) -> Slot:
        pos, neg = self.glued[self.slot_edge(slot)]
        return neg if slot == pos else pos

    def slots_of_edge(self, label: str) -> tuple[Slot, ...]:
        if label in self.glued:
            return self.glued[label]
        return (self.boundary_edges[label],)

    def slot_of_signed(self, signed: str) -> Slot:
        """The unique slot carrying this signed letter."""
        label, sign = label_of(signed), sign_of(signed)
        for slot in self.slots_of_edge(label):
            if self._slot_sign(slot) == sign:
                return slot
        raise KeyError(f"no slot carries {signed!r}")

    def local_param(self, slot: Slot, t) -> object:
        """Edge coordinate t seen in this slot's walk direction."""
        return t if self._slot_sign(slot) > 0 else 1 - t

    def vertex_of_corner(self, face: str, corner_index: int):
        """Canonical id of the vertex at the start of slot ``corner_index``."""
        return self._corners.find((face, corner_index % len(self.faces[face])))

    # -- global invariants ---------------------------------------------------

    @property
    def euler_characteristic(self) -> int:
        return self.num_vertices - self.num_edges + self.num_faces

    def boundary_cycles(self) -> list[list[Slot]]:
        """Boundary components as lists of boundary slots in walk order."""
        return [list(c) for c in self._boundary_cycles]

    @property
    def num_boundary_components(self) -> int:
        return len(self._boundary_cycles)

    @property
    def genus(self) -> int:
        gg = 2 - self.euler_characteristic - self.num_boundary_components
        assert gg % 2 == 0 and gg >= 0, "impossible invariants for an oriented surface"
        return gg // 2

    @property
    def is_closed(self) -> bool:
        return not self.boundary_edges

    def _next_boundary(self, slot: Slot) -> Slot:
        k = self.next_in_face(slot)
        for _ in range(sum(len(w) for w in self.faces.values()) + 1):
            if not self.is_glued(k):
                return k
            k = self.next_in_face(self.partner(k))
        raise AssertionError("boundary walk failed to close up")

    def _walk_boundary(self) -> list[tuple[Slot, ...]]:
        starts = sorted(self.boundary_edges.values())
        seen: set[Slot] = set()
        cycles: list[tuple[Slot, ...]] = []
        for start in starts:
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            cur = self._next_boundary(start)
            while cur != start:
                cycle.append(cur)
                seen.add(cur)
                cur = self._next_boundary(cur)
            cycles.append(tuple(cycle))
        return cycles

    def boundary_cycle_of_edge(self, label: str) -> int:
        """Index into boundary_cycles() of the cycle containing this edge."""
        slot = self.boundary_edges[label]
        for i, cycle in enumerate(self._boundary_cycles):
            if slot in cycle:
                return i
        raise KeyError(label)

    def __repr__(self) -> str:
        return (
            f"PolygonalSurface(faces={self.num_faces}, chi={self.euler_characteristic},"
            f" boundary={self.num_boundary_components}, genus={self.genus})"
        )


# ---------------------------------------------------------------------------
# standard models
#
# The classifier and several canned fixtures only work on surfaces that
# were built by these constructors, because they rely on the metadata
# recorded in kind/kind_meta (which edge is the seam, what the basis
# curves are, and so on).


def standard_disk(boundary: Sequence[str] | int = 1) -> PolygonalSurface:
    """Disk with named boundary edges listed counterclockwise."""
    if isinstance(boundary, int):
        if boundary < 1:
            raise ValueError("disk needs at least one boundary edge")
        labels = tuple(f"e{i}" for i in range(boundary))
    else:
        labels = tuple(boundary)
    return PolygonalSurface({"D": labels}, kind="disk", kind_meta={"order": labels})


def standard_rectangle(
    bottom: str = "bottom", right: str = "right", top: str = "top", left: str = "left"
) -> PolygonalSurface:
    """Disk with four named sides, counterclockwise from the bottom."""
    sides = {"bottom": bottom, "right": right, "top": top, "left": left}
    return PolygonalSurface(
        {"R": (bottom, right, top, left)}, kind="rectangle", kind_meta={"sides": sides}
    )


def standard_annulus(
    bot: str = "bot", top: str = "top", seam: str = "seam"
) -> PolygonalSurface:
    """Annulus as a rectangle with its vertical sides glued along ``seam``.

    The ``bot`` and ``top`` labels are the two boundary circles.  A
    closed curve's wrapping is visible in how often it crosses the seam.
    """
    return PolygonalSurface(
        {"A": (bot, seam, top, flip(seam))},
        kind="annulus",
        kind_meta={"bot": bot, "top": top, "seam": seam},
    )


def standard_torus(a: str = "a", b: str = "b") -> PolygonalSurface:
    """Torus as a square with opposite sides glued; (a, b) is the basis."""
    return PolygonalSurface(
        {"T": (a, b, flip(a), flip(b))}, kind="torus", kind_meta={"basis": (a, b)}
    )


def standard_sphere(a: str = "a", b: str = "b") -> PolygonalSurface:
    """Sphere as two 2-gons (hemispheres) glued along both edges."""
    return PolygonalSurface(
        {"N": (a, b), "S": (flip(b), flip(a))}, kind="sphere", kind_meta={}
    )


def mirror_surface(surface: PolygonalSurface) -> PolygonalSurface:
    """The same faces with reversed orientation.

    Face words are reversed with all signs flipped, so every edge keeps
    its label and its direction; ``(label, t)`` coordinates on edges
    mean the same points before and after mirroring.  Model metadata is
    kept only for disks, where no orientation conventions ride on it.
    """
    faces = {
        face_id: tuple(flip(letter) for letter in reversed(word))
        for face_id, word in surface.faces.items()
    }
    if surface.kind == "disk":
        return PolygonalSurface(faces, kind="disk", kind_meta=dict(surface.kind_meta))
    return PolygonalSurface(faces)
