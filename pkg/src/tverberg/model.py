"""Colorings, instances and Tverberg witnesses.

Vertices of the simplex are plain integers ``0..n-1``; the simplex itself is
never stored, only the images of its vertices under the affine map.  All
coordinates are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Point = tuple[Fraction, ...]
Face = tuple[int, ...]


class InvalidInstance(ValueError):
    """Raised when an instance or coloring is structurally broken."""


class InvalidWitness(ValueError):
    """Raised by :meth:`TverbergWitness.check` for a witness that does not hold."""


def to_fraction(value) -> Fraction:
    """Convert ints, Fractions and ``"p/q"`` strings; floats are refused."""
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact value {value!r}")
    if isinstance(value, str):
        text = value.strip()
        # Fraction() would also accept decimals and exponents
        num, _, den = text.partition("/")
        if not _is_int_literal(num) or (den and not _is_int_literal(den)):
            raise ValueError(f"not an exact rational: {value!r}")
        return Fraction(int(num), int(den) if den else 1)
    return Fraction(value)


def _is_int_literal(text: str) -> bool:
    body = text[1:] if text[:1] in "+-" else text
    return body.isascii() and body.isdigit()


def make_point(coords: Iterable) -> Point:
    return tuple(to_fraction(c) for c in coords)


@dataclass(frozen=True)
class Coloring:
    """A partition of the vertex set into color classes.

    ``class_of[v]`` is the class index of vertex ``v``; ``classes[i]`` is the
    sorted tuple of vertices in class ``i``.  Build through
    :meth:`from_class_of` or :meth:`from_classes` rather than directly.
    """

    num_vertices: int
    class_of: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.class_of) != self.num_vertices:
            raise InvalidInstance("class_of length differs from num_vertices")
        seen = set()
        for i, cls in enumerate(self.classes):
            if not cls:
                raise InvalidInstance(f"class {i} is empty")
            for v in cls:
                if not 0 <= v < self.num_vertices:
                    raise InvalidInstance(f"class {i} has out-of-range vertex {v}")
                if v in seen:
                    raise InvalidInstance(f"vertex {v} appears in two classes")
                if self.class_of[v] != i:
                    raise InvalidInstance(f"class_of[{v}] disagrees with classes")
                seen.add(v)
        if len(seen) != self.num_vertices:
            missing = sorted(set(range(self.num_vertices)) - seen)
            raise InvalidInstance(f"vertices {missing} belong to no class")

    @classmethod
    def from_class_of(cls, class_of: Sequence[int]) -> "Coloring":
        """Build from per-vertex labels; distinct labels are renumbered in sorted order."""
        for label in class_of:
            if isinstance(label, bool) or not isinstance(label, int):
                raise InvalidInstance(f"color label {label!r} is not an integer")
        index = {label: i for i, label in enumerate(sorted(set(class_of)))}
        dense = tuple(index[label] for label in class_of)
        buckets: list[list[int]] = [[] for _ in index]
        for v, c in enumerate(dense):
            buckets[c].append(v)
        return cls(len(dense), dense, tuple(tuple(b) for b in buckets))

    @classmethod
    def from_classes(cls, classes: Sequence[Iterable[int]]) -> "Coloring":
        classes = tuple(tuple(sorted(c)) for c in classes)
        n = sum(len(c) for c in classes)
        class_of = [-1] * n
        for i, members in enumerate(classes):
            for v in members:
                if not 0 <= v < n:
                    raise InvalidInstance(f"class {i} has out-of-range vertex {v}")
                class_of[v] = i
        return cls(n, tuple(class_of), classes)

    @classmethod
    def from_sizes(cls, sizes: Sequence[int]) -> "Coloring":
        """Consecutive vertex blocks: sizes ``[2, 1]`` gives classes ``(0, 1), (2,)``."""
        if any(s <= 0 for s in sizes):
            raise InvalidInstance(f"class sizes must be positive, got {list(sizes)}")
        return cls.from_class_of([i for i, s in enumerate(sizes) for _ in range(s)])

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)


class ColoringKind(enum.Enum):
    SPECIAL = "special"
    GENERAL = "general"
    INVALID = "invalid"


@dataclass(frozen=True)
class Classification:
    kind: ColoringKind
    reason: str | None = None

    @property
    def usable(self) -> bool:
        return self.kind is not ColoringKind.INVALID


def base_vertex_count(d: int, r: int) -> int:
    """Vertex count ``(d+1)(r-1)+1`` of a base instance."""
    return (d + 1) * (r - 1) + 1


def validate_coloring(coloring: Coloring, r: int, d: int) -> Classification:
    sizes = coloring.sizes
    for i, s in enumerate(sizes):
        if s > r - 1:
            return Classification(ColoringKind.INVALID, f"class {i} exceeds r-1")
    expected = base_vertex_count(d, r)
    if coloring.num_vertices != expected:
        return Classification(
            ColoringKind.INVALID,
            f"vertex count {coloring.num_vertices} != (d+1)(r-1)+1 = {expected}",
        )
    # the class count is implied by the size bound and the total
    if len(sizes) == d + 2 and sorted(sizes) == [1] + [r - 1] * (d + 1):
        return Classification(ColoringKind.SPECIAL)
    return Classification(ColoringKind.GENERAL)


def rainbow_check(face: Iterable[int], coloring: Coloring) -> bool:
    used = set()
    for v in face:
        if not 0 <= v < coloring.num_vertices:
            raise IndexError(f"vertex {v} out of range 0..{coloring.num_vertices - 1}")
        c = coloring.class_of[v]
        if c in used:
            return False
        used.add(c)
    return True


def canonical_family(faces: Iterable[Iterable[int]]) -> tuple[Face, ...]:
    """Sort every face and order the faces by their minimum vertex."""
    sorted_faces = [tuple(sorted(set(f))) for f in faces]
    seen: set[int] = set()
    for face in sorted_faces:
        if not face:
            raise ValueError("faces must be nonempty")
        overlap = seen.intersection(face)
        if overlap:
            raise ValueError(f"faces overlap in vertices {sorted(overlap)}")
        seen.update(face)
    return tuple(sorted(sorted_faces, key=lambda f: f[0]))


@dataclass(frozen=True)
class Instance:
    d: int
    r: int
    points: tuple[Point, ...]
    coloring: Coloring

    def __post_init__(self):
        if isinstance(self.d, bool) or not isinstance(self.d, int) or self.d < 1:
            raise InvalidInstance(f"dimension must be a positive integer, got {self.d!r}")
        if isinstance(self.r, bool) or not isinstance(self.r, int) or self.r < 2:
            raise InvalidInstance(f"r must be an integer >= 2, got {self.r!r}")
        if len(self.points) != self.coloring.num_vertices:
            raise InvalidInstance(
                f"{len(self.points)} points but coloring has "
                f"{self.coloring.num_vertices} vertices"
            )
        for v, p in enumerate(self.points):
            if len(p) != self.d:
                raise InvalidInstance(f"point {v} has {len(p)} coordinates, expected {self.d}")
            if not all(type(x) is Fraction for x in p):
                raise InvalidInstance(f"point {v} has non-Fraction coordinates")

    @classmethod
    def build(cls, d: int, r: int, points: Iterable[Iterable], colors: Sequence[int]) -> "Instance":
        return cls(d, r, tuple(make_point(p) for p in points), Coloring.from_class_of(colors))

    @property
    def num_vertices(self) -> int:
        return len(self.points)

    def classify(self) -> Classification:
        return validate_coloring(self.coloring, self.r, self.d)


@dataclass(frozen=True)
class TverbergWitness:
    """``r`` disjoint rainbow faces together with a common point of their hulls.

    ``coefficients[i]`` maps each vertex of ``faces[i]`` to its convex weight.
    """

    faces: tuple[Face, ...]
    point: Point
    coefficients: tuple[Mapping[int, Fraction], ...]

    def check(self, instance: Instance) -> None:
        """Raise :class:`InvalidWitness` unless every invariant holds exactly."""
        if len(self.faces) != instance.r:
            raise InvalidWitness(f"expected {instance.r} faces, got {len(self.faces)}")
        if len(self.coefficients) != len(self.faces):
            raise InvalidWitness("one coefficient map per face required")
        if len(self.point) != instance.d:
            raise InvalidWitness("common point has the wrong dimension")
        used: set[int] = set()
        for i, (face, coeffs) in enumerate(zip(self.faces, self.coefficients)):
            if not face:
                raise InvalidWitness(f"face {i} is empty")
            if any(not 0 <= v < instance.num_vertices for v in face):
                raise InvalidWitness(f"face {i} has an out-of-range vertex")
            if used.intersection(face):
                raise InvalidWitness(f"face {i} overlaps an earlier face")
            used.update(face)
            if not rainbow_check(face, instance.coloring):
                raise InvalidWitness(f"face {i} is not rainbow")
            if not set(coeffs) <= set(face):
                raise InvalidWitness(f"face {i} has coefficients outside the face")
            if any(c < 0 for c in coeffs.values()):
                raise InvalidWitness(f"face {i} has a negative coefficient")
            if sum(coeffs.values()) != 1:
                raise InvalidWitness(f"face {i} coefficients do not sum to 1")
            combo = tuple(
                sum((c * instance.points[v][k] for v, c in coeffs.items()), Fraction(0))
                for k in range(instance.d)
            )
            if combo != tuple(self.point):
                raise InvalidWitness(f"face {i} does not reproduce the common point")

    def is_valid(self, instance: Instance) -> bool:
        try:
            self.check(instance)
        except InvalidWitness:
            return False
        return True
