"""Exact terrain geometry: rational points, orientation, and the terrain chain."""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

Rat = Fraction


class TerrainError(ValueError):
    """Invalid terrain description or a point that is not on the terrain."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


def rat(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to an exact rational.

    Floats are refused: they would silently smuggle rounding into every
    derived point.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact coordinate {value!r}")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


class Point2(NamedTuple):
    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, x, y) -> Point2:
        return cls(rat(x), rat(y))


def cross(a: Point2, b: Point2, c: Point2) -> Fraction:
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)


def orientation(a: Point2, b: Point2, c: Point2) -> int:
    """Sign of ``(b - a) x (c - a)``: +1 left turn, -1 right turn, 0 collinear."""
    d = cross(a, b, c)
    return (d > 0) - (d < 0)


@dataclass(frozen=True)
class TerrainPoint:
    """A point on a terrain, identified by its x-coordinate.

    ``y`` is cached from interpolation; ``edge`` is the index of an edge that
    contains the point (either incident edge for vertices).  Neither takes
    part in equality or hashing.
    """

    x: Fraction
    y: Fraction = field(compare=False)
    edge: int = field(compare=False, default=0)

    @property
    def xy(self) -> Point2:
        return Point2(self.x, self.y)

    def __lt__(self, other: TerrainPoint) -> bool:
        return self.x < other.x

    def __repr__(self) -> str:
        return f"TerrainPoint({self.x}, {self.y})"


@dataclass(frozen=True)
class Terrain:
    """Strictly x-monotone polygonal chain ``v_1 .. v_n``; edge ``i`` joins
    vertices ``i`` and ``i + 1`` (0-based)."""

    vertices: tuple[Point2, ...]
    xs: tuple[Fraction, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "xs", tuple(v.x for v in self.vertices))

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def x_min(self) -> Fraction:
        return self.xs[0]

    @property
    def x_max(self) -> Fraction:
        return self.xs[-1]

    @cached_property
    def mirrored(self) -> Terrain:
        """The chain reflected through the y-axis (x -> -x), vertices re-sorted."""
        return Terrain(tuple(Point2(-v.x, v.y) for v in reversed(self.vertices)))

    def edge(self, i: int) -> tuple[Point2, Point2]:
        return self.vertices[i], self.vertices[i + 1]

    def edge_at(self, x: Fraction) -> int:
        """Index of the edge containing ``x``; at an inner vertex, the edge to its right."""
        if not self.x_min <= x <= self.x_max:
            raise TerrainError(f"x={x} outside terrain extent [{self.x_min}, {self.x_max}]")
        return min(bisect_right(self.xs, x) - 1, self.n - 2)

    def height(self, x: Fraction) -> Fraction:
        i = self.edge_at(x)
        a, b = self.edge(i)
        if x == a.x:
            return a.y
        if x == b.x:
            return b.y
        return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x)

    def vertex_index(self, x: Fraction) -> int | None:
        i = bisect_left(self.xs, x)
        if i < self.n and self.xs[i] == x:
            return i
        return None

    def vertex_point(self, i: int) -> TerrainPoint:
        v = self.vertices[i]
        return TerrainPoint(v.x, v.y, min(i, self.n - 2))

    def vertex_points(self) -> list[TerrainPoint]:
        return [self.vertex_point(i) for i in range(self.n)]

    def point_at(self, x) -> TerrainPoint:
        return point_at(self, x)

    def contains(self, p: Point2) -> bool:
        return self.x_min <= p.x <= self.x_max and self.height(p.x) == p.y


def point_at(t: Terrain, x) -> TerrainPoint:
    """The terrain point above ``x``, with exactly interpolated height."""
    x = rat(x)
    return TerrainPoint(x, t.height(x), t.edge_at(x))


def as_terrain_point(t: Terrain, p: TerrainPoint | Point2) -> TerrainPoint:
    """Validate that ``p`` lies on ``t`` and return it as a TerrainPoint."""
    if isinstance(p, TerrainPoint):
        q = point_at(t, p.x)
        if q.y != p.y:
            raise TerrainError(f"point ({p.x}, {p.y}) is not on the terrain")
        return p
    if not t.contains(p):
        raise TerrainError(f"point ({p.x}, {p.y}) is not on the terrain")
    return point_at(t, p.x)


def merge_collinear(vertices: Sequence[Point2]) -> list[Point2]:
    out: list[Point2] = []
    for v in vertices:
        while len(out) >= 2 and orientation(out[-2], out[-1], v) == 0:
            out.pop()
        out.append(v)
    return out


def validate_terrain(vertices: Iterable, normalize: bool = False) -> Terrain:
    """Build a Terrain from ``(x, y)`` pairs, enforcing strict x-monotonicity.

    Collinear consecutive vertices are kept unless ``normalize`` is set.
    """
    pts = [p if isinstance(p, Point2) else Point2.of(*p) for p in vertices]
    if len(pts) < 2:
        raise TerrainError(f"a terrain needs at least 2 vertices, got {len(pts)}")
    for i in range(1, len(pts)):
        if pts[i].x == pts[i - 1].x:
            raise TerrainError(f"duplicate x-coordinate {pts[i].x} at index {i}", index=i)
        if pts[i].x < pts[i - 1].x:
            raise TerrainError(
                f"x-coordinates not increasing at index {i} ({pts[i - 1].x} >= {pts[i].x})",
                index=i,
            )
    if normalize:
        pts = merge_collinear(pts)
    return Terrain(tuple(pts))
