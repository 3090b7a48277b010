"""Closed visibility on terrains.

A point ``p`` sees ``q`` when the segment ``pq`` is nowhere strictly below the
chain; grazing contact counts as visible.  Regions are stored as sorted,
pairwise separated closed x-intervals.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .geometry import Point2, Terrain, TerrainPoint, as_terrain_point, cross, point_at


class XInterval(NamedTuple):
    lo: Fraction
    hi: Fraction

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi


@dataclass(frozen=True)
class VisibilityRegion:
    terrain: Terrain
    owner: TerrainPoint
    components: tuple[XInterval, ...]

    def __contains__(self, x) -> bool:
        return covers(self.components, x)

    def __iter__(self):
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.components)


def covers(intervals: Sequence[XInterval], x) -> bool:
    """Membership test on a sorted list of disjoint closed intervals."""
    i = bisect_right(intervals, (x, x)) - 1
    # an interval starting exactly at x sorts at or before (x, x)
    if i >= 0 and intervals[i].lo <= x <= intervals[i].hi:
        return True
    return i + 1 < len(intervals) and intervals[i + 1].lo == x


def sees(t: Terrain, p: TerrainPoint | Point2, q: TerrainPoint | Point2) -> bool:
    """True iff segment ``pq`` is nowhere strictly below ``t``."""
    p = as_terrain_point(t, p)
    q = as_terrain_point(t, q)
    return _sees(t, p.xy, q.xy)


def _sees(t: Terrain, a: Point2, b: Point2) -> bool:
    if a.x > b.x:
        a, b = b, a
    lo = bisect_right(t.xs, a.x)
    hi = bisect_left(t.xs, b.x)
    verts = t.vertices
    for i in range(lo, hi):
        # vertex strictly left of the directed segment a->b means strictly above it
        if cross(a, b, verts[i]) > 0:
            return False
    return True


def _sweep_right(verts: Sequence[Point2], xs: Sequence[Fraction], p: Point2) -> list[XInterval]:
    """Visible pieces at or right of ``p`` as raw, possibly touching intervals.

    The running "highest blocking ray" is kept as its anchor vertex; a point
    ``q`` beyond the anchor is visible iff it is on or above ray ``p -> anchor``.
    """
    n = len(verts)
    first = bisect_right(xs, p.x)
    if first == n:
        return [XInterval(p.x, p.x)]
    pieces = [XInterval(p.x, xs[first])]
    anchor = None
    for j in range(first, n):
        v = verts[j]
        v_visible = anchor is None or cross(p, anchor, v) >= 0
        if v_visible:
            anchor = v
            pieces.append(XInterval(v.x, v.x))
        if j == n - 1:
            break
        w = verts[j + 1]
        cw = cross(p, anchor, w)
        if cw < 0:
            continue
        if v_visible:
            pieces.append(XInterval(v.x, w.x))
        else:
            # v strictly below the ray, w on or above: enter at the crossing
            cv = cross(p, anchor, v)
            s = cv / (cv - cw)
            pieces.append(XInterval(v.x + s * (w.x - v.x), w.x))
    return pieces


def merge_intervals(intervals: Iterable[XInterval]) -> list[XInterval]:
    """Normalize closed intervals into a sorted union; touching ones merge."""
    out: list[XInterval] = []
    for iv in sorted(intervals):
        if out and iv.lo <= out[-1].hi:
            if iv.hi > out[-1].hi:
                out[-1] = XInterval(out[-1].lo, iv.hi)
        else:
            out.append(XInterval(iv.lo, iv.hi))
    return out


def visibility_region(t: Terrain, p: TerrainPoint | Point2) -> VisibilityRegion:
    """All x with ``sees(t, p, point_at(t, x))``, in O(n) exact operations."""
    p = as_terrain_point(t, p)
    right = _sweep_right(t.vertices, t.xs, p.xy)
    m = t.mirrored
    left = _sweep_right(m.vertices, m.xs, Point2(-p.x, p.y))
    pieces = right + [XInterval(-iv.hi, -iv.lo) for iv in left]
    return VisibilityRegion(t, p, tuple(merge_intervals(pieces)))


def extremal_points(r: VisibilityRegion) -> list[TerrainPoint]:
    """Endpoints of each connected component of ``r``, ordered and deduplicated."""
    xs: list[Fraction] = []
    for iv in r.components:
        for x in (iv.lo, iv.hi):
            if not xs or xs[-1] != x:
                xs.append(x)
    return [point_at(r.terrain, x) for x in xs]


def region_union(rs: Iterable[VisibilityRegion | Sequence[XInterval]]) -> list[XInterval]:
    """Normalized union of visibility regions (or raw interval lists)."""
    pieces: list[XInterval] = []
    for r in rs:
        pieces.extend(r.components if isinstance(r, VisibilityRegion) else r)
    return merge_intervals(pieces)


def uncovered_gaps(t: Terrain, intervals: Sequence[XInterval]) -> list[tuple[Fraction, Fraction]]:
    """Open x-ranges of the terrain extent missed by ``intervals`` (normalized).

    Gaps at the terrain ends are half-open in reality; they are reported by
    their closure and are never empty.
    """
    gaps = []
    cur = t.x_min
    for iv in intervals:
        if iv.lo > cur:
            gaps.append((cur, iv.lo))
        cur = max(cur, iv.hi)
    if not intervals:
        return [(t.x_min, t.x_max)]
    if cur < t.x_max:
        gaps.append((cur, t.x_max))
    return gaps


def intersect(intervals: Sequence[XInterval], lo: Fraction, hi: Fraction) -> list[XInterval]:
    """Clip a normalized interval list to ``[lo, hi]``."""
    out = []
    for iv in intervals:
        a, b = max(iv.lo, lo), min(iv.hi, hi)
        if a <= b:
            out.append(XInterval(a, b))
    return out
