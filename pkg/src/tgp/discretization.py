"""Finite guard candidates and witnesses for continuous terrain guarding.

``build_candidates`` returns the vertices together with every extremal point
of every vertex visibility region.  ``build_witnesses`` overlays the
visibility intervals of a finite guard set and places one witness in each
feature whose set of seeing guards is inclusion-minimal.

Guard sets inside features are Python ints used as bitsets: bit ``i`` is set
iff guard ``i`` sees the feature.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .geometry import Terrain, TerrainPoint, point_at
from .visibility import (
    VisibilityRegion,
    XInterval,
    extremal_points,
    region_union,
    uncovered_gaps,
    visibility_region,
)

VERTEX = "vertex"
EXTREMAL = "extremal"


class CoverageError(ValueError):
    """A guard set fails to see the whole terrain."""

    def __init__(self, message: str, point: TerrainPoint):
        super().__init__(message)
        self.point = point


@dataclass(frozen=True)
class CandidateSet:
    terrain: Terrain
    guards: tuple[TerrainPoint, ...]
    # (VERTEX, i) or (EXTREMAL, i): the vertex whose region produced the point
    provenance: tuple[tuple[str, int], ...]

    def __len__(self) -> int:
        return len(self.guards)

    def __iter__(self):
        return iter(self.guards)

    def __getitem__(self, i: int) -> TerrainPoint:
        return self.guards[i]

    def __contains__(self, p) -> bool:
        return self.index_of(p.x if isinstance(p, TerrainPoint) else p) is not None

    def index_of(self, x: Fraction) -> int | None:
        lookup = self.__dict__.get("_index")
        if lookup is None:
            lookup = {g.x: i for i, g in enumerate(self.guards)}
            object.__setattr__(self, "_index", lookup)
        return lookup.get(x)


@dataclass(frozen=True)
class Feature:
    """An open overlay gap (``lo < hi``) or a single breakpoint (``lo == hi``)."""

    interval: XInterval
    seen_by: int

    @property
    def is_point(self) -> bool:
        return self.interval.lo == self.interval.hi

    @property
    def representative(self) -> Fraction:
        lo, hi = self.interval
        return (lo + hi) / 2

    def guards(self) -> list[int]:
        return bits(self.seen_by)


@dataclass(frozen=True)
class WitnessSet:
    terrain: Terrain
    witnesses: tuple[TerrainPoint, ...]
    seen_by: tuple[int, ...]
    # the guard points the seen_by bitsets refer to
    guards: tuple[TerrainPoint, ...]

    def __len__(self) -> int:
        return len(self.witnesses)

    def __iter__(self):
        return iter(zip(self.witnesses, self.seen_by))


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def guard_points(G: CandidateSet | Iterable[TerrainPoint]) -> list[TerrainPoint]:
    return list(G.guards) if isinstance(G, CandidateSet) else list(G)


def build_candidates(t: Terrain) -> CandidateSet:
    """Vertices plus all extremal points of all vertex visibility regions."""
    found: dict[Fraction, tuple[TerrainPoint, tuple[str, int]]] = {}
    for i, v in enumerate(t.vertex_points()):
        found[v.x] = (v, (VERTEX, i))
    for i, v in enumerate(t.vertex_points()):
        for p in extremal_points(visibility_region(t, v)):
            found.setdefault(p.x, (p, (EXTREMAL, i)))
    order = sorted(found)
    return CandidateSet(
        t,
        tuple(found[x][0] for x in order),
        tuple(found[x][1] for x in order),
    )


def guard_regions(t: Terrain, G: Sequence[TerrainPoint]) -> list[VisibilityRegion]:
    return [visibility_region(t, g) for g in G]


def overlay(
    t: Terrain,
    G: CandidateSet | Sequence[TerrainPoint],
    regions: Sequence[VisibilityRegion] | None = None,
) -> list[Feature]:
    """Features of the overlay of all guard visibility intervals, in x order.

    Every open gap between consecutive breakpoints that some guard sees is a
    feature.  A breakpoint becomes a zero-length feature only when its guard
    set is not the union of the two adjacent gaps' sets, which happens at
    singleton visibility components.
    """
    G = guard_points(G)
    if regions is None:
        regions = guard_regions(t, G)
    points = {t.x_min, t.x_max}
    for r in regions:
        for iv in r.components:
            points.add(iv.lo)
            points.add(iv.hi)
    bps = sorted(points)
    where = {x: k for k, x in enumerate(bps)}

    # gap k lies between bps[k] and bps[k + 1]; toggles are XOR deltas
    toggles = [0] * len(bps)
    singles = [0] * len(bps)
    for gi, r in enumerate(regions):
        bit = 1 << gi
        for iv in r.components:
            a, b = where[iv.lo], where[iv.hi]
            if a == b:
                singles[a] |= bit
            else:
                toggles[a] ^= bit
                toggles[b] ^= bit
    gaps = []
    active = 0
    for k in range(len(bps) - 1):
        active ^= toggles[k]
        gaps.append(active)

    features = []
    for k, x in enumerate(bps):
        left = gaps[k - 1] if k > 0 else 0
        right = gaps[k] if k < len(gaps) else 0
        at = left | right | singles[k]
        if at != left | right:
            features.append(Feature(XInterval(x, x), at))
        if k < len(gaps) and right:
            features.append(Feature(XInterval(x, bps[k + 1]), right))
    return features


def inclusion_minimal(features: Sequence[Feature]) -> list[Feature]:
    """Drop every feature whose guard set properly contains another's.

    Input order is preserved; features with identical guard sets are all kept.
    """
    distinct = sorted(set(f.seen_by for f in features), key=lambda m: (m.bit_count(), m))
    minimal: list[int] = []
    keep = set()
    for m in distinct:
        # a proper subset, if any, contains a minimal one
        if not any(s != m and s & ~m == 0 for s in minimal):
            minimal.append(m)
            keep.add(m)
    return [f for f in features if f.seen_by in keep]


def endpoint_omission_check(features: Sequence[Feature]) -> bool:
    """True iff no breakpoint between two gap features is seen by more guards
    than the union of its neighbours (the condition under which breakpoint
    witnesses may be omitted)."""
    by_hi = {f.interval.hi: f for f in features if not f.is_point}
    by_lo = {f.interval.lo: f for f in features if not f.is_point}
    for f in features:
        if not f.is_point:
            continue
        x = f.interval.lo
        left, right = by_hi.get(x), by_lo.get(x)
        if left is None or right is None:
            continue
        if f.seen_by != left.seen_by | right.seen_by:
            return False
    return True


def check_covers(t: Terrain, regions: Sequence[VisibilityRegion]) -> None:
    gaps = uncovered_gaps(t, region_union(regions))
    if gaps:
        lo, hi = gaps[0]
        p = point_at(t, (lo + hi) / 2)
        raise CoverageError(f"G does not cover T: x={p.x} is not seen by any guard", p)


def build_witnesses(
    t: Terrain,
    G: CandidateSet | Sequence[TerrainPoint],
    minimal_filter: bool = True,
    regions: Sequence[VisibilityRegion] | None = None,
) -> WitnessSet:
    """One witness per (inclusion-minimal) overlay feature, at its midpoint."""
    G = guard_points(G)
    if regions is None:
        regions = guard_regions(t, G)
    check_covers(t, regions)
    features = overlay(t, G, regions)
    if minimal_filter:
        features = inclusion_minimal(features)
    return WitnessSet(
        t,
        tuple(point_at(t, f.representative) for f in features),
        tuple(f.seen_by for f in features),
        tuple(G),
    )
