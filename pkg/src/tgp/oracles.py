"""Independent oracles and executable checks of the guard-repositioning lemmas.

Nothing here is used by the solvers; it exists to check them.
"""

from __future__ import annotations

import random
from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .discretization import CandidateSet, build_candidates, build_witnesses
from .geometry import Terrain, TerrainPoint, point_at
from .setcover import SetCoverInstance, build_instance, solve_greedy, verify_coverage
from .visibility import (
    VisibilityRegion,
    XInterval,
    intersect,
    region_union,
    uncovered_gaps,
    visibility_region,
)

BRUTE_FORCE_LIMIT = 25


class InstanceTooLarge(ValueError):
    pass


class AlreadyInU(ValueError):
    """The guard is a candidate already; it needs no move."""


class NotACover(ValueError):
    pass


class BothSidesError(AssertionError):
    """A guard off the candidate set is both a left- and a right-guard."""


def brute_force_min_cover(inst: SetCoverInstance) -> tuple[int, tuple[int, ...]]:
    """Smallest cover by exhaustive enumeration, lexicographically least."""
    if inst.n_guards > BRUTE_FORCE_LIMIT:
        raise InstanceTooLarge(f"{inst.n_guards} guards exceeds the limit of {BRUTE_FORCE_LIMIT}")
    cols = inst.cols
    full = (1 << inst.n_witnesses) - 1
    for k in range(inst.n_guards + 1):
        for combo in combinations(range(inst.n_guards), k):
            got = 0
            for g in combo:
                got |= cols[g]
            if got == full:
                return k, combo
    raise AssertionError("unreachable: rows are non-empty")


@dataclass(frozen=True)
class GuardClassification:
    guard: TerrainPoint
    critical: tuple[int, ...]
    # edges right of the guard that are critical for it
    left_guard_of: tuple[int, ...]
    # edges left of the guard that are critical for it
    right_guard_of: tuple[int, ...]

    @property
    def critical_edges_left(self) -> tuple[int, ...]:
        return self.right_guard_of

    @property
    def critical_edges_right(self) -> tuple[int, ...]:
        return self.left_guard_of

    @property
    def is_left_guard(self) -> bool:
        return bool(self.left_guard_of)

    @property
    def is_right_guard(self) -> bool:
        return bool(self.right_guard_of)


def edge_coverage(t: Terrain, union: Sequence[XInterval], i: int) -> list[XInterval]:
    a, b = t.edge(i)
    return intersect(union, a.x, b.x)


def _fully_covers(t: Terrain, intervals: Sequence[XInterval], i: int) -> bool:
    a, b = t.edge(i)
    cov = intersect(intervals, a.x, b.x)
    return len(cov) == 1 and cov[0] == (a.x, b.x)


def classify_guard(
    t: Terrain,
    C: Sequence[TerrainPoint],
    g: int,
    regions: Sequence[VisibilityRegion] | None = None,
) -> GuardClassification:
    """Critical edges of guard ``C[g]`` within cover ``C`` (a multiset).

    An edge is critical for the guard when neither the guard alone nor the
    remaining guards see all of it.  Edges the guard sees entirely are never
    critical for it; they keep their coverage under any move to a candidate
    neighbour.  Since coverage is closed, the remaining guards then see a
    piece of positive length.
    """
    if regions is None:
        regions = [visibility_region(t, c) for c in C]
    if uncovered_gaps(t, region_union(regions)):
        raise NotACover("C does not cover the terrain")
    guard = C[g]
    others = region_union(r for k, r in enumerate(regions) if k != g)
    critical, left_of, right_of = [], [], []
    for i in range(t.n - 1):
        a, b = t.edge(i)
        if _fully_covers(t, others, i) or _fully_covers(t, regions[g].components, i):
            continue
        critical.append(i)
        if guard.x < a.x:
            left_of.append(i)
        elif guard.x > b.x:
            right_of.append(i)
    return GuardClassification(guard, tuple(critical), tuple(left_of), tuple(right_of))


def u_neighbors(t: Terrain, U: CandidateSet, g: TerrainPoint) -> tuple[TerrainPoint, TerrainPoint]:
    """Nearest candidates strictly left and strictly right of ``g``."""
    xs = [u.x for u in U.guards]
    i = bisect_left(xs, g.x)
    if i < len(xs) and xs[i] == g.x:
        raise AlreadyInU(f"x={g.x} is already a candidate")
    if i == 0 or i == len(xs):
        raise ValueError(f"x={g.x} has no candidate on both sides")
    return U.guards[i - 1], U.guards[i]


@dataclass
class Move:
    index: int
    source: TerrainPoint
    target: TerrainPoint
    side: str


def reposition_to_U(
    t: Terrain,
    U: CandidateSet,
    C: Sequence[TerrainPoint],
    trace: list[Move] | None = None,
) -> list[TerrainPoint]:
    """Move every guard of cover ``C`` onto a candidate, keeping coverage.

    A guard that is not a right-guard moves to its left candidate
    neighbour, otherwise (not a left-guard) to its right one.  The result is
    a list of the same length as ``C``; coincident guards are kept.
    """
    C = list(C)
    regions = [visibility_region(t, c) for c in C]
    if uncovered_gaps(t, region_union(regions)):
        raise NotACover("C does not cover the terrain")
    while True:
        pending = [k for k, c in enumerate(C) if c not in U]
        if not pending:
            return C
        k = pending[0]
        cls = classify_guard(t, C, k, regions)
        u_left, u_right = u_neighbors(t, U, C[k])
        if not cls.is_right_guard:
            target, side = u_left, "left"
        elif not cls.is_left_guard:
            target, side = u_right, "right"
        else:
            raise BothSidesError(
                f"guard x={C[k].x} is left-guard of {cls.left_guard_of} "
                f"and right-guard of {cls.right_guard_of}"
            )
        if trace is not None:
            trace.append(Move(k, C[k], target, side))
        C[k] = target
        regions[k] = visibility_region(t, target)


# --- randomized lemma checks --------------------------------------------------


def random_candidates(t: Terrain, count: int, rng: random.Random, denom: int = 1000) -> list[TerrainPoint]:
    """``count`` distinct uniformly drawn rational positions on the terrain."""
    span = t.x_max - t.x_min
    xs = {t.x_min + span * Fraction(rng.randint(0, denom), denom) for _ in range(count)}
    return [point_at(t, x) for x in sorted(xs)]


def dense_random_cover(t: Terrain, rng: random.Random, per_vertex: int = 10) -> list[TerrainPoint]:
    """Greedy cover drawn from ``per_vertex * n`` random candidates.

    Vertices are added to the pool only when the random points fail to see
    the whole terrain.
    """
    pool = random_candidates(t, per_vertex * t.n, rng)
    regions = [visibility_region(t, p) for p in pool]
    if uncovered_gaps(t, region_union(regions)):
        have = {p.x for p in pool}
        extra = [v for v in t.vertex_points() if v.x not in have]
        pool = sorted(pool + extra)
        regions = [visibility_region(t, p) for p in pool]
    W = build_witnesses(t, pool, regions=regions)
    inst = build_instance(t, pool, W)
    return [pool[g] for g in solve_greedy(inst).chosen]


def random_irredundant_cover(t: Terrain, rng: random.Random, per_vertex: int = 10) -> list[TerrainPoint]:
    """Cover from a shuffled random pool: add guards that see something new
    until the terrain is covered, then drop redundant guards in random order."""
    pool = random_candidates(t, per_vertex * t.n, rng) + t.vertex_points()
    rng.shuffle(pool)
    chosen: list[tuple[TerrainPoint, VisibilityRegion]] = []
    union: list[XInterval] = []
    for p in pool:
        r = visibility_region(t, p)
        merged = region_union([union, r])
        if merged != union:
            chosen.append((p, r))
            union = merged
        if not uncovered_gaps(t, union):
            break
    for k in rng.sample(range(len(chosen)), len(chosen)):
        rest = [c[1] for j, c in enumerate(chosen) if j != k and c is not None]
        if chosen[k] is not None and not uncovered_gaps(t, region_union(rest)):
            chosen[k] = None
    return sorted(c[0] for c in chosen if c is not None)


def basin_terrain(rng: random.Random) -> Terrain:
    """Random two-mountain basin: high ground on both sides of a low bottom
    edge, with a lower peak in front of each mountain.  Guards on the
    mountains see the bottom edge only partially, one from each side."""
    from .geometry import validate_terrain

    pts = [(0, rng.randint(10, 16))]
    x = 0
    for lo, hi in ((2, 5), (5, 8), (0, 1)):
        x += rng.randint(2, 4)
        pts.append((x, rng.randint(lo, hi)))
    x += rng.randint(4, 8)
    pts.append((x, rng.randint(0, 1)))
    for lo, hi in ((5, 8), (2, 5), (10, 16)):
        x += rng.randint(2, 4)
        pts.append((x, rng.randint(lo, hi)))
    return validate_terrain(pts)


def _partial(seen: list[XInterval], lo: Fraction, hi: Fraction) -> bool:
    return len(seen) == 1 and seen[0].lo < seen[0].hi and seen[0] != (lo, hi)


def two_sided_cover(t: Terrain, rng: random.Random, per_vertex: int = 10) -> list[TerrainPoint] | None:
    """A cover in which some edge is seen partially from both sides only.

    Picks an edge, a pool point left of it and one right of it that each see
    a proper, overlapping piece of it, and completes the cover with pool
    points that see no positive-length part of that edge.  Returns None when
    the pool offers no such configuration.
    """
    pool = random_candidates(t, per_vertex * t.n, rng) + t.vertex_points()
    regions = {p.x: visibility_region(t, p) for p in pool}
    pool = sorted({p.x: p for p in pool}.values())
    edges = list(range(t.n - 1))
    rng.shuffle(edges)
    for i in edges:
        a, b = t.edge(i)
        seen = {p.x: intersect(regions[p.x].components, a.x, b.x) for p in pool}
        lefts = [p for p in pool if p.x < a.x and _partial(seen[p.x], a.x, b.x)]
        rights = [p for p in pool if p.x > b.x and _partial(seen[p.x], a.x, b.x)]
        pairs = [
            (l, r) for l in lefts for r in rights
            if seen[l.x][0].lo <= seen[r.x][0].hi
        ]
        if not pairs:
            continue
        gl, gr = rng.choice(pairs)
        rest = [p for p in pool if all(iv.lo == iv.hi for iv in seen[p.x])]
        rng.shuffle(rest)
        chosen = [gl, gr]
        union = region_union([regions[gl.x], regions[gr.x]])
        for p in rest:
            if not uncovered_gaps(t, union):
                break
            merged = region_union([union, regions[p.x]])
            if merged != union:
                chosen.append(p)
                union = merged
        if uncovered_gaps(t, union):
            continue
        for k in rng.sample(range(2, len(chosen)), len(chosen) - 2):
            trial = [c for j, c in enumerate(chosen) if j != k and c is not None]
            if chosen[k] is not None and not uncovered_gaps(t, region_union(regions[c.x] for c in trial)):
                chosen[k] = None
        return sorted(c for c in chosen if c is not None)
    return None


@dataclass
class CheckResult:
    name: str
    cases: int = 0
    failures: int = 0
    counterexample: Terrain | None = None
    detail: str = ""

    def record(self, ok: bool, t: Terrain, detail: str = ""):
        self.cases += 1
        if not ok:
            self.failures += 1
            if self.counterexample is None:
                self.counterexample = t
                self.detail = detail


CHECKS = (
    "full-edge-neighbours",  # an edge fully seen by g off U is fully seen by both U-neighbours
    "single-interval",  # a side-guard sees one interval of its critical edge, touching the far end
    "unique-side-guard",  # an edge with a side-guard has exactly one left- and one right-guard
    "shared-point",  # left- and right-guard of an edge see a common point on it
    "not-both-sides",  # no guard off U is a left- and a right-guard
    "move-keeps-cover",  # the side-appropriate single move keeps a cover
)


@dataclass
class LemmaReport:
    terrains: int
    results: dict[str, CheckResult] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.failures == 0 for r in self.results.values())

    def lines(self) -> list[str]:
        from .io import dumps_terrain

        out = []
        for name in CHECKS:
            r = self.results[name]
            ce = "-" if r.counterexample is None else dumps_terrain(r.counterexample, compact=True)
            out.append(f"{name}\tcases={r.cases}\tfailures={r.failures}\tcounterexample={ce}")
        return out


def check_cover(t: Terrain, U: CandidateSet, C: Sequence[TerrainPoint], report: LemmaReport) -> None:
    res = report.results
    regions = [visibility_region(t, c) for c in C]
    classes = [classify_guard(t, C, k, regions) for k in range(len(C))]

    for k, g in enumerate(C):
        if g in U:
            continue
        u_left, u_right = u_neighbors(t, U, g)
        rl, rr = visibility_region(t, u_left), visibility_region(t, u_right)
        for i in range(t.n - 1):
            if _fully_covers(t, regions[k].components, i):
                ok = _fully_covers(t, rl.components, i) and _fully_covers(t, rr.components, i)
                res["full-edge-neighbours"].record(ok, t, f"g={g.x} edge={i}")
        cls = classes[k]
        both = cls.is_left_guard and cls.is_right_guard
        res["not-both-sides"].record(not both, t, f"g={g.x}")
        if both:
            continue
        target = u_right if cls.is_right_guard else u_left
        moved = list(C)
        moved[k] = target
        ok, _ = verify_coverage(t, moved)
        res["move-keeps-cover"].record(ok, t, f"g={g.x} -> {target.x}")

    for i in range(t.n - 1):
        a, b = t.edge(i)
        lefts = [k for k, c in enumerate(classes) if i in c.left_guard_of]
        rights = [k for k, c in enumerate(classes) if i in c.right_guard_of]
        for k in lefts + rights:
            seen = intersect(regions[k].components, a.x, b.x)
            far = b.x if k in lefts else a.x
            ok = len(seen) == 1 and far in seen[0]
            res["single-interval"].record(ok, t, f"g={C[k].x} edge={i} seen={seen}")
        if lefts or rights:
            res["unique-side-guard"].record(
                len(lefts) == 1 and len(rights) == 1, t, f"edge={i} left={lefts} right={rights}"
            )
        if lefts and rights:
            seen_l = intersect(regions[lefts[0]].components, a.x, b.x)
            seen_r = intersect(regions[rights[0]].components, a.x, b.x)
            shared = any(max(p.lo, q.lo) <= min(p.hi, q.hi) for p in seen_l for q in seen_r)
            res["shared-point"].record(shared, t, f"edge={i}")


def lemma_checks(t: Terrain | None, trials: int, seed: int = 0, n_range=(4, 12)) -> LemmaReport:
    """Randomized checks of the repositioning lemmas.

    Each trial examines up to three covers of one terrain: a greedy cover
    over dense random candidates, a random irredundant cover, and a cover
    with an edge seen partially from both sides (when one can be found).
    With ``t`` given every trial reuses it; otherwise every third trial uses
    a random basin and the rest random-walk terrains with ``n`` in
    ``n_range``.
    """
    from .io import generate_terrain

    rng = random.Random(seed)
    report = LemmaReport(0, {name: CheckResult(name) for name in CHECKS})
    for trial in range(trials):
        terrain = t
        if terrain is None and trial % 3 == 2:
            terrain = basin_terrain(rng)
        elif terrain is None:
            terrain = generate_terrain(rng.randint(*n_range), rng.randrange(2**31), "random-walk")
        U = build_candidates(terrain)
        report.terrains += 1
        check_cover(terrain, U, dense_random_cover(terrain, rng), report)
        check_cover(terrain, U, random_irredundant_cover(terrain, rng), report)
        C = two_sided_cover(terrain, rng)
        if C is not None:
            check_cover(terrain, U, C, report)
    return report
