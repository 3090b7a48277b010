"""Set-cover instances over (guards, witnesses) and their solvers.

Rows are witnesses, columns are guards.  ``rows[w]`` is the bitset of guards
that see witness ``w``; ``cols[g]`` is the bitset of witnesses guard ``g``
sees.  All tie-breaks go to the lowest index.
"""

from __future__ import annotations

import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Sequence

from .discretization import CandidateSet, WitnessSet, bits, guard_points
from .geometry import Terrain, TerrainPoint, as_terrain_point
from .visibility import _sees, region_union, uncovered_gaps, visibility_region

EXACT = "exact"
GREEDY = "greedy"
LOCAL_SEARCH = "local-search"


class InfeasibleError(ValueError):
    """A witness that no guard sees."""

    def __init__(self, message: str, witness: TerrainPoint | int | None = None):
        super().__init__(message)
        self.witness = witness


class IncidenceMismatch(AssertionError):
    pass


@dataclass(frozen=True)
class SetCoverInstance:
    n_guards: int
    rows: tuple[int, ...]
    guards: tuple[TerrainPoint, ...] | None = field(default=None, compare=False)
    witnesses: tuple[TerrainPoint, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        for w, row in enumerate(self.rows):
            if row == 0:
                where = self.witnesses[w] if self.witnesses else w
                raise InfeasibleError(f"witness {where} is seen by no guard", where)
            if row >> self.n_guards:
                raise ValueError(f"row {w} references a guard index >= {self.n_guards}")

    @classmethod
    def from_sets(cls, n_guards: int, sets: Sequence[Sequence[int]]) -> SetCoverInstance:
        """Build from one list of covering guard indices per witness."""
        return cls(n_guards, tuple(sum(1 << g for g in set(row)) for row in sets))

    @property
    def n_witnesses(self) -> int:
        return len(self.rows)

    @cached_property
    def cols(self) -> tuple[int, ...]:
        cols = [0] * self.n_guards
        for w, row in enumerate(self.rows):
            for g in bits(row):
                cols[g] |= 1 << w
        return tuple(cols)

    def is_cover(self, chosen) -> bool:
        mask = 0
        for g in chosen:
            mask |= 1 << g
        return all(row & mask for row in self.rows)


@dataclass(frozen=True)
class CoverSolution:
    chosen: tuple[int, ...]
    method: str
    optimal: bool = False
    lower_bound: int | None = None
    stats: dict = field(default_factory=dict, compare=False)

    @property
    def cardinality(self) -> int:
        return len(self.chosen)


def _incidence_by_predicate(t: Terrain, guards, witnesses) -> list[int]:
    rows = []
    for w in witnesses:
        row = 0
        for gi, g in enumerate(guards):
            if _sees(t, g.xy, w.xy):
                row |= 1 << gi
        rows.append(row)
    return rows


def build_instance(
    t: Terrain,
    G: CandidateSet | Sequence[TerrainPoint],
    W: WitnessSet | Sequence[TerrainPoint],
    verify: bool = False,
) -> SetCoverInstance:
    """Incidence between witnesses and guards.

    When ``W`` was built over the same guard list its overlay guard sets are
    reused; ``verify`` recomputes every entry with the visibility predicate
    and raises ``IncidenceMismatch`` on disagreement.
    """
    guards = tuple(guard_points(G))
    if isinstance(W, WitnessSet):
        points = W.witnesses
        reuse = tuple(g.x for g in W.guards) == tuple(g.x for g in guards)
    else:
        points = tuple(W)
        reuse = False
    if reuse:
        rows = list(W.seen_by)
        if verify:
            direct = _incidence_by_predicate(t, guards, points)
            for w, (a, b) in enumerate(zip(rows, direct)):
                if a != b:
                    raise IncidenceMismatch(
                        f"witness x={points[w].x}: overlay {bits(a)} vs predicate {bits(b)}"
                    )
    else:
        rows = _incidence_by_predicate(t, guards, points)
    return SetCoverInstance(len(guards), tuple(rows), guards, tuple(points))


def solve_greedy(inst: SetCoverInstance) -> CoverSolution:
    """Pick the guard seeing the most uncovered witnesses until all are seen."""
    cols = inst.cols
    uncovered = (1 << inst.n_witnesses) - 1
    chosen = []
    while uncovered:
        best, best_gain = -1, 0
        for g, col in enumerate(cols):
            gain = (col & uncovered).bit_count()
            if gain > best_gain:
                best, best_gain = g, gain
        chosen.append(best)
        uncovered &= ~cols[best]
    return CoverSolution(tuple(sorted(chosen)), GREEDY)


def _find_swap(inst: SetCoverInstance, chosen: list[int], b: int) -> tuple[list[int], list[int]] | None:
    cols, rows = inst.cols, inst.rows
    chosen_mask = sum(1 << g for g in chosen)
    for k in range(1, b + 1):
        for removed in combinations(chosen, k):
            rest = 0
            for g in chosen:
                if g not in removed:
                    rest |= cols[g]
            need = ~rest & ((1 << inst.n_witnesses) - 1)
            if not need:
                return list(removed), []
            if k == 1:
                continue
            # guards that help, in index order; removed guards may not return
            relevant = [
                g for g in range(inst.n_guards)
                if not chosen_mask >> g & 1 and cols[g] & need
            ]
            common = ~chosen_mask
            for w in bits(need):
                common &= rows[w]
            singles = bits(common)
            for a in range(1, k):
                if a == 1:
                    if singles:
                        return list(removed), [singles[0]]
                    continue
                for added in combinations(relevant, a):
                    got = 0
                    for g in added:
                        got |= cols[g]
                    if need & ~got == 0:
                        return list(removed), list(added)
    return None


def solve_local_search(
    inst: SetCoverInstance, b: int = 2, seed_solution: CoverSolution | None = None
) -> CoverSolution:
    """b-swap local search: remove ``k <= b`` guards, add fewer than ``k``.

    Swaps are enumerated by ``k``, then removed subsets, then added subsets,
    all in lexicographic index order; the first feasible one is applied.
    """
    if b < 1:
        raise ValueError("swap size must be >= 1")
    seed = seed_solution or solve_greedy(inst)
    if not inst.is_cover(seed.chosen):
        raise InfeasibleError("seed solution does not cover every witness")
    chosen = sorted(seed.chosen)
    swaps = 0
    while True:
        swap = _find_swap(inst, chosen, b)
        if swap is None:
            break
        removed, added = swap
        chosen = sorted((set(chosen) - set(removed)) | set(added))
        swaps += 1
    return CoverSolution(tuple(chosen), LOCAL_SEARCH, stats={"swap_size": b, "swaps": swaps})


# --- exact branch-and-bound --------------------------------------------------


def reduce_instance(rows: list[int], n_guards: int) -> tuple[list[int], list[int], int]:
    """Dominance reductions and forced guards, iterated to a fixed point.

    Returns ``(rows, forced, allowed)`` where ``rows`` are the surviving
    witness rows (restricted to allowed guards) and ``forced`` are guards
    every optimum of the reduced instance contains.
    """
    allowed = (1 << n_guards) - 1
    rows = [r for r in rows]
    forced: list[int] = []
    changed = True
    while changed and rows:
        changed = False
        # unit rows force their guard
        for r in rows:
            if r.bit_count() == 1:
                g = r.bit_length() - 1
                forced.append(g)
                rows = [x for x in rows if not x >> g & 1]
                allowed &= ~(1 << g)
                changed = True
                break
        if changed:
            continue
        # a row containing another row is implied by it
        order = sorted(range(len(rows)), key=lambda i: (rows[i].bit_count(), i))
        kept: list[int] = []
        for i in order:
            if not any(rows[k] & ~rows[i] == 0 for k in kept):
                kept.append(i)
        if len(kept) < len(rows):
            rows = [rows[i] for i in sorted(kept)]
            changed = True
        # a guard whose rows are a subset of another guard's rows is dropped
        cols = {}
        for g in bits(allowed):
            col = 0
            for w, r in enumerate(rows):
                if r >> g & 1:
                    col |= 1 << w
            cols[g] = col
        drop = 0
        gs = sorted(cols, key=lambda g: (-cols[g].bit_count(), g))
        survivors: list[int] = []
        for g in gs:
            c = cols[g]
            if c == 0 or any(c & ~cols[h] == 0 for h in survivors):
                drop |= 1 << g
            else:
                survivors.append(g)
        if drop:
            allowed &= ~drop
            rows = [r & ~drop for r in rows]
            changed = True
    return rows, sorted(forced), allowed


def packing_bound(rows: Sequence[int]) -> int:
    """Size of a greedy set of pairwise guard-disjoint rows: a lower bound."""
    used = 0
    count = 0
    for r in sorted(rows, key=lambda r: (r.bit_count(), r)):
        if r & used == 0:
            used |= r
            count += 1
    return count


class _Search:
    def __init__(self, rows: list[int], n_guards: int, deadline: float | None):
        self.rows = rows
        self.deadline = deadline
        self.cols = [0] * n_guards
        for w, r in enumerate(rows):
            for g in bits(r):
                self.cols[g] |= 1 << w
        self.nodes = 0
        self.timed_out = False

    def lower_bound(self, uncovered: int, excluded: int) -> int:
        return packing_bound([self.rows[w] & ~excluded for w in bits(uncovered)])

    def branch_row(self, uncovered: int, excluded: int) -> int:
        best, best_n = -1, None
        for w in bits(uncovered):
            n = (self.rows[w] & ~excluded).bit_count()
            if best_n is None or n < best_n:
                best, best_n = w, n
        return best

    def children(self, uncovered: int, excluded: int, chosen: tuple[int, ...]):
        w = self.branch_row(uncovered, excluded)
        for g in bits(self.rows[w] & ~excluded):
            yield uncovered & ~self.cols[g], excluded, chosen + (g,)
            excluded |= 1 << g

    def dfs(self, uncovered, excluded, chosen, best, shared=None):
        """Depth-first search below one node.

        ``best`` is ``[size, solution]``, improved in place only by strictly
        smaller solutions.  ``shared`` (parallel mode) is a best size found by
        any worker; it prunes only when strictly beaten so that ties resolve
        to the first solution in sequential DFS order.
        """
        stack = [(uncovered, excluded, chosen)]
        while stack:
            if self.timed_out:
                return
            self.nodes += 1
            if self.deadline is not None and self.nodes % 64 == 1 and time.monotonic() > self.deadline:
                self.timed_out = True
                return
            uncovered, excluded, chosen = stack.pop()
            if not uncovered:
                if len(chosen) < best[0]:
                    best[0], best[1] = len(chosen), chosen
                    if shared is not None:
                        shared.offer(len(chosen))
                continue
            lb = len(chosen) + self.lower_bound(uncovered, excluded)
            if lb >= best[0] or (shared is not None and lb > shared.value):
                continue
            kids = list(self.children(uncovered, excluded, chosen))
            stack.extend(reversed(kids))


class _SharedBound:
    def __init__(self, value: int):
        self.value = value
        self._lock = threading.Lock()

    def offer(self, value: int):
        with self._lock:
            if value < self.value:
                self.value = value


def solve_exact(
    inst: SetCoverInstance,
    time_limit: float | None = None,
    reduce: bool = True,
    threads: int = 1,
) -> CoverSolution:
    """Minimum-cardinality cover by branch-and-bound.

    The incumbent starts from greedy; the bound is a packing of guard-disjoint
    rows; branching is on the row with the fewest remaining guards.  The
    returned cover is the first optimum in depth-first order, independent of
    ``threads``.  On timeout the incumbent is returned with ``optimal=False``.
    """
    start = time.monotonic()
    deadline = None if time_limit is None else start + time_limit
    greedy = solve_greedy(inst)
    if reduce:
        rows, forced, _ = reduce_instance(list(inst.rows), inst.n_guards)
    else:
        rows, forced = list(inst.rows), []
    search = _Search(rows, inst.n_guards, deadline)
    full = (1 << len(rows)) - 1
    root_lb = len(forced) + search.lower_bound(full, 0)
    best = [greedy.cardinality - len(forced), None]

    if root_lb >= greedy.cardinality:
        # greedy already meets the root bound
        pass
    elif threads > 1 and rows:
        shared = _SharedBound(best[0])
        kids = list(search.children(full, 0, ()))
        results = [[best[0], None] for _ in kids]

        def run(i):
            sub = _Search(rows, inst.n_guards, deadline)
            sub.dfs(*kids[i], results[i], shared)
            return sub

        with ThreadPoolExecutor(max_workers=threads) as pool:
            subs = list(pool.map(run, range(len(kids))))
        search.nodes = 1 + sum(s.nodes for s in subs)
        search.timed_out = any(s.timed_out for s in subs)
        for res in results:
            if res[1] is not None and res[0] < best[0]:
                best = res
    else:
        search.dfs(full, 0, (), best)

    if best[1] is None:
        chosen = greedy.chosen
    else:
        chosen = tuple(sorted(set(forced) | set(best[1])))
    optimal = not search.timed_out
    lower = len(chosen) if optimal else root_lb
    stats = {
        "nodes": search.nodes,
        "seconds": time.monotonic() - start,
        "reduced_rows": len(rows),
        "forced": len(forced),
    }
    if not optimal:
        stats["gap"] = len(chosen) - lower
    return CoverSolution(chosen, EXACT, optimal, lower, stats)


# --- continuous coverage ------------------------------------------------------


def verify_coverage(t: Terrain, C: Sequence[TerrainPoint]) -> tuple[bool, TerrainPoint | None]:
    """Exact check that the guards in ``C`` see all of ``t``.

    Returns ``(True, None)`` or ``(False, p)`` with ``p`` an unseen point.
    """
    C = [as_terrain_point(t, g) for g in C]
    gaps = uncovered_gaps(t, region_union(visibility_region(t, g) for g in C))
    if not gaps:
        return True, None
    lo, hi = gaps[0]
    return False, t.point_at((lo + hi) / 2)
