import random
from fractions import Fraction

import pytest

from tgp.discretization import build_candidates, build_witnesses
from tgp.geometry import point_at
from tgp.io import generate_terrain
from tgp.oracles import brute_force_min_cover
from tgp.setcover import (
    InfeasibleError,
    SetCoverInstance,
    build_instance,
    packing_bound,
    reduce_instance,
    solve_exact,
    solve_greedy,
    solve_local_search,
    verify_coverage,
)
from tgp.visibility import sees

# greedy takes guard 2 first (lowest index among three 2-row guards), then
# needs two more; {3, 4} covers everything
GREEDY_TRAP = SetCoverInstance.from_sets(5, [[3], [2, 4], [0, 4], [2, 3]])


def terrain_instance(t, min_filter=True):
    U = build_candidates(t)
    return build_instance(t, U, build_witnesses(t, U, minimal_filter=min_filter))


def random_instance(rng, n_guards=None, n_rows=None):
    n_guards = n_guards or rng.randint(1, 12)
    n_rows = rng.randint(0, 15) if n_rows is None else n_rows
    sets = [rng.sample(range(n_guards), rng.randint(1, min(4, n_guards))) for _ in range(n_rows)]
    return SetCoverInstance.from_sets(n_guards, sets)


def test_single_edge_instance(single_edge):
    inst = terrain_instance(single_edge)
    assert inst.n_guards == 2 and inst.rows == (0b11,)


def test_peak_instance(peak):
    inst = terrain_instance(peak)
    assert inst.n_witnesses == 2 and inst.n_guards == 3
    assert all(row >> 1 & 1 for row in inst.rows)


def test_incidence_matches_predicate(w_terrain):
    inst = terrain_instance(w_terrain)
    for w, row in zip(inst.witnesses, inst.rows):
        assert row == sum(1 << g for g, u in enumerate(inst.guards) if sees(w_terrain, u, w))


def test_infeasible_witness_reported(peak):
    with pytest.raises(InfeasibleError) as exc:
        build_instance(peak, [peak.vertex_point(0)], [point_at(peak, 2)])
    assert exc.value.witness.x == 2


def test_greedy_examples(peak):
    sol = solve_greedy(terrain_instance(peak))
    assert sol.chosen == (1,)
    twins = SetCoverInstance.from_sets(3, [[1, 2], [1, 2]])
    assert solve_greedy(twins).chosen == (1,)
    assert solve_greedy(SetCoverInstance(4, ())).cardinality == 0


def test_local_search_fixes_greedy_trap():
    greedy = solve_greedy(GREEDY_TRAP)
    assert greedy.cardinality == 3
    for g in greedy.chosen:
        assert not GREEDY_TRAP.is_cover([c for c in greedy.chosen if c != g])
    assert brute_force_min_cover(GREEDY_TRAP)[0] == 2
    ls = solve_local_search(GREEDY_TRAP, b=2)
    assert ls.chosen == (3, 4)
    # b=1 only drops redundant guards, and there are none
    assert solve_local_search(GREEDY_TRAP, b=1).cardinality == 3


def test_local_search_keeps_optimal_seed():
    seed = solve_exact(GREEDY_TRAP)
    assert solve_local_search(GREEDY_TRAP, b=2, seed_solution=seed).chosen == seed.chosen


def test_local_search_b1_removes_redundant():
    inst = SetCoverInstance.from_sets(3, [[0, 1], [1, 2]])
    from tgp.setcover import CoverSolution

    seed = CoverSolution((0, 1, 2), "greedy")
    assert solve_local_search(inst, b=1, seed_solution=seed).chosen == (1,)


def test_exact_examples(peak, w_terrain):
    assert solve_exact(terrain_instance(peak)).cardinality == 1
    sol = solve_exact(terrain_instance(w_terrain))
    assert sol.cardinality == 1 and sol.optimal and sol.lower_bound == 1
    assert solve_exact(SetCoverInstance(3, ())).cardinality == 0


def test_exact_against_brute_force():
    rng = random.Random(1)
    for _ in range(400):
        inst = random_instance(rng)
        k, _ = brute_force_min_cover(inst)
        for reduce in (True, False):
            sol = solve_exact(inst, reduce=reduce)
            assert sol.optimal and sol.cardinality == k and inst.is_cover(sol.chosen)
        assert solve_greedy(inst).cardinality >= solve_local_search(inst).cardinality >= k


def test_exact_deterministic_across_threads():
    rng = random.Random(2)
    for _ in range(100):
        inst = random_instance(rng, n_guards=rng.randint(5, 20), n_rows=rng.randint(5, 30))
        base = solve_exact(inst).chosen
        for threads in (2, 4):
            assert solve_exact(inst, threads=threads).chosen == base


def test_reductions():
    rows, forced, _ = reduce_instance([0b001, 0b011, 0b110], 3)
    assert 0 in forced
    assert packing_bound([0b001, 0b010, 0b011]) == 2


def test_exact_timeout_reports_gap():
    rng = random.Random(0)
    sets = [rng.sample(range(70), rng.randint(3, 8)) for _ in range(300)]
    inst = SetCoverInstance.from_sets(70, sets)
    sol = solve_exact(inst, time_limit=0.05)
    assert not sol.optimal
    assert inst.is_cover(sol.chosen)
    assert sol.lower_bound <= sol.cardinality and sol.stats["gap"] == sol.cardinality - sol.lower_bound


def test_verify_coverage_examples(single_edge, peak):
    assert verify_coverage(single_edge, [single_edge.vertex_point(0)]) == (True, None)
    ok, p = verify_coverage(peak, [peak.vertex_point(0)])
    assert not ok and 1 < p.x <= 2


def test_filter_does_not_change_optimum():
    rng = random.Random(5)
    for _ in range(40):
        t = generate_terrain(rng.randint(4, 10), rng.randrange(10**6), "random-walk")
        a = solve_exact(terrain_instance(t, True)).cardinality
        b = solve_exact(terrain_instance(t, False)).cardinality
        assert a == b


def test_solver_outputs_cover_terrain():
    rng = random.Random(6)
    for _ in range(30):
        t = generate_terrain(rng.randint(4, 12), rng.randrange(10**6), "random-walk")
        inst = terrain_instance(t)
        for sol in (solve_exact(inst), solve_greedy(inst), solve_local_search(inst)):
            assert verify_coverage(t, [inst.guards[g] for g in sol.chosen])[0]
