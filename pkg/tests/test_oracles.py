import random
from fractions import Fraction

import pytest

from tgp.discretization import build_candidates
from tgp.geometry import point_at, validate_terrain
from tgp.io import generate_terrain, loads_terrain
from tgp.oracles import (
    CHECKS,
    AlreadyInU,
    BothSidesError,
    InstanceTooLarge,
    NotACover,
    brute_force_min_cover,
    classify_guard,
    dense_random_cover,
    lemma_checks,
    reposition_to_U,
    u_neighbors,
)
from tgp.setcover import InfeasibleError, SetCoverInstance, build_instance
from tgp.discretization import build_witnesses
from tgp.setcover import verify_coverage


def test_brute_force_peak(peak):
    U = build_candidates(peak)
    inst = build_instance(peak, U, build_witnesses(peak, U))
    assert brute_force_min_cover(inst) == (1, (1,))


def test_brute_force_edge_cases():
    assert brute_force_min_cover(SetCoverInstance(3, ())) == (0, ())
    with pytest.raises(InfeasibleError):
        SetCoverInstance.from_sets(2, [[]])
    with pytest.raises(InstanceTooLarge):
        brute_force_min_cover(SetCoverInstance.from_sets(26, [[0]]))


def test_brute_force_lexicographic():
    inst = SetCoverInstance.from_sets(4, [[1, 3], [2, 3], [1, 2]])
    assert brute_force_min_cover(inst) == (2, (1, 2))


def test_lone_guard_has_no_critical_edges(w_terrain):
    # the other guards (none) see nothing, so no edge is partially covered
    top = w_terrain.vertex_point(2)
    cls = classify_guard(w_terrain, [top], 0)
    assert cls.critical == () and not cls.is_left_guard and not cls.is_right_guard


def test_redundant_guard_has_no_critical_edges(w_terrain):
    C = [w_terrain.vertex_point(2), point_at(w_terrain, Fraction(1, 2))]
    cls = classify_guard(w_terrain, C, 1)
    assert cls.critical == ()
    assert verify_coverage(w_terrain, C[:1])[0]


def test_classify_needs_cover(peak):
    with pytest.raises(NotACover):
        classify_guard(peak, [peak.vertex_point(0)], 0)


def test_two_guards_share_bottom_edge(basin):
    # each mountain guard sees only part of the bottom edge 3, one from each side
    g_left = basin.vertex_point(0)
    g_right = point_at(basin, Fraction(22977, 1000))
    C = [g_left, g_right]
    assert verify_coverage(basin, C)[0]
    left, right = classify_guard(basin, C, 0), classify_guard(basin, C, 1)
    assert left.left_guard_of == (3,) and left.critical_edges_right == (3,)
    assert right.right_guard_of == (3,) and right.critical_edges_left == (3,)


def test_u_neighbors_examples():
    t = validate_terrain([(0, 0), (1, 1), (2, 0)])
    U = build_candidates(t)
    ul, ur = u_neighbors(t, U, point_at(t, Fraction(3, 2)))
    assert (ul.x, ur.x) == (1, 2)
    with pytest.raises(AlreadyInU):
        u_neighbors(t, U, t.vertex_point(1))
    ul, ur = u_neighbors(t, U, point_at(t, 1 - Fraction(1, 10**6)))
    assert (ul.x, ur.x) == (0, 1)


def test_reposition_examples(single_edge, w_terrain):
    U = build_candidates(w_terrain)
    C = [w_terrain.vertex_point(0), w_terrain.vertex_point(4)]
    assert reposition_to_U(w_terrain, U, C) == C
    U1 = build_candidates(single_edge)
    moved = reposition_to_U(single_edge, U1, [point_at(single_edge, 1)])
    assert moved[0] in U1 and verify_coverage(single_edge, moved)[0]


def test_reposition_random_covers():
    rng = random.Random(3)
    for _ in range(60):
        t = generate_terrain(rng.randint(4, 10), rng.randrange(10**6), "random-walk")
        U = build_candidates(t)
        C = dense_random_cover(t, rng)
        out = reposition_to_U(t, U, C)
        assert len(out) == len(C) and all(g in U for g in out)
        assert verify_coverage(t, out)[0]


def test_lemma_checks_examples(w_terrain):
    convex = generate_terrain(8, 1, "convex")
    assert lemma_checks(convex, 5).ok
    report = lemma_checks(w_terrain, 20, seed=2)
    assert report.ok and set(report.results) == set(CHECKS)


def test_lemma_checks_random():
    report = lemma_checks(None, 60, seed=9)
    assert report.ok, report.lines()
    assert report.results["shared-point"].cases > 0
    assert all(line.count("\t") == 3 for line in report.lines())


def test_both_sides_is_an_error_type():
    assert issubclass(BothSidesError, AssertionError)
