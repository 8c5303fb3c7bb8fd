import itertools

import pytest
from hypothesis import given, settings, strategies as st

from cutcover.bruteforce import (
    feasibility_bruteforce,
    labeled_isomorphic,
    min_cut_cover_bruteforce,
)
from cutcover.errors import CapExceededError, InfeasibleInstanceError
from cutcover.generate import gen_ecap, gen_proper
from cutcover.graphs import Multigraph
from cutcover.requirements import AugmentationFromForest, ProperFromDemands


def test_feasibility_empty_cover_reports_witness():
    oracle = AugmentationFromForest(2, ((0, 1),))
    g = Multigraph(2, [(1, 0, 1, 4)])
    ok, witness = feasibility_bruteforce(g, oracle, [])
    assert not ok
    assert witness in (0b01, 0b10)


def test_feasibility_full_edge_set():
    oracle = AugmentationFromForest(2, ((0, 1),))
    g = Multigraph(2, [(1, 0, 1, 4)])
    assert feasibility_bruteforce(g, oracle, [1]) == (True, None)


def test_min_cover_single_edge():
    oracle = AugmentationFromForest(2, ((0, 1),))
    g = Multigraph(2, [(1, 0, 1, 4)])
    result = min_cut_cover_bruteforce(g, oracle)
    assert result.cost == 4
    assert result.edge_ids == frozenset([1])


def test_min_cover_zero_function():
    oracle = AugmentationFromForest(2, ())
    g = Multigraph(2, [(1, 0, 1, 4)])
    result = min_cut_cover_bruteforce(g, oracle)
    assert result.cost == 0
    assert result.edge_ids == frozenset()


def test_min_cover_prefers_cheap_path():
    # separating 0 from 2 can use the cost-1 pair instead of the cost-9 edge
    oracle = ProperFromDemands(3, ((0, 2),))
    g = Multigraph(3, [(1, 0, 1, 1), (2, 1, 2, 1), (3, 0, 2, 9)])
    result = min_cut_cover_bruteforce(g, oracle)
    assert result.cost == 2
    assert result.edge_ids == frozenset([1, 2])


def test_min_cover_uncoverable_cut():
    oracle = ProperFromDemands(3, ((0, 2),))
    g = Multigraph(3, [(1, 0, 1, 1)])
    with pytest.raises(InfeasibleInstanceError):
        min_cut_cover_bruteforce(g, oracle)


def test_caps_enforced():
    big = Multigraph(17, [])
    oracle = AugmentationFromForest(17, ())
    with pytest.raises(CapExceededError):
        min_cut_cover_bruteforce(big, oracle)
    with pytest.raises(CapExceededError):
        feasibility_bruteforce(big, oracle, [])
    crowded = Multigraph(4, [(i, 0, 1, 1) for i in range(1, 24)])
    with pytest.raises(CapExceededError):
        min_cut_cover_bruteforce(crowded, AugmentationFromForest(4, ((0, 1),)))


def _exhaustive_optimum(g, oracle):
    best = None
    ids = g.edge_ids()
    for r in range(len(ids) + 1):
        for combo in itertools.combinations(ids, r):
            ok, _ = feasibility_bruteforce(g, oracle, combo)
            if ok:
                cost = g.cost_of(combo)
                if best is None or cost < best:
                    best = cost
    return best


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_branch_and_bound_matches_exhaustive(seed):
    g, oracle = gen_ecap(seed, max_vertices=6, max_cost=5)
    if len(g.edges) > 10:
        return
    result = min_cut_cover_bruteforce(g, oracle)
    assert result.cost == _exhaustive_optimum(g, oracle)
    ok, _ = feasibility_bruteforce(g, oracle, result.edge_ids)
    assert ok
    assert g.cost_of(result.edge_ids) == result.cost


@settings(max_examples=15, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_branch_and_bound_matches_exhaustive_proper(seed):
    g, oracle = gen_proper(seed, max_vertices=6, max_cost=5)
    if len(g.edges) > 10:
        return
    result = min_cut_cover_bruteforce(g, oracle)
    assert result.cost == _exhaustive_optimum(g, oracle)


def test_isomorphic_relabeling():
    a = Multigraph(4, [(1, 0, 1, 2), (2, 1, 2, 3), (3, 2, 3, 2), (4, 3, 0, 3)])
    # same 4-cycle with vertices rotated and fresh ids
    b = Multigraph(4, [(7, 1, 2, 2), (8, 2, 3, 3), (9, 3, 0, 2), (10, 0, 1, 3)])
    assert labeled_isomorphic(a, b)


def test_isomorphic_respects_costs():
    a = Multigraph(2, [(1, 0, 1, 2)])
    b = Multigraph(2, [(1, 0, 1, 3)])
    assert not labeled_isomorphic(a, b)
    assert labeled_isomorphic(a, b, labels_a={1: "x"}, labels_b={1: "x"})


def test_isomorphic_respects_multiplicity():
    a = Multigraph(3, [(1, 0, 1, 1), (2, 0, 1, 1), (3, 1, 2, 1)])
    assert labeled_isomorphic(a, a)
    assert labeled_isomorphic(a, Multigraph(3, [(5, 2, 1, 1), (6, 2, 1, 1), (7, 0, 2, 1)]))


def test_isomorphic_needs_backtracking():
    # both are 2-regular with uniform costs; only the cycle structure differs
    two_triangles = Multigraph(6, [
        (1, 0, 1, 1), (2, 1, 2, 1), (3, 2, 0, 1),
        (4, 3, 4, 1), (5, 4, 5, 1), (6, 5, 3, 1),
    ])
    hexagon = Multigraph(6, [(i + 1, i, (i + 1) % 6, 1) for i in range(6)])
    assert not labeled_isomorphic(two_triangles, hexagon)
    assert labeled_isomorphic(hexagon, Multigraph(6, [(9 - i, i, (i + 1) % 6, 1) for i in range(6)]))


def test_isomorphic_size_mismatch():
    a = Multigraph(2, [(1, 0, 1, 1)])
    assert not labeled_isomorphic(a, Multigraph(3, [(1, 0, 1, 1)]))
    assert not labeled_isomorphic(a, Multigraph(2, []))
