import pytest
from hypothesis import given, settings, strategies as st

from cutcover.errors import EmbeddingError
from cutcover.generate import gen_seymour
from cutcover.graphs import Multigraph
from cutcover.half import wgmv_half_solve
from cutcover.instances import matched_wheel_dual
from cutcover.planar import (
    DEMAND,
    SUPPLY,
    SeymourInstance,
    double_dual_isomorphic,
    dualize,
    multicut_from_cover,
    trace_faces,
)


def supply_triangle():
    g = Multigraph(3, [(1, 0, 1, 1), (2, 1, 2, 1), (3, 0, 2, 1)])
    rotation = {0: (1, 3), 1: (1, 2), 2: (2, 3)}
    return SeymourInstance(g, {1: SUPPLY, 2: SUPPLY, 3: SUPPLY}, rotation)


def parallel_pair(cost: int = 4):
    g = Multigraph(2, [(1, 0, 1, cost), (2, 0, 1, 0)])
    return SeymourInstance(g, {1: SUPPLY, 2: DEMAND}, {0: (1, 2), 1: (2, 1)})


def k4_graph():
    return Multigraph(4, [
        (1, 0, 1, 1), (2, 1, 2, 1), (3, 2, 0, 1),
        (4, 0, 3, 1), (5, 1, 3, 1), (6, 2, 3, 1),
    ])


K4_ROTATION = {0: (1, 4, 3), 1: (2, 5, 1), 2: (3, 6, 2), 3: (4, 5, 6)}


def test_triangle_has_two_faces():
    inst = supply_triangle()
    fs = trace_faces(inst.g, inst.rotation)
    assert len(fs.faces) == 2
    # each face walk visits every edge once
    for walk in fs.faces:
        assert sorted(eid for eid, _ in walk) == [1, 2, 3]


def test_single_edge_has_one_face():
    g = Multigraph(2, [(1, 0, 1, 1)])
    fs = trace_faces(g, {0: (1,), 1: (1,)})
    assert len(fs.faces) == 1
    assert len(fs.faces[0]) == 2  # both darts on the same walk


def test_k4_has_four_faces():
    fs = trace_faces(k4_graph(), K4_ROTATION)
    assert len(fs.faces) == 4
    assert all(len(walk) == 3 for walk in fs.faces)


def test_twisted_rotation_fails_euler():
    twisted = dict(K4_ROTATION)
    twisted[3] = (4, 6, 5)
    with pytest.raises(EmbeddingError):
        trace_faces(k4_graph(), twisted)


def test_repeated_rotation_edge_rejected():
    g = Multigraph(2, [(1, 0, 1, 1)])
    with pytest.raises(EmbeddingError):
        trace_faces(g, {0: (1, 1), 1: (1,)})


def test_isolated_vertices_get_faces():
    g = Multigraph(3, [(1, 0, 1, 1)])
    fs = trace_faces(g, {0: (1,), 1: (1,), 2: ()})
    # the isolated vertex contributes its own empty face walk
    assert len(fs.faces) == 2
    assert fs.faces[1] == ()
    assert fs.face_of_isolated == {2: 1}


def test_instance_validates_rotation_and_tags():
    g = Multigraph(2, [(1, 0, 1, 1)])
    with pytest.raises(ValueError):
        SeymourInstance(g, {1: SUPPLY}, {0: (1,)})  # vertex 1 missing its edge
    with pytest.raises(ValueError):
        SeymourInstance(g, {}, {0: (1,), 1: (1,)})  # untagged edge
    with pytest.raises(ValueError):
        SeymourInstance(g, {1: "weird"}, {0: (1,), 1: (1,)})


def test_dual_of_supply_triangle():
    eg, oracle, corr = dualize(supply_triangle())
    assert eg.n == 2
    assert sorted((e.id, e.cost) for e in eg.edges) == [(1, 1), (2, 1), (3, 1)]
    assert all({e.u, e.v} == {0, 1} for e in eg.edges)
    assert oracle.y_edges == ()
    assert corr.removed_demands == ()
    assert corr.dropped_supply == ()


def test_dual_keeps_primal_edge_ids_and_costs():
    eg, oracle, corr = dualize(parallel_pair(cost=7))
    assert eg.n == 2
    assert [(e.id, e.cost) for e in eg.edges] == [(1, 7)]
    assert oracle.y_edges == ((1, 0),)


def test_multicut_round_trip_parallel_pair():
    _, _, corr = dualize(parallel_pair())
    rep = multicut_from_cover(corr, (1,))
    assert rep.ok
    assert rep.edges == (1,)
    assert rep.capacity == 4
    assert rep.failing_demand is None


def test_empty_cover_fails_verification():
    _, _, corr = dualize(parallel_pair())
    rep = multicut_from_cover(corr, ())
    assert not rep.ok
    assert rep.failing_demand == 2
    assert rep.surviving_path == (1,)


def test_multicut_rejects_non_supply_cover_edge():
    _, _, corr = dualize(parallel_pair())
    with pytest.raises(ValueError):
        multicut_from_cover(corr, (2,))


def test_demand_bridges_removed_iteratively():
    # demands 2 and 3 hang off the supply edge as a path; both disappear,
    # then the lone supply edge is itself a bridge and gets no dual edge
    g = Multigraph(4, [(1, 0, 1, 2), (2, 1, 2, 0), (3, 2, 3, 0)])
    inst = SeymourInstance(
        g, {1: SUPPLY, 2: DEMAND, 3: DEMAND},
        {0: (1,), 1: (1, 2), 2: (2, 3), 3: (3,)})
    eg, oracle, corr = dualize(inst)
    assert corr.removed_demands == (2, 3)
    assert corr.dropped_supply == (1,)
    assert eg.edges == ()
    assert oracle.y_edges == ()


def test_demand_bridge_rejected_when_removal_disabled():
    g = Multigraph(3, [(1, 0, 1, 2), (2, 1, 2, 0)])
    inst = SeymourInstance(
        g, {1: SUPPLY, 2: DEMAND}, {0: (1,), 1: (1, 2), 2: (2,)})
    with pytest.raises(EmbeddingError):
        dualize(inst, remove_trivial_demands=False)


def glued_triangles():
    # two supply triangles joined by a supply bridge; the demand lives
    # inside the first triangle
    g = Multigraph(6, [
        (1, 0, 1, 3), (2, 1, 2, 3), (3, 2, 0, 3),
        (4, 3, 4, 5), (5, 4, 5, 5), (6, 5, 3, 5),
        (7, 2, 3, 9),
        (8, 0, 1, 0),
    ])
    tags = {i: SUPPLY for i in range(1, 8)}
    tags[8] = DEMAND
    rotation = {
        0: (1, 8, 3), 1: (1, 2, 8), 2: (2, 3, 7),
        3: (7, 4, 6), 4: (4, 5), 5: (5, 6),
    }
    return SeymourInstance(g, tags, rotation)


def test_supply_bridge_dropped_from_dual():
    eg, oracle, corr = dualize(glued_triangles())
    assert corr.dropped_supply == (7,)
    assert 7 not in {e.id for e in eg.edges}
    assert len(eg.edges) == 6
    assert oracle.y_edges == ((1, 2),)


def test_dropped_bridge_breaks_double_duality():
    # gluing both sides of the bridge onto one face loses the bridge, so
    # the double dual cannot reproduce the original here
    assert not double_dual_isomorphic(glued_triangles())


def test_double_dual_parallel_pair():
    assert double_dual_isomorphic(parallel_pair())


def test_double_dual_wheel():
    assert double_dual_isomorphic(matched_wheel_dual(9))


def test_square_with_diagonal_demand():
    # supply square, demand across one diagonal; the dual requirement
    # needs a two-edge cover on each side of the demand
    g = Multigraph(4, [
        (1, 0, 1, 1), (2, 1, 2, 1), (3, 2, 3, 1), (4, 3, 0, 1),
        (5, 0, 2, 0),
    ])
    tags = {1: SUPPLY, 2: SUPPLY, 3: SUPPLY, 4: SUPPLY, 5: DEMAND}
    rotation = {0: (1, 5, 4), 1: (1, 2), 2: (2, 3, 5), 3: (3, 4)}
    inst = SeymourInstance(g, tags, rotation)
    eg, oracle, corr = dualize(inst)
    assert eg.n == 3
    assert len(eg.edges) == 4
    assert len(oracle.y_edges) == 1
    final, cert = wgmv_half_solve(eg, oracle)
    rep = multicut_from_cover(corr, final)
    assert rep.ok
    assert rep.capacity == 2
    assert double_dual_isomorphic(inst)


@settings(max_examples=15, deadline=None)
@given(st.integers(min_value=0, max_value=500))
def test_generated_instances_double_dualize(seed):
    inst = gen_seymour(seed, max_vertices=10)
    assert double_dual_isomorphic(inst)
