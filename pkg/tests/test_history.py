import dataclasses

import pytest
from hypothesis import given, settings, strategies as st

from cutcover.errors import NotUncrossableError
from cutcover.generate import gen_ecap
from cutcover.graphs import Multigraph, full_mask, mask_of
from cutcover.half import wgmv_half_solve
from cutcover.history import build_laminar_history, structure_audit
from cutcover.instances import matched_wheel_gap, quarter_dual_instance
from cutcover.planar import dualize
from cutcover.requirements import AugmentationFromForest
from cutcover.wgmv import wgmv_degree_audit, wgmv_solve


def single_demand():
    g = Multigraph(2, [(1, 0, 1, 4)])
    oracle = AugmentationFromForest(2, ((0, 1),))
    return g, oracle


def test_single_demand_tree_shape():
    g, oracle = single_demand()
    _, cert = wgmv_half_solve(g, oracle)
    hist = build_laminar_history(g, cert)
    assert hist.root == full_mask(2)
    assert sorted(hist.children[hist.root]) == [0b01, 0b10]
    assert hist.children.get(0b01, ()) == ()
    assert hist.labels == {0b01: 1, 0b10: 1}
    assert hist.edge_labels == {1: 1}
    assert hist.max_iteration == 1


def test_single_demand_alpha_claims():
    g, oracle = single_demand()
    _, cert = wgmv_half_solve(g, oracle)
    hist = build_laminar_history(g, cert)
    # each singleton claims the only boundary edge in iteration 1
    assert hist.alphas[(1, 0b01)] == (1,)
    assert hist.alphas[(1, 0b10)] == (1,)
    assert structure_audit(g, cert, hist).ok


def test_quarter_instance_nesting():
    g, oracle = quarter_dual_instance()
    _, cert = wgmv_solve(g, oracle)
    hist = build_laminar_history(g, cert)
    assert hist.root == full_mask(5)
    bcd = mask_of([1, 2, 3])
    assert hist.parent[mask_of([2])] == bcd
    assert hist.parent[mask_of([3])] == bcd
    assert hist.parent[bcd] == hist.root
    assert hist.parent[mask_of([4])] == hist.root
    assert structure_audit(g, cert, hist).ok


def test_history_rejects_non_laminar_sets():
    g, oracle = quarter_dual_instance()
    _, cert = wgmv_solve(g, oracle)
    some_mask, rec = next(iter(cert.sets.items()))
    overlap = mask_of([0, 1, 4])  # crosses {b,c,d} without nesting
    cert.sets[overlap] = dataclasses.replace(rec, mask=overlap)
    with pytest.raises(NotUncrossableError):
        build_laminar_history(g, cert)


def test_history_rejects_unsatisfied_set():
    g, oracle = quarter_dual_instance()
    _, cert = wgmv_solve(g, oracle)
    bcd = mask_of([1, 2, 3])
    cert.sets[bcd] = dataclasses.replace(
        cert.sets[bcd], satisfied_time=None, satisfied_iteration=None)
    with pytest.raises(ValueError):
        build_laminar_history(g, cert)


def test_wheel_degree_bound_is_attained():
    # ten moats, nine spokes: the active-degree bound 2k-2 holds with equality
    gap_inst, _ = matched_wheel_gap(9)
    g, oracle, _ = dualize(gap_inst)
    final, cert = wgmv_half_solve(g, oracle)
    assert g.cost_of(final) == 9
    report = wgmv_degree_audit(g, cert)
    assert report.ok
    sharp = [r for r in report.rows if r.boundary_sum == r.sharp_bound]
    assert any(r.active_count == 10 and r.boundary_sum == 18 for r in sharp)


def test_wheel_structure_audit():
    gap_inst, _ = matched_wheel_gap(9)
    g, oracle, _ = dualize(gap_inst)
    _, cert = wgmv_half_solve(g, oracle)
    hist = build_laminar_history(g, cert)
    assert hist.root == full_mask(10)
    for v in range(10):
        assert mask_of([v]) in hist.masks
    srep = structure_audit(g, cert, hist)
    assert srep.ok, srep.failures
    assert srep.partition_checked > 0


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=100_000))
def test_random_runs_pass_structure_audit(seed):
    g, oracle = gen_ecap(seed, max_vertices=9, max_cost=8)
    _, cert = wgmv_half_solve(g, oracle)
    hist = build_laminar_history(g, cert)
    srep = structure_audit(g, cert, hist)
    assert srep.ok, srep.failures
    assert wgmv_degree_audit(g, cert).ok


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=100_000))
def test_edge_labels_bounded_by_set_labels(seed):
    g, oracle = gen_ecap(seed, max_vertices=9, max_cost=8)
    _, cert = wgmv_half_solve(g, oracle)
    hist = build_laminar_history(g, cert)
    for eid, label in hist.edge_labels.items():
        e = g.edge_by_id[eid]
        for mask, slabel in hist.labels.items():
            if mask == hist.root:
                continue
            inside_u = bool(mask & mask_of([e.u]))
            inside_v = bool(mask & mask_of([e.v]))
            if inside_u != inside_v:
                # an edge crossing a set was admitted no earlier than the
                # iteration that satisfied the set
                assert label >= slabel
