from fractions import Fraction

from hypothesis import given, settings, strategies as st

from cutcover.generate import gen_ecap
from cutcover.graphs import Multigraph, mask_of
from cutcover.half import (
    check_certificate,
    check_moat_certificate,
    parity_uniformity_audit,
    wgmv_half_solve,
)
from cutcover.instances import quarter_dual_instance
from cutcover.requirements import AugmentationFromForest

HALF = Fraction(1, 2)


def test_single_supply_edge_no_reductions():
    g = Multigraph(2, [(1, 0, 1, 5)])
    oracle = AugmentationFromForest(2, ((0, 1),))
    final, cert = wgmv_half_solve(g, oracle)
    assert final == (1,)
    assert cert.duals == {0b01: Fraction(5, 2), 0b10: Fraction(5, 2)}
    assert cert.reductions == {}
    assert parity_uniformity_audit(g, cert).ok


def test_quarter_instance_becomes_half_integral():
    g, oracle = quarter_dual_instance()
    final, cert = wgmv_half_solve(g, oracle)
    assert final == (1, 2)
    assert cert.duals == {
        mask_of([2]): HALF,
        mask_of([3]): HALF,
        mask_of([4]): HALF,
    }
    # when {b,c,d} enters, the crossing edge with mismatched parity gets
    # its cost cut by one half, so the b-e edge goes tight immediately
    assert cert.reductions == {mask_of([1, 2, 3]): (2,)}
    assert cert.end_time == HALF
    assert all(y.denominator in (1, 2) for y in cert.duals.values())


def test_quarter_instance_dual_feasible_against_original_costs():
    g, oracle = quarter_dual_instance()
    final, cert = wgmv_half_solve(g, oracle)
    verdict = check_certificate(g, oracle, final, cert.duals, cert.reductions)
    assert verdict.ok
    assert verdict.feasible
    assert verdict.laminar
    assert verdict.dual_feasible
    assert verdict.half_integral
    assert verdict.tightness_ok
    assert verdict.ratio_ok
    assert verdict.cost == 2
    assert verdict.dual_total == Fraction(3, 2)


def test_parity_audit_quarter_instance():
    g, oracle = quarter_dual_instance()
    _, cert = wgmv_half_solve(g, oracle)
    report = parity_uniformity_audit(g, cert)
    assert report.ok
    assert report.passes_checked >= 1
    assert report.edges_checked >= 1


def test_parity_audit_rejects_tampered_duals():
    g, oracle = quarter_dual_instance()
    _, cert = wgmv_half_solve(g, oracle)
    cert.duals[mask_of([2])] += Fraction(1, 4)
    report = parity_uniformity_audit(g, cert)
    assert not report.ok
    assert report.failures


def test_check_certificate_tampered_dual_value():
    g, oracle = quarter_dual_instance()
    final, cert = wgmv_half_solve(g, oracle)
    duals = dict(cert.duals)
    duals[mask_of([2])] += Fraction(1, 4)
    verdict = check_certificate(g, oracle, final, duals, cert.reductions)
    assert not verdict.ok
    assert not verdict.half_integral


def test_check_certificate_tampered_cover():
    g, oracle = quarter_dual_instance()
    final, cert = wgmv_half_solve(g, oracle)
    verdict = check_certificate(g, oracle, final[:-1], cert.duals, cert.reductions)
    assert not verdict.ok
    assert not verdict.feasible


def test_check_certificate_overloaded_edge():
    g = Multigraph(2, [(1, 0, 1, 3)])
    oracle = AugmentationFromForest(2, ((0, 1),))
    duals = {0b01: Fraction(2), 0b10: Fraction(2)}
    verdict = check_certificate(g, oracle, (1,), duals)
    assert not verdict.ok
    assert not verdict.dual_feasible


def test_check_certificate_non_laminar_support():
    g = Multigraph(3, [(1, 0, 1, 2), (2, 1, 2, 2)])
    oracle = AugmentationFromForest(3, ((0, 1), (1, 2)))
    duals = {mask_of([0, 1]): HALF, mask_of([1, 2]): HALF}
    verdict = check_certificate(g, oracle, (1, 2), duals)
    assert not verdict.ok
    assert not verdict.laminar


def test_check_certificate_slack_cover_edge():
    # edge 1 is bought but carries less dual load than its cost
    g = Multigraph(2, [(1, 0, 1, 4)])
    oracle = AugmentationFromForest(2, ((0, 1),))
    duals = {0b01: Fraction(1), 0b10: Fraction(1)}
    verdict = check_certificate(g, oracle, (1,), duals)
    assert not verdict.ok
    assert not verdict.tightness_ok


def test_check_certificate_ratio_clause():
    # feasible cover, tiny dual: the two-approximation claim fails
    g = Multigraph(2, [(1, 0, 1, 4), (2, 0, 1, 0)])
    oracle = AugmentationFromForest(2, ((0, 1),))
    verdict = check_certificate(g, oracle, (1, 2), {0b01: Fraction(1)})
    assert not verdict.ratio_ok


def test_check_moat_certificate_wraps_check():
    g, oracle = quarter_dual_instance()
    _, cert = wgmv_half_solve(g, oracle)
    assert check_moat_certificate(g, oracle, cert).ok


def test_check_moat_certificate_rejects_cost_mismatch():
    g, oracle = quarter_dual_instance()
    _, cert = wgmv_half_solve(g, oracle)
    other = Multigraph(5, [(1, 2, 3, 2), (2, 1, 4, 1)])
    verdict = check_moat_certificate(other, oracle, cert)
    assert not verdict.ok


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=100_000))
def test_random_runs_verify_and_stay_half_integral(seed):
    g, oracle = gen_ecap(seed, max_vertices=8, max_cost=8)
    final, cert = wgmv_half_solve(g, oracle)
    verdict = check_certificate(g, oracle, final, cert.duals, cert.reductions)
    assert verdict.ok, verdict.failures
    assert verdict.half_integral
    assert parity_uniformity_audit(g, cert).ok


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=100_000))
def test_reductions_only_lower_costs_of_real_edges(seed):
    g, oracle = gen_ecap(seed, max_vertices=8, max_cost=8)
    _, cert = wgmv_half_solve(g, oracle)
    for mask, eids in cert.reductions.items():
        assert mask in cert.sets
        for eid in eids:
            e = g.edge_by_id[eid]
            # reduced edges crossed the set when it entered
            assert mask_of([e.u]) & mask or mask_of([e.v]) & mask
            assert not (mask_of([e.u]) & mask and mask_of([e.v]) & mask)
