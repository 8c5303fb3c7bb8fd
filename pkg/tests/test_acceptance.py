"""End-to-end checks, one test per shipped claim.

Every bound here is exact; the only tolerances are the stated wall-clock
budgets.  Shared sweeps are computed once per module: 500 proper
instances, 500 augmentation instances, 200 embedded instances.
"""

import json
import random
import time
from dataclasses import dataclass
from fractions import Fraction

import pytest

from cutcover.bruteforce import EDGE_CAP, GROUND_CAP, min_cut_cover_bruteforce
from cutcover.cli import main
from cutcover.flow import GapReport, gap_report, verify_flow
from cutcover.generate import gen_ecap, gen_proper, gen_seymour
from cutcover.graphs import Multigraph, connected_components, crosses
from cutcover.gw import GwResult, dual_value, gw_grow, gw_reverse_delete
from cutcover.half import check_certificate, parity_uniformity_audit, wgmv_half_solve
from cutcover.harness import property_harness
from cutcover.history import structure_audit
from cutcover.instances import matched_wheel_gap, quarter_dual_instance
from cutcover.planar import (
    SeymourInstance,
    double_dual_isomorphic,
    dualize,
    multicut_from_cover,
)
from cutcover.requirements import AugmentationFromForest, RequirementOracle
from cutcover.serialize import serialize_certificate, serialize_ecap_instance, doc_from_moat
from cutcover.wgmv import violated_sets, wgmv_degree_audit, wgmv_solve

PROPER_COUNT = 500
ECAP_COUNT = 500
SEYMOUR_COUNT = 200


@dataclass(frozen=True)
class ProperRun:
    seed: int
    g: Multigraph
    oracle: RequirementOracle
    result: GwResult
    final: tuple[int, ...]


@dataclass(frozen=True)
class EcapRun:
    seed: int
    g: Multigraph
    oracle: AugmentationFromForest
    plain_final: tuple[int, ...]
    plain_cert: object
    half_final: tuple[int, ...]
    half_cert: object


@dataclass(frozen=True)
class SeymourRun:
    seed: int
    instance: SeymourInstance
    report: GapReport


@dataclass(frozen=True)
class Sweep:
    elapsed: float
    runs: tuple


@pytest.fixture(scope="module")
def proper_sweep() -> Sweep:
    start = time.perf_counter()
    runs = []
    for seed in range(PROPER_COUNT):
        g, oracle = gen_proper(seed)
        result = gw_grow(g, oracle)
        final = gw_reverse_delete(g, oracle, result.picked)
        runs.append(ProperRun(seed, g, oracle, result, final))
    return Sweep(time.perf_counter() - start, tuple(runs))


@pytest.fixture(scope="module")
def ecap_sweep() -> Sweep:
    start = time.perf_counter()
    runs = []
    for seed in range(ECAP_COUNT):
        g, oracle = gen_ecap(seed)
        plain_final, plain_cert = wgmv_solve(g, oracle)
        half_final, half_cert = wgmv_half_solve(g, oracle)
        runs.append(EcapRun(seed, g, oracle, plain_final, plain_cert,
                            half_final, half_cert))
    return Sweep(time.perf_counter() - start, tuple(runs))


@pytest.fixture(scope="module")
def seymour_sweep() -> Sweep:
    start = time.perf_counter()
    runs = []
    for seed in range(SEYMOUR_COUNT):
        instance = gen_seymour(seed, max_vertices=12)
        runs.append(SeymourRun(seed, instance, gap_report(instance)))
    return Sweep(time.perf_counter() - start, tuple(runs))


def load_on(g: Multigraph, duals: dict[int, Fraction], eid: int) -> Fraction:
    edge = g.edge_by_id[eid]
    return sum((y for mask, y in duals.items() if crosses(mask, edge.u, edge.v)),
               Fraction(0))


def test_criterion_01_gw_duals_half_integral_feasible_two_approx(proper_sweep):
    denominators = set()
    for run in proper_sweep.runs:
        for mask, y in run.result.duals.items():
            assert y.denominator in (1, 2), (run.seed, hex(mask), y)
            denominators.add(y.denominator)
        for eid in run.g.edge_ids():
            assert load_on(run.g, run.result.duals, eid) <= run.g.cost_of([eid]), \
                (run.seed, eid)
        total = dual_value(run.oracle, run.result.duals)
        assert run.g.cost_of(run.final) <= 2 * total, run.seed
    assert proper_sweep.elapsed < 30.0
    print(f"\n  {PROPER_COUNT} proper instances in {proper_sweep.elapsed:.2f}s; "
          f"dual denominators seen: {sorted(denominators)}")


def test_criterion_02_plain_solver_quarter_dual_regression():
    start = time.perf_counter()
    g, oracle = quarter_dual_instance()
    _, cert = wgmv_solve(g, oracle)
    elapsed = time.perf_counter() - start
    values = set(cert.duals.values())
    assert any(y.denominator == 4 for y in values)
    assert Fraction(1, 4) in values
    assert Fraction(3, 4) in values
    assert elapsed < 1.0
    print(f"\n  duals {sorted(values)} in {elapsed:.3f}s")


def test_criterion_03_half_solver_certificates(ecap_sweep):
    for run in ecap_sweep.runs:
        verdict = check_certificate(
            run.g, run.oracle, run.half_final, run.half_cert.duals,
            run.half_cert.reductions)
        assert verdict.half_integral, (run.seed, verdict.failures)
        assert verdict.dual_feasible, (run.seed, verdict.failures)
        assert verdict.laminar, (run.seed, verdict.failures)
        assert verdict.ratio_ok, (run.seed, verdict.failures)
        assert verdict.ok, (run.seed, verdict.failures)
    assert ecap_sweep.elapsed < 120.0
    print(f"\n  {ECAP_COUNT} augmentation instances in {ecap_sweep.elapsed:.2f}s; "
          "all four clauses hold")


def test_criterion_04_weak_duality_against_bruteforce(proper_sweep, ecap_sweep):
    checked = 0
    for run in proper_sweep.runs:
        if run.g.n > GROUND_CAP or len(run.g.edges) > EDGE_CAP:
            continue
        opt = min_cut_cover_bruteforce(run.g, run.oracle)
        assert run.g.cost_of(run.final) <= 2 * opt.cost, run.seed
        assert dual_value(run.oracle, run.result.duals) <= opt.cost, run.seed
        checked += 1
    for run in ecap_sweep.runs:
        if run.g.n > GROUND_CAP or len(run.g.edges) > EDGE_CAP:
            continue
        opt = min_cut_cover_bruteforce(run.g, run.oracle)
        assert run.g.cost_of(run.half_final) <= 2 * opt.cost, run.seed
        assert run.half_cert.dual_value(run.oracle) <= opt.cost, run.seed
        checked += 1
    assert checked == PROPER_COUNT + ECAP_COUNT
    print(f"\n  {checked} instances within brute-force caps, all bounds hold")


def test_criterion_05_structural_audits(ecap_sweep):
    h_total = alpha_total = 0
    for run in ecap_sweep.runs:
        for cert in (run.plain_cert, run.half_cert):
            srep = structure_audit(run.g, cert)
            assert srep.ok, (run.seed, srep.failures)
            h_total += srep.h_checked
            alpha_total += srep.alpha_checked
            drep = wgmv_degree_audit(run.g, cert)
            assert drep.ok, (run.seed, drep.rows)
    # the matched wheel attains the 2|A|-2 bound with equality
    gap_instance, _ = matched_wheel_gap(9)
    wheel_g, wheel_oracle, _ = dualize(gap_instance)
    _, wheel_cert = wgmv_half_solve(wheel_g, wheel_oracle)
    rows = wgmv_degree_audit(wheel_g, wheel_cert).rows
    assert any(r.sharp_applies and r.boundary_sum == r.sharp_bound for r in rows)
    print(f"\n  {h_total} forest checks, {alpha_total} partition checks, "
          "wheel attains the degree bound")


def test_criterion_06_parity_uniformity(ecap_sweep):
    passes = 0
    for run in ecap_sweep.runs:
        audit = parity_uniformity_audit(run.g, run.half_cert)
        assert audit.ok, (run.seed, audit.failures)
        passes += audit.passes_checked
    g, oracle = quarter_dual_instance()
    _, cert = wgmv_half_solve(g, oracle)
    assert parity_uniformity_audit(g, cert).ok
    print(f"\n  {passes} moat passes audited across {ECAP_COUNT} traces")


def test_criterion_07_pipeline_flow_equals_dual(seymour_sweep):
    for run in seymour_sweep.runs:
        rep = run.report
        assert rep.multicut.ok, run.seed
        flow_verdict = verify_flow(run.instance, rep.flows)
        assert flow_verdict.ok, (run.seed, flow_verdict.failures)
        assert flow_verdict.half_integral, run.seed
        dual_total = sum(rep.certificate.duals.values(), Fraction(0))
        assert rep.flow_total == dual_total, run.seed
        assert rep.flow_total <= rep.cut_capacity <= 2 * rep.flow_total, run.seed
    assert seymour_sweep.elapsed < 120.0
    print(f"\n  {SEYMOUR_COUNT} embedded instances in {seymour_sweep.elapsed:.2f}s; "
          "flow value always equals the dual total")


def test_criterion_08_covers_pull_back_and_double_dual(seymour_sweep):
    exhaustive = sampled = 0
    for run in seymour_sweep.runs:
        assert len(connected_components(run.instance.g, run.instance.g.edge_ids())) == 1
        assert double_dual_isomorphic(run.instance), run.seed
        ecap_g, oracle, corr = dualize(run.instance)
        ids = sorted(ecap_g.edge_ids())
        covers = []
        if len(ids) <= 10:
            exhaustive += 1
            for mask in range(1 << len(ids)):
                cand = frozenset(ids[i] for i in range(len(ids)) if mask >> i & 1)
                if not violated_sets(oracle, ecap_g, cand, method="2ecap").sets:
                    covers.append(cand)
        else:
            sampled += 1
            rng = random.Random(run.seed)
            covers.append(frozenset(ids))
            covers.append(frozenset(run.report.multicut.edges))
            for _ in range(5):
                cand = set(ids)
                order = ids[:]
                rng.shuffle(order)
                for eid in order:
                    trial = frozenset(cand - {eid})
                    if not violated_sets(oracle, ecap_g, trial, method="2ecap").sets:
                        cand = set(trial)
                covers.append(frozenset(cand))
        for cover in covers:
            assert multicut_from_cover(corr, cover).ok, (run.seed, sorted(cover))
    print(f"\n  {exhaustive} instances with every feasible cover enumerated, "
          f"{sampled} sampled; double dualization isomorphic on all")


def test_criterion_09_fault_injection_and_tampering(tmp_path, capsys):
    report = property_harness(seed=5, count=8, fault="skip_reductions")
    assert not report.ok
    stat = report.properties["half_certificate"]
    assert stat.failures >= 1
    assert any("not a multiple of 1/2" in msg
               for ce in stat.counterexamples for msg in ce.get("failures", ()))

    g, oracle = quarter_dual_instance()
    instance_path = tmp_path / "instance.json"
    instance_path.write_text(serialize_ecap_instance(g, oracle))
    _, cert = wgmv_half_solve(g, oracle)
    cert_path = tmp_path / "certificate.json"
    cert_path.write_text(serialize_certificate(doc_from_moat(cert)))
    tampers = {
        "algorithm": lambda d: d.update(algorithm="wgmv"),
        "vertex_count": lambda d: d.update(vertex_count=6),
        "final_edges": lambda d: d.update(final_edges=d["final_edges"][1:]),
        "grown_edges": lambda d: d.update(grown_edges=d["grown_edges"][1:]),
        "duals": lambda d: d["duals"][0].__setitem__(1, "3/4"),
        "reductions": lambda d: d.update(reductions=[]),
        "cost": lambda d: d.update(cost=d["cost"] + 1),
        "dual_value": lambda d: d.update(dual_value="9"),
        "ratio": lambda d: d.update(ratio="2"),
        "half_integral": lambda d: d.update(half_integral=False),
        "format_version": lambda d: d.update(format_version=9),
    }
    codes = {}
    for field, mutate in tampers.items():
        doc = json.loads(cert_path.read_text())
        mutate(doc)
        tampered = tmp_path / "tampered.json"
        tampered.write_text(json.dumps(doc))
        codes[field] = main(["verify", str(instance_path), str(tampered)])
    capsys.readouterr()
    assert all(code != 0 for code in codes.values()), codes
    assert main(["verify", str(instance_path), str(cert_path)]) == 0
    capsys.readouterr()
    print(f"\n  fault injection trips the audit on {stat.failures} instances; "
          f"{len(tampers)} field tampers all exit nonzero")
