"""Randomized property sweeps over generated instances.

The harness runs every solver and audit over seeded random instances,
tallies per-property pass and failure counts, keeps shrunk
counterexamples for anything that fails, and can deliberately break the
solvers (fault injection) to demonstrate that the audits notice.
"""

from __future__ import annotations

import csv
import dataclasses
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

from .bruteforce import EDGE_CAP, GROUND_CAP, min_cut_cover_bruteforce
from .errors import CutCoverError
from .flow import gap_report
from .generate import gen_ecap, gen_proper, gen_seymour
from .graphs import Multigraph
from .gw import dual_value, gw_parity_audit, gw_solve
from .half import check_certificate, parity_uniformity_audit, wgmv_half_solve
from .history import build_laminar_history, structure_audit
from .instances import quarter_dual_instance
from .planar import double_dual_isomorphic, dualize, multicut_from_cover
from .requirements import (
    AugmentationFromForest,
    check_uncrossable,
    minimal_violated_2ecap,
    minimal_violated_bruteforce,
    minimal_violated_proper,
)
from .wgmv import violated_sets, wgmv_solve

FAULT_MODES = ("skip_reverse_delete", "skip_reductions")


@dataclass
class PropertyStat:
    name: str
    passes: int = 0
    failures: int = 0
    counterexamples: list[dict] = field(default_factory=list)


@dataclass
class InstanceRow:
    kind: str
    seed: int
    vertices: int
    edges: int
    cost: int | None
    dual: str | None
    ratio: str | None
    ok: bool


@dataclass
class HarnessReport:
    seed: int
    count: int
    fault: str | None
    properties: dict[str, PropertyStat]
    instances: list[InstanceRow]

    @property
    def ok(self) -> bool:
        return all(p.failures == 0 for p in self.properties.values())


class _Recorder:
    def __init__(self, report: HarnessReport):
        self.report = report
        self.instance_ok = True

    def check(self, name: str, ok: bool, context: dict | None = None) -> None:
        stat = self.report.properties.setdefault(name, PropertyStat(name))
        if ok:
            stat.passes += 1
        else:
            stat.failures += 1
            self.instance_ok = False
            if len(stat.counterexamples) < 5:
                stat.counterexamples.append(context or {})


def _describe_ecap(g: Multigraph, oracle: AugmentationFromForest) -> dict:
    return {
        "vertices": g.n,
        "edges": [(e.id, e.u, e.v, e.cost) for e in g.edges],
        "y_edges": list(oracle.y_edges),
    }


def _shrink_ecap(
    g: Multigraph,
    oracle: AugmentationFromForest,
    fails: Callable[[Multigraph, AugmentationFromForest], bool],
) -> dict:
    """Greedy shrink: drop supply or demand edges while the failure persists."""
    edges = list(g.edges)
    y = list(oracle.y_edges)
    changed = True
    while changed:
        changed = False
        for i in range(len(edges) - 1, -1, -1):
            trial = edges[:i] + edges[i + 1 :]
            try:
                cand_g = Multigraph(g.n, [(e.id, e.u, e.v, e.cost) for e in trial])
                if fails(cand_g, AugmentationFromForest(g.n, tuple(y))):
                    edges = trial
                    changed = True
            except CutCoverError:
                continue
            except ValueError:
                continue
        for i in range(len(y) - 1, -1, -1):
            trial_y = y[:i] + y[i + 1 :]
            if not trial_y:
                continue
            try:
                cand_g = Multigraph(g.n, [(e.id, e.u, e.v, e.cost) for e in edges])
                if fails(cand_g, AugmentationFromForest(g.n, tuple(trial_y))):
                    y = trial_y
                    changed = True
            except CutCoverError:
                continue
            except ValueError:
                continue
    shrunk = Multigraph(g.n, [(e.id, e.u, e.v, e.cost) for e in edges])
    return _describe_ecap(shrunk, AugmentationFromForest(g.n, tuple(y)))


def _within_bruteforce_caps(g: Multigraph) -> bool:
    return g.n <= GROUND_CAP and len(g.edges) <= EDGE_CAP


def _check_proper_instance(rec: _Recorder, seed: int, g, oracle) -> InstanceRow:
    ctx = {"seed": seed, "kind": "proper"}
    final, result = gw_solve(g, oracle)
    audit = gw_parity_audit(result)
    rec.check("gw_parity", audit.ok, {**ctx, "failures": audit.failures[:3]})
    verdict = check_certificate(g, oracle, final, result.duals)
    rec.check("gw_certificate", verdict.ok, {**ctx, "failures": verdict.failures[:3]})
    for eid in sorted(final):
        rest = frozenset(final) - {eid}
        if not minimal_violated_proper(oracle, g, rest).sets:
            rec.check("gw_minimal", False, {**ctx, "redundant_edge": eid})
            break
    else:
        rec.check("gw_minimal", True)
    if _within_bruteforce_caps(g):
        opt = min_cut_cover_bruteforce(g, oracle)
        cost = g.cost_of(final)
        dual = dual_value(oracle, result.duals)
        rec.check("gw_vs_opt", cost <= 2 * opt.cost and dual <= opt.cost,
                  {**ctx, "cost": cost, "opt": opt.cost, "dual": str(dual)})
        for f_edges in (frozenset(), frozenset(final)):
            a = minimal_violated_proper(oracle, g, f_edges)
            b = minimal_violated_bruteforce(oracle, g, f_edges)
            rec.check("proper_violated_match", set(a.sets) == set(b.sets),
                      {**ctx, "f": sorted(f_edges)})
    cost = g.cost_of(final)
    dual = dual_value(oracle, result.duals)
    ratio = None if dual == 0 else Fraction(cost) / dual
    return InstanceRow("proper", seed, g.n, len(g.edges), cost, str(dual),
                       None if ratio is None else str(ratio), rec.instance_ok)


def _check_ecap_instance(
    rec: _Recorder, seed: int, g, oracle, fault: str | None, sample_uncrossable: bool
) -> InstanceRow:
    ctx = {"seed": seed, "kind": "ecap"}

    plain_final, plain_cert = wgmv_solve(g, oracle)
    pv = check_certificate(g, oracle, plain_final, plain_cert.duals)
    plain_ok = pv.feasible and pv.dual_feasible and pv.tightness_ok and pv.ratio_ok
    rec.check("wgmv_feasible_dual", plain_ok, {**ctx, "failures": pv.failures[:3]})
    try:
        hist = build_laminar_history(g, plain_cert)
        srep = structure_audit(g, plain_cert, hist)
        rec.check("wgmv_history", srep.ok, {**ctx, "failures": srep.failures[:3]})
    except CutCoverError as exc:
        rec.check("wgmv_history", False, {**ctx, "error": str(exc)})

    half_final, half_cert = wgmv_half_solve(g, oracle)
    if fault == "skip_reductions":
        # pretend the plain run were the parity-guided one
        half_final, half_cert = plain_final, plain_cert
    hv = check_certificate(g, oracle, half_final, half_cert.duals, half_cert.reductions)
    rec.check("half_certificate", hv.ok, {**ctx, "failures": hv.failures[:3]})
    if not hv.ok and fault is None:
        def _fails(g2, o2):
            f2, c2 = wgmv_half_solve(g2, o2)
            return not check_certificate(g2, o2, f2, c2.duals, c2.reductions).ok

        stat = rec.report.properties["half_certificate"]
        if stat.counterexamples:
            stat.counterexamples[-1]["shrunk"] = _shrink_ecap(g, oracle, _fails)
    if fault != "skip_reductions":
        prep = parity_uniformity_audit(g, half_cert)
        rec.check("half_parity", prep.ok, {**ctx, "failures": prep.failures[:3]})
    try:
        srep = structure_audit(g, half_cert)
        rec.check("half_structure", srep.ok, {**ctx, "failures": srep.failures[:3]})
    except CutCoverError as exc:
        rec.check("half_structure", False, {**ctx, "error": str(exc)})

    minimal_target = half_cert.grown_edges if fault == "skip_reverse_delete" else half_final
    redundant = None
    for eid in sorted(minimal_target):
        rest = frozenset(minimal_target) - {eid}
        method = "bruteforce" if _within_bruteforce_caps(g) else "2ecap"
        if not violated_sets(oracle, g, rest, method=method).sets:
            redundant = eid
            break
    rec.check("half_minimal", redundant is None, {**ctx, "redundant_edge": redundant})

    if _within_bruteforce_caps(g):
        opt = min_cut_cover_bruteforce(g, oracle)
        cost = g.cost_of(half_final)
        dual = half_cert.dual_value(oracle)
        rec.check("half_vs_opt", cost <= 2 * opt.cost and dual <= opt.cost,
                  {**ctx, "cost": cost, "opt": opt.cost, "dual": str(dual)})
        for f_edges in (frozenset(), frozenset(half_final)):
            a = minimal_violated_2ecap(oracle, g, f_edges)
            b = minimal_violated_bruteforce(oracle, g, f_edges)
            rec.check("ecap_violated_match", set(a.sets) == set(b.sets),
                      {**ctx, "f": sorted(f_edges)})
    if sample_uncrossable and g.n <= 7:
        uv = check_uncrossable(oracle)
        rec.check("uncrossable_small", uv.ok, {**ctx, "reason": uv.reason})

    cost = g.cost_of(half_final)
    dual = half_cert.dual_value(oracle)
    ratio = None if dual == 0 else Fraction(cost) / dual
    return InstanceRow("ecap", seed, g.n, len(g.edges), cost, str(dual),
                       None if ratio is None else str(ratio), rec.instance_ok)


def _feasible_cover_samples(g, oracle, solver_cover, rng_seed: int):
    """Feasible cover edge sets to pull back through the duality: exhaustive
    when the supply side is small, a fixed sample otherwise."""
    import random

    ids = sorted(g.edge_ids())
    covers = []
    if len(ids) <= 10:
        for mask in range(1 << len(ids)):
            cand = frozenset(ids[i] for i in range(len(ids)) if mask >> i & 1)
            if not violated_sets(oracle, g, cand, method="2ecap").sets:
                covers.append(cand)
        return covers, True
    rng = random.Random(rng_seed)
    covers.append(frozenset(solver_cover))
    covers.append(frozenset(ids))
    for _ in range(5):
        cand = set(ids)
        order = ids[:]
        rng.shuffle(order)
        for eid in order:
            trial = cand - {eid}
            if not violated_sets(oracle, g, frozenset(trial), method="2ecap").sets:
                cand = trial
        covers.append(frozenset(cand))
    return covers, False


def _check_seymour_instance(rec: _Recorder, seed: int, instance) -> InstanceRow:
    ctx = {"seed": seed, "kind": "seymour"}
    try:
        rec.check("double_dual", double_dual_isomorphic(instance), ctx)
    except CutCoverError as exc:
        rec.check("double_dual", False, {**ctx, "error": str(exc)})
    cost = None
    flow_str = None
    ratio_str = None
    try:
        rep = gap_report(instance)
    except CutCoverError as exc:
        rec.check("pipeline", False, {**ctx, "error": str(exc)})
        return InstanceRow("seymour", seed, instance.g.n, len(instance.g.edges),
                           cost, flow_str, ratio_str, rec.instance_ok)
    rec.check("pipeline", True)
    rec.check("gap_bounds",
              rep.flow_total <= rep.cut_capacity <= 2 * rep.flow_total
              if rep.flow_total > 0 else rep.cut_capacity == 0,
              {**ctx, "capacity": rep.cut_capacity, "flow": str(rep.flow_total)})
    rec.check("flow_half_integral", rep.half_integral, ctx)

    ecap_g, oracle, corr = dualize(instance)
    covers, exhaustive = _feasible_cover_samples(
        ecap_g, oracle, rep.multicut.edges, rng_seed=seed)
    bad = None
    for cover in covers:
        mrep = multicut_from_cover(corr, cover)
        if not mrep.ok:
            bad = sorted(cover)
            break
    rec.check("covers_to_multicuts", bad is None,
              {**ctx, "cover": bad, "exhaustive": exhaustive})

    cost = rep.cut_capacity
    flow_str = str(rep.flow_total)
    ratio_str = None if rep.ratio is None else str(rep.ratio)
    return InstanceRow("seymour", seed, instance.g.n, len(instance.g.edges),
                       cost, flow_str, ratio_str, rec.instance_ok)


def property_harness(
    seed: int,
    count: int,
    max_vertices: int = 10,
    max_cost: int = 10,
    kinds: tuple[str, ...] = ("proper", "ecap", "seymour"),
    fault: str | None = None,
    include_pinned: bool = True,
) -> HarnessReport:
    if fault is not None and fault not in FAULT_MODES:
        raise ValueError(f"unknown fault mode {fault!r}")
    report = HarnessReport(seed=seed, count=count, fault=fault,
                           properties={}, instances=[])
    if "ecap" in kinds and include_pinned:
        rec = _Recorder(report)
        g, oracle = quarter_dual_instance()
        row = _check_ecap_instance(rec, -1, g, oracle, fault, sample_uncrossable=True)
        report.instances.append(row)
    for i in range(count):
        item_seed = seed + i
        if "proper" in kinds and fault is None:
            rec = _Recorder(report)
            g, oracle = gen_proper(item_seed, max_vertices, max_cost)
            report.instances.append(_check_proper_instance(rec, item_seed, g, oracle))
        if "ecap" in kinds:
            rec = _Recorder(report)
            g, oracle = gen_ecap(item_seed, max_vertices, max_cost)
            report.instances.append(_check_ecap_instance(
                rec, item_seed, g, oracle, fault, sample_uncrossable=i % 25 == 0))
        if "seymour" in kinds and fault is None:
            rec = _Recorder(report)
            inst = gen_seymour(item_seed, min(max_vertices + 2, 12), max_cost)
            report.instances.append(_check_seymour_instance(rec, item_seed, inst))
    return report


def search_quarter_duals(
    seed: int, tries: int, max_vertices: int = 8, max_cost: int = 6
) -> list[dict]:
    """Scan random augmentation instances for runs of the plain algorithm
    whose duals need denominators beyond two.  Returns one record per hit."""
    hits = []
    for i in range(tries):
        g, oracle = gen_ecap(seed + i, max_vertices, max_cost)
        try:
            _, cert = wgmv_solve(g, oracle)
        except CutCoverError:
            continue
        bad = {mask: y for mask, y in cert.duals.items() if y.denominator > 2}
        if bad:
            hits.append({
                "seed": seed + i,
                "duals": {mask: str(y) for mask, y in sorted(bad.items())},
                "instance": _describe_ecap(g, oracle),
            })
    return hits


def report_to_dict(report: HarnessReport) -> dict:
    return {
        "format_version": 1,
        "seed": report.seed,
        "count": report.count,
        "fault": report.fault,
        "ok": report.ok,
        "properties": {
            name: {
                "passes": p.passes,
                "failures": p.failures,
                "counterexamples": p.counterexamples,
            }
            for name, p in sorted(report.properties.items())
        },
        "instances": [dataclasses.asdict(row) for row in report.instances],
    }


def write_report(report: HarnessReport, out_dir: str | Path) -> list[Path]:
    """Write report.json, instances.csv, and the summary figures."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    json_path = out / "report.json"
    json_path.write_text(
        json.dumps(report_to_dict(report), indent=2, sort_keys=True) + "\n")
    written.append(json_path)

    csv_path = out / "instances.csv"
    with csv_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["kind", "seed", "vertices", "edges", "cost", "dual", "ratio", "ok"])
        for row in report.instances:
            writer.writerow([row.kind, row.seed, row.vertices, row.edges,
                             row.cost, row.dual, row.ratio, int(row.ok)])
    written.append(csv_path)

    written.extend(_write_figures(report, out))
    return written


def _write_figures(report: HarnessReport, out: Path) -> list[Path]:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    written = []
    ratios = [float(Fraction(r.ratio)) for r in report.instances if r.ratio is not None]
    fig, ax = plt.subplots(figsize=(6, 4))
    if ratios:
        ax.hist(ratios, bins=24, range=(0.9, 2.1), color="#4878cf", edgecolor="black")
    ax.axvline(2.0, color="red", linestyle="--", label="guarantee")
    ax.set_xlabel("cost / dual value")
    ax.set_ylabel("instances")
    ax.set_title(f"approximation ratios (seed {report.seed})")
    ax.legend()
    fig.tight_layout()
    p = out / "ratio_hist.png"
    fig.savefig(p)
    plt.close(fig)
    written.append(p)

    fig, ax = plt.subplots(figsize=(6, 4))
    xs, ys, colors = [], [], []
    palette = {"proper": "#4878cf", "ecap": "#6acc65", "seymour": "#d65f5f"}
    for row in report.instances:
        if row.cost is None or row.dual is None:
            continue
        xs.append(float(Fraction(row.dual)))
        ys.append(row.cost)
        colors.append(palette[row.kind])
    if xs:
        ax.scatter(xs, ys, c=colors, s=18, alpha=0.8)
        top = max(xs + [1.0])
        ax.plot([0, top], [0, 2 * top], color="red", linestyle="--", label="2 x dual")
        ax.plot([0, top], [0, top], color="gray", linestyle=":", label="dual")
    ax.set_xlabel("dual value")
    ax.set_ylabel("cover cost / cut capacity")
    ax.set_title("primal cost against dual lower bound")
    ax.legend()
    fig.tight_layout()
    p = out / "cost_vs_dual.png"
    fig.savefig(p)
    plt.close(fig)
    written.append(p)
    return written
