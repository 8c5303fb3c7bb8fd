"""Half-integral multicommodity flows from dual moats, and the gap report.

Each dual support set is a set of faces; its boundary in the dual graph
maps back to a primal edge set that must form one simple cycle carrying
exactly one demand edge.  Stripping the demand leaves a supply path for
that demand with flow value equal to the dual, and identical paths
merge by summing.  Verification recomputes everything against the
primal instance: endpoints, path validity, exact capacity loads, value
signs, half-integrality, and the total.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ExtractionError, SolverAbortError
from .half import wgmv_half_solve
from .planar import DEMAND, SUPPLY, DualCorrespondence, MulticutReport, SeymourInstance, dualize, multicut_from_cover
from .wgmv import MoatCertificate


@dataclass(frozen=True)
class FlowAssignment:
    demand: int
    path_edges: tuple[int, ...]
    path_vertices: tuple[int, ...]
    value: Fraction


@dataclass(frozen=True)
class FlowBundle:
    flows: tuple[FlowAssignment, ...]
    total: Fraction


def extract_flow(corr: DualCorrespondence, duals: dict[int, Fraction]) -> FlowBundle:
    """Turn dual values on face sets into per-demand flow paths.

    Fails loudly (with the offending set) when a support boundary is not
    a single simple cycle with exactly one demand edge.
    """
    inst = corr.primal
    merged: dict[tuple[int, tuple[int, ...], tuple[int, ...]], Fraction] = {}
    for mask in sorted(duals):
        y = duals[mask]
        if y == 0:
            continue
        cut = corr.dual.g.cut_edges(mask)
        degree: dict[int, list[tuple[int, int]]] = {}
        for eid in cut:
            e = inst.g.edge_by_id[eid]
            degree.setdefault(e.u, []).append((eid, e.v))
            degree.setdefault(e.v, []).append((eid, e.u))
        bad_vertex = next((v for v, inc in degree.items() if len(inc) != 2), None)
        if bad_vertex is not None:
            raise ExtractionError(
                f"support boundary is not a disjoint cycle union at vertex {bad_vertex}",
                subset=mask,
            )
        demand_ids = [eid for eid in cut if inst.tags[eid] == DEMAND]
        if len(demand_ids) != 1:
            raise ExtractionError(
                f"support boundary carries {len(demand_ids)} demand edges, expected 1",
                subset=mask,
            )
        # walk the cycle from the demand's endpoints; a second component
        # would never be reached, which the length check below catches
        did = demand_ids[0]
        d = inst.g.edge_by_id[did]
        vertices = [d.u]
        edges: list[int] = []
        prev_edge = did
        here = d.u
        while True:
            nxt = [(eid, w) for eid, w in degree[here] if eid != prev_edge]
            if len(nxt) != 1:
                raise ExtractionError("support boundary walk is ambiguous", subset=mask)
            eid, w = nxt[0]
            edges.append(eid)
            vertices.append(w)
            prev_edge = eid
            here = w
            if here == d.v:
                break
        if len(edges) + 1 != len(degree):
            raise ExtractionError(
                "support boundary is not a single cycle", subset=mask
            )
        if len(set(vertices)) != len(vertices):
            raise ExtractionError("support boundary cycle is not simple", subset=mask)
        key = (did, tuple(edges), tuple(vertices))
        merged[key] = merged.get(key, Fraction(0)) + y
    flows = tuple(
        FlowAssignment(did, pe, pv, val)
        for (did, pe, pv), val in sorted(merged.items())
    )
    total = sum((f.value for f in flows), Fraction(0))
    return FlowBundle(flows, total)


@dataclass(frozen=True)
class FlowReport:
    ok: bool
    total: Fraction
    half_integral: bool
    loads: dict[int, Fraction]
    failures: tuple[str, ...]


def verify_flow(instance: SeymourInstance, bundle: FlowBundle) -> FlowReport:
    """Independent check of a flow against the primal instance."""
    failures: list[str] = []
    loads: dict[int, Fraction] = {eid: Fraction(0) for eid in instance.supply_edges()}
    half = True
    total = Fraction(0)
    for f in bundle.flows:
        d = instance.g.edge_by_id.get(f.demand)
        if d is None or instance.tags.get(f.demand) != DEMAND:
            failures.append(f"flow names demand edge {f.demand}, which does not exist")
            continue
        if f.value < 0:
            failures.append(f"flow for demand {f.demand} has negative value {f.value}")
        if f.value - (f.value.numerator // f.value.denominator) not in (Fraction(0), Fraction(1, 2)):
            half = False
        if {f.path_vertices[0], f.path_vertices[-1]} != {d.u, d.v}:
            failures.append(
                f"flow for demand {f.demand} runs {f.path_vertices[0]}..{f.path_vertices[-1]}, "
                f"demand joins {d.u} and {d.v}"
            )
        if len(f.path_edges) + 1 != len(f.path_vertices):
            failures.append(f"flow for demand {f.demand} has mismatched path lengths")
            continue
        if len(set(f.path_vertices)) != len(f.path_vertices):
            failures.append(f"flow for demand {f.demand} repeats a vertex")
        okpath = True
        for i, eid in enumerate(f.path_edges):
            e = instance.g.edge_by_id.get(eid)
            if e is None or instance.tags.get(eid) != SUPPLY:
                failures.append(f"flow for demand {f.demand} uses non-supply edge {eid}")
                okpath = False
                break
            a, b = f.path_vertices[i], f.path_vertices[i + 1]
            if {e.u, e.v} != {a, b}:
                failures.append(
                    f"flow for demand {f.demand}: edge {eid} does not join {a} and {b}"
                )
                okpath = False
                break
            loads[eid] += f.value
        if okpath:
            total += f.value
    for eid, load in loads.items():
        cap = instance.g.edge_by_id[eid].cost
        if load > cap:
            failures.append(f"supply edge {eid} carries {load}, capacity {cap}")
    return FlowReport(not failures, total, half, loads, tuple(failures))


@dataclass(frozen=True)
class GapReport:
    cut_capacity: int
    flow_total: Fraction
    ratio: Fraction | None
    half_integral: bool
    multicut: MulticutReport
    flows: FlowBundle
    certificate: MoatCertificate


def gap_report(instance: SeymourInstance) -> GapReport:
    """Full pipeline: dualize, solve, pull back the multicut, extract and
    verify the flow, and report cut capacity against flow value."""
    ecap_g, oracle, corr = dualize(instance)
    _, cert = wgmv_half_solve(ecap_g, oracle)
    mc = multicut_from_cover(corr, cert.final_edges)
    if not mc.ok:
        raise SolverAbortError(
            f"pulled-back cover fails to cut demand {mc.failing_demand}",
            dump={"path": mc.surviving_path},
        )
    bundle = extract_flow(corr, cert.duals)
    fr = verify_flow(corr.original, bundle)
    if not fr.ok:
        raise SolverAbortError("extracted flow failed verification", dump=fr.failures)
    dual_total = sum(cert.duals.values(), Fraction(0))
    if fr.total != dual_total:
        raise SolverAbortError(
            f"flow total {fr.total} differs from dual total {dual_total}"
        )
    if fr.total > 0:
        if not (fr.total <= mc.capacity <= 2 * fr.total):
            raise SolverAbortError(
                f"cut capacity {mc.capacity} outside [{fr.total}, {2 * fr.total}]"
            )
        ratio = Fraction(mc.capacity) / fr.total
    else:
        if mc.capacity != 0:
            raise SolverAbortError("positive cut capacity with zero flow")
        ratio = None
    return GapReport(mc.capacity, fr.total, ratio, fr.half_integral, mc, bundle, cert)
