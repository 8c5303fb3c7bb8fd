"""Versioned JSON file formats: instances, certificates, flows, reports.

One instance format serves all three problem kinds; the kind field plus
the optional demand-pair and rotation sections make files self
describing.  Rationals are always exact "numerator/denominator" strings,
never decimals.  Vertex sets appear as sorted vertex lists.  Rotation
lists use signed edge ids: positive when the vertex is the edge's u
endpoint, negative when it is v, so parallel edges stay unambiguous.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import CutCoverError
from .flow import FlowAssignment, FlowBundle
from .graphs import Multigraph, bits, mask_of
from .gw import GwResult, dual_value
from .planar import DEMAND, SUPPLY, SeymourInstance
from .requirements import AugmentationFromForest, ProperFromDemands, RequirementOracle
from .wgmv import MoatCertificate

FORMAT_VERSION = 1


class ParseError(CutCoverError):
    """The file is not a valid document of the expected format."""


def _dump(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _load(text: str) -> dict:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise ParseError("top level must be an object")
    if obj.get("format_version") != FORMAT_VERSION:
        raise ParseError(f"unsupported format_version {obj.get('format_version')!r}")
    return obj


def frac_str(x: Fraction) -> str:
    return str(Fraction(x))


def parse_frac(s: object) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str) or "." in s:
        raise ParseError(f"expected an exact rational string, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad rational {s!r}") from None


def _verts(mask: int) -> list[int]:
    return list(bits(mask))


def _mask(verts: object, n: int) -> int:
    if not isinstance(verts, list) or not all(
        isinstance(v, int) and 0 <= v < n for v in verts
    ):
        raise ParseError(f"bad vertex list {verts!r}")
    if len(set(verts)) != len(verts):
        raise ParseError(f"repeated vertex in {verts!r}")
    return mask_of(verts)


# ---------------------------------------------------------------- instances


@dataclass(frozen=True)
class LoadedInstance:
    kind: str  # proper | ecap | seymour
    graph: Multigraph  # cover graph (proper, ecap) or union graph (seymour)
    oracle: RequirementOracle | None
    seymour: SeymourInstance | None = None


def serialize_proper_instance(g: Multigraph, oracle: ProperFromDemands) -> str:
    _require_file_ids(g)
    return _dump({
        "format_version": FORMAT_VERSION,
        "kind": "proper",
        "vertex_count": g.n,
        "edges": [[e.id, e.u, e.v, e.cost, "plain"] for e in g.edges],
        "demands": [[u, v] for u, v in oracle.demands],
    })


def serialize_ecap_instance(g: Multigraph, oracle: AugmentationFromForest) -> str:
    _require_file_ids(g)
    next_id = max((e.id for e in g.edges), default=0) + 1
    rows = [[e.id, e.u, e.v, e.cost, "plain"] for e in g.edges]
    for i, (u, v) in enumerate(oracle.y_edges):
        rows.append([next_id + i, u, v, 0, "demand"])
    return _dump({
        "format_version": FORMAT_VERSION,
        "kind": "ecap",
        "vertex_count": g.n,
        "edges": rows,
    })


def serialize_seymour_instance(inst: SeymourInstance) -> str:
    _require_file_ids(inst.g)
    rotation = {}
    for v in range(inst.g.n):
        signed = []
        for eid in inst.rotation.get(v, ()):
            e = inst.g.edge_by_id[eid]
            signed.append(eid if e.u == v else -eid)
        rotation[str(v)] = signed
    return _dump({
        "format_version": FORMAT_VERSION,
        "kind": "seymour",
        "vertex_count": inst.g.n,
        "edges": [[e.id, e.u, e.v, e.cost, inst.tags[e.id]] for e in inst.g.edges],
        "rotation": rotation,
    })


def _require_file_ids(g: Multigraph) -> None:
    for e in g.edges:
        if e.id < 1:
            raise ValueError("file formats need edge ids >= 1 (signed rotation lists)")


def _parse_edges(obj: dict, allowed_tags: set[str]):
    rows = obj.get("edges")
    if not isinstance(rows, list):
        raise ParseError("missing edge list")
    out = []
    for row in rows:
        if (not isinstance(row, list) or len(row) != 5
                or not all(isinstance(x, int) for x in row[:4])
                or row[4] not in allowed_tags):
            raise ParseError(f"bad edge row {row!r}")
        if row[0] < 1:
            raise ParseError(f"edge id must be >= 1 in files, got {row[0]}")
        out.append(tuple(row))
    return out


def parse_instance(text: str) -> LoadedInstance:
    obj = _load(text)
    kind = obj.get("kind")
    n = obj.get("vertex_count")
    if not isinstance(n, int):
        raise ParseError("missing vertex_count")
    try:
        if kind == "proper":
            rows = _parse_edges(obj, {"plain"})
            g = Multigraph(n, [(i, u, v, c) for i, u, v, c, _ in rows])
            demands = obj.get("demands")
            if not isinstance(demands, list) or not demands:
                raise ParseError("proper instances need a demand pair list")
            pairs = []
            for d in demands:
                if (not isinstance(d, list) or len(d) != 2
                        or not all(isinstance(x, int) and 0 <= x < n for x in d)
                        or d[0] == d[1]):
                    raise ParseError(f"bad demand pair {d!r}")
                pairs.append((d[0], d[1]))
            return LoadedInstance("proper", g, ProperFromDemands(n, tuple(pairs)))
        if kind == "ecap":
            rows = _parse_edges(obj, {"plain", "demand"})
            g = Multigraph(n, [(i, u, v, c) for i, u, v, c, t in rows if t == "plain"])
            y = tuple((u, v) for _, u, v, _, t in rows if t == "demand")
            if not y:
                raise ParseError("ecap instances need at least one demand edge")
            for i, u, v, c, t in rows:
                if t == "demand" and c != 0:
                    raise ParseError(f"demand edge {i} must have cost 0")
            return LoadedInstance("ecap", g, AugmentationFromForest(n, y))
        if kind == "seymour":
            rows = _parse_edges(obj, {SUPPLY, DEMAND})
            g = Multigraph(n, [(i, u, v, c) for i, u, v, c, _ in rows])
            tags = {i: t for i, _, _, _, t in rows}
            rot_obj = obj.get("rotation")
            if not isinstance(rot_obj, dict):
                raise ParseError("seymour instances need a rotation table")
            rotation: dict[int, tuple[int, ...]] = {}
            for key, lst in rot_obj.items():
                try:
                    v = int(key)
                except ValueError:
                    raise ParseError(f"bad rotation key {key!r}") from None
                if not isinstance(lst, list):
                    raise ParseError(f"bad rotation entry for vertex {v}")
                ids = []
                for signed in lst:
                    if not isinstance(signed, int) or signed == 0:
                        raise ParseError(f"bad signed edge id {signed!r}")
                    eid = abs(signed)
                    e = g.edge_by_id.get(eid)
                    if e is None:
                        raise ParseError(f"rotation names unknown edge {eid}")
                    want = e.u if signed > 0 else e.v
                    if want != v:
                        raise ParseError(
                            f"signed id {signed} at vertex {v} points elsewhere")
                    ids.append(eid)
                rotation[v] = tuple(ids)
            return LoadedInstance("seymour", g, None, SeymourInstance(g, tags, rotation))
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    raise ParseError(f"unknown instance kind {kind!r}")


def serialize_instance(loaded: LoadedInstance) -> str:
    if loaded.kind == "proper":
        return serialize_proper_instance(loaded.graph, loaded.oracle)
    if loaded.kind == "ecap":
        return serialize_ecap_instance(loaded.graph, loaded.oracle)
    if loaded.kind == "seymour":
        return serialize_seymour_instance(loaded.seymour)
    raise ValueError(f"unknown kind {loaded.kind!r}")


# -------------------------------------------------------------- certificates


@dataclass(frozen=True)
class CertificateDoc:
    algorithm: str
    vertex_count: int
    final_edges: tuple[int, ...]
    grown_edges: tuple[int, ...]
    duals: tuple[tuple[int, Fraction], ...]  # (vertex mask, value), sorted by mask
    reductions: tuple[tuple[Fraction, int, int], ...]  # (time, mask, edge id)
    cost: int
    dual_total: Fraction
    ratio: Fraction | None
    half_integral: bool

    def duals_dict(self) -> dict[int, Fraction]:
        return dict(self.duals)

    def reductions_dict(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {}
        for _, mask, eid in self.reductions:
            out.setdefault(mask, []).append(eid)
        return {m: tuple(v) for m, v in out.items()}


def doc_from_moat(cert: MoatCertificate) -> CertificateDoc:
    duals = tuple(sorted((m, y) for m, y in cert.duals.items() if y > 0))
    red = []
    for mask, eids in cert.reductions.items():
        t = cert.sets[mask].processed_time
        for eid in eids:
            red.append((t, mask, eid))
    red.sort(key=lambda r: (r[0], r[1], r[2]))
    cost = sum(cert.original_costs[e] for e in cert.final_edges)
    total = sum((y for _, y in duals), Fraction(0))
    ratio = None if total == 0 else Fraction(cost) / total
    half = all(y.denominator in (1, 2) for _, y in duals)
    return CertificateDoc(
        algorithm=cert.algorithm,
        vertex_count=cert.n,
        final_edges=tuple(sorted(cert.final_edges)),
        grown_edges=tuple(cert.grown_edges),
        duals=duals,
        reductions=tuple(red),
        cost=cost,
        dual_total=total,
        ratio=ratio,
        half_integral=half,
    )


def doc_from_gw(
    g: Multigraph, oracle: RequirementOracle, final: tuple[int, ...], result: GwResult
) -> CertificateDoc:
    duals = tuple(sorted((m, y) for m, y in result.duals.items() if y > 0))
    cost = g.cost_of(final)
    total = dual_value(oracle, result.duals)
    ratio = None if total == 0 else Fraction(cost) / total
    half = all(y.denominator in (1, 2) for _, y in duals)
    return CertificateDoc(
        algorithm="gw",
        vertex_count=g.n,
        final_edges=tuple(sorted(final)),
        grown_edges=tuple(result.picked),
        duals=duals,
        reductions=(),
        cost=cost,
        dual_total=total,
        ratio=ratio,
        half_integral=half,
    )


def serialize_certificate(doc: CertificateDoc) -> str:
    return _dump({
        "format_version": FORMAT_VERSION,
        "algorithm": doc.algorithm,
        "vertex_count": doc.vertex_count,
        "final_edges": list(doc.final_edges),
        "grown_edges": list(doc.grown_edges),
        "duals": [[_verts(m), frac_str(y)] for m, y in doc.duals],
        "reductions": [[frac_str(t), _verts(m), e] for t, m, e in doc.reductions],
        "cost": doc.cost,
        "dual_value": frac_str(doc.dual_total),
        "ratio": None if doc.ratio is None else frac_str(doc.ratio),
        "half_integral": doc.half_integral,
    })


def parse_certificate(text: str) -> CertificateDoc:
    obj = _load(text)
    algorithm = obj.get("algorithm")
    if algorithm not in ("gw", "wgmv", "wgmv-half"):
        raise ParseError(f"unknown algorithm {algorithm!r}")
    n = obj.get("vertex_count")
    if not isinstance(n, int) or n < 1:
        raise ParseError("missing vertex_count")

    def _ids(key: str) -> tuple[int, ...]:
        val = obj.get(key)
        if not isinstance(val, list) or not all(isinstance(x, int) for x in val):
            raise ParseError(f"bad {key}")
        return tuple(val)

    duals_raw = obj.get("duals")
    if not isinstance(duals_raw, list):
        raise ParseError("bad duals")
    duals = []
    for row in duals_raw:
        if not isinstance(row, list) or len(row) != 2:
            raise ParseError(f"bad dual entry {row!r}")
        duals.append((_mask(row[0], n), parse_frac(row[1])))
    red_raw = obj.get("reductions")
    if not isinstance(red_raw, list):
        raise ParseError("bad reductions")
    reductions = []
    for row in red_raw:
        if not isinstance(row, list) or len(row) != 3 or not isinstance(row[2], int):
            raise ParseError(f"bad reduction entry {row!r}")
        reductions.append((parse_frac(row[0]), _mask(row[1], n), row[2]))
    cost = obj.get("cost")
    if not isinstance(cost, int):
        raise ParseError("bad cost")
    ratio_raw = obj.get("ratio")
    if not isinstance(obj.get("half_integral"), bool):
        raise ParseError("bad half_integral flag")
    return CertificateDoc(
        algorithm=algorithm,
        vertex_count=n,
        final_edges=_ids("final_edges"),
        grown_edges=_ids("grown_edges"),
        duals=tuple(duals),
        reductions=tuple(reductions),
        cost=cost,
        dual_total=parse_frac(obj.get("dual_value")),
        ratio=None if ratio_raw is None else parse_frac(ratio_raw),
        half_integral=obj["half_integral"],
    )


# --------------------------------------------------------------------- flows


def serialize_flow(bundle: FlowBundle) -> str:
    return _dump({
        "format_version": FORMAT_VERSION,
        "flows": [
            {
                "demand": f.demand,
                "edges": list(f.path_edges),
                "vertices": list(f.path_vertices),
                "value": frac_str(f.value),
            }
            for f in bundle.flows
        ],
        "total": frac_str(bundle.total),
    })


def parse_flow(text: str) -> FlowBundle:
    obj = _load(text)
    rows = obj.get("flows")
    if not isinstance(rows, list):
        raise ParseError("bad flow list")
    flows = []
    for row in rows:
        if not isinstance(row, dict):
            raise ParseError(f"bad flow entry {row!r}")
        demand = row.get("demand")
        edges = row.get("edges")
        verts = row.get("vertices")
        if (not isinstance(demand, int) or not isinstance(edges, list)
                or not isinstance(verts, list)
                or not all(isinstance(x, int) for x in edges)
                or not all(isinstance(x, int) for x in verts)):
            raise ParseError(f"bad flow entry {row!r}")
        flows.append(FlowAssignment(
            demand=demand,
            path_edges=tuple(edges),
            path_vertices=tuple(verts),
            value=parse_frac(row.get("value")),
        ))
    total = parse_frac(obj.get("total"))
    return FlowBundle(flows=tuple(flows), total=total)


# ----------------------------------------------------- multicut / gap report


def serialize_multicut(edges, capacity: int) -> str:
    return _dump({
        "format_version": FORMAT_VERSION,
        "edges": sorted(edges),
        "capacity": capacity,
    })


def parse_multicut(text: str) -> tuple[tuple[int, ...], int]:
    obj = _load(text)
    edges = obj.get("edges")
    capacity = obj.get("capacity")
    if (not isinstance(edges, list) or not all(isinstance(x, int) for x in edges)
            or not isinstance(capacity, int)):
        raise ParseError("bad multicut document")
    return tuple(edges), capacity


def serialize_gap(cut_capacity: int, flow_total: Fraction,
                  ratio: Fraction | None, half_integral: bool) -> str:
    return _dump({
        "format_version": FORMAT_VERSION,
        "cut_capacity": cut_capacity,
        "flow_total": frac_str(flow_total),
        "ratio": None if ratio is None else frac_str(ratio),
        "half_integral": half_integral,
    })


# -------------------------------------------------------------------- traces


def serialize_gw_trace(result: GwResult) -> str:
    events = []
    for ev in result.trace:
        name = type(ev).__name__
        if name == "GrowStep":
            events.append([frac_str(ev.start), "grow",
                           {"end": frac_str(ev.end),
                            "active": [_verts(m) for m in ev.active]}])
        elif name == "TightEvent":
            events.append([frac_str(ev.time), "edge-tight", {"edge": ev.edge_id}])
        elif name == "MergeEvent":
            events.append([frac_str(ev.time), "merge",
                           {"merged": _verts(ev.merged),
                            "parts": [_verts(m) for m in ev.parts]}])
        else:
            events.append([frac_str(ev.time), "deactivate",
                           {"component": _verts(ev.component)}])
    return _dump({
        "format_version": FORMAT_VERSION,
        "algorithm": "gw",
        "end_time": frac_str(result.end_time),
        "events": events,
    })


def serialize_moat_trace(cert: MoatCertificate) -> str:
    iterations = []
    for rec in cert.iterations:
        iterations.append({
            "index": rec.index,
            "t_start": frac_str(rec.t_start),
            "t_end": frac_str(rec.t_end),
            "gamma": frac_str(rec.gamma),
            "active": [_verts(m) for m in rec.active],
            "tight": list(rec.tight),
            "admitted": list(rec.admitted),
            "entered": [_verts(m) for m in rec.entered],
            "reductions": [[_verts(m), e] for m, e in rec.reductions],
        })
    sets = []
    for mask in sorted(cert.sets):
        rec = cert.sets[mask]
        sets.append({
            "set": _verts(mask),
            "entered_time": frac_str(rec.entered_time),
            "entered_iteration": rec.entered_iteration,
            "satisfied_time": None if rec.satisfied_time is None
            else frac_str(rec.satisfied_time),
            "satisfied_iteration": rec.satisfied_iteration,
            "reduced_edges": list(rec.reduced_edges),
        })
    return _dump({
        "format_version": FORMAT_VERSION,
        "algorithm": cert.algorithm,
        "end_time": frac_str(cert.end_time),
        "violated_method": cert.violated_method,
        "iterations": iterations,
        "sets": sets,
        "edge_events": {
            str(eid): [frac_str(t), it]
            for eid, (t, it) in sorted(cert.edge_events.items())
        },
    })
