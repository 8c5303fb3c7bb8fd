"""Embedded supply/demand instances and their planar duals.

An instance is a multigraph whose edges are tagged supply or demand,
together with a rotation system: the cyclic order of incident edges
around every vertex.  Faces are traced as dart orbits and checked
against the Euler relation per component; embeddings are supplied by
the caller, never computed.

Dualization sends faces to vertices and every non-bridge edge to the
edge between its two sides, keeping primal edge ids.  Supply duals form
the cover instance; demand duals form the crossing family Y of its
augmentation requirement.  Demand edges that are bridges connect pairs
no supply path joins, so they are trivially separated and removed up
front; supply bridges stay embedded but emit no dual edge.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmbeddingError
from .graphs import Multigraph, bridges, connected_components
from .requirements import AugmentationFromForest

SUPPLY = "supply"
DEMAND = "demand"

Dart = tuple[int, int]  # (edge id, orientation); 0 runs u -> v, 1 runs v -> u


@dataclass(frozen=True)
class SeymourInstance:
    g: Multigraph
    tags: dict[int, str]
    rotation: dict[int, tuple[int, ...]]

    def __post_init__(self):
        for e in self.g.edges:
            if self.tags.get(e.id) not in (SUPPLY, DEMAND):
                raise ValueError(f"edge {e.id} needs a supply or demand tag")
        for v in range(self.g.n):
            listed = list(self.rotation.get(v, ()))
            incident = sorted(e.id for e in self.g.incident(v))
            if sorted(listed) != incident:
                raise ValueError(
                    f"rotation at vertex {v} lists {sorted(listed)}, "
                    f"incident edges are {incident}"
                )

    def supply_edges(self) -> list[int]:
        return [e.id for e in self.g.edges if self.tags[e.id] == SUPPLY]

    def demand_edges(self) -> list[int]:
        return [e.id for e in self.g.edges if self.tags[e.id] == DEMAND]


def dart_head(g: Multigraph, d: Dart) -> int:
    e = g.edge_by_id[d[0]]
    return e.v if d[1] == 0 else e.u


def dart_leaving(g: Multigraph, eid: int, vertex: int) -> Dart:
    e = g.edge_by_id[eid]
    if e.u == vertex:
        return (eid, 0)
    if e.v == vertex:
        return (eid, 1)
    raise ValueError(f"edge {eid} is not incident to vertex {vertex}")


@dataclass(frozen=True)
class FaceStructure:
    faces: tuple[tuple[Dart, ...], ...]
    face_of_dart: dict[Dart, int]
    face_of_isolated: dict[int, int]
    components: tuple[int, ...]


def trace_faces(g: Multigraph, rotation: dict[int, tuple[int, ...]]) -> FaceStructure:
    """Face walks of the embedding, with the Euler relation enforced.

    The successor of a dart is the dart leaving its head along the next
    edge in the head's rotation.  Each isolated vertex contributes one
    synthetic empty face.  Raises EmbeddingError when any component
    fails vertices - edges + faces = 2.
    """
    position: dict[int, dict[int, int]] = {}
    for v in range(g.n):
        rot = rotation.get(v, ())
        position[v] = {eid: i for i, eid in enumerate(rot)}
        if len(position[v]) != len(rot):
            raise EmbeddingError(f"rotation at vertex {v} repeats an edge")

    def successor(d: Dart) -> Dart:
        w = dart_head(g, d)
        rot = rotation[w]
        pos = position[w][d[0]]
        return dart_leaving(g, rot[(pos + 1) % len(rot)], w)

    all_darts = [(e.id, o) for e in g.edges for o in (0, 1)]
    face_of: dict[Dart, int] = {}
    face_list: list[tuple[Dart, ...]] = []
    for d0 in all_darts:
        if d0 in face_of:
            continue
        walk = []
        d = d0
        while True:
            walk.append(d)
            face_of[d] = len(face_list)
            d = successor(d)
            if d == d0:
                break
        face_list.append(tuple(walk))

    face_of_isolated: dict[int, int] = {}
    for v in range(g.n):
        if not g.incident(v):
            face_of_isolated[v] = len(face_list)
            face_list.append(())

    comps = connected_components(g, g.edge_ids())
    for comp in comps:
        v_c = comp.bit_count()
        e_c = sum(1 for e in g.edges if (comp >> e.u) & 1)
        f_c = 0
        for walk in face_list:
            if walk:
                anchor = g.edge_by_id[walk[0][0]].u
                if (comp >> anchor) & 1:
                    f_c += 1
        f_c += sum(1 for v in face_of_isolated if (comp >> v) & 1)
        if v_c - e_c + f_c != 2:
            raise EmbeddingError(
                f"component {comp:#x} has V-E+F = {v_c}-{e_c}+{f_c} != 2; "
                "the rotation system is not a sphere embedding"
            )
    return FaceStructure(tuple(face_list), face_of, face_of_isolated, tuple(comps))


@dataclass(frozen=True)
class DualCorrespondence:
    original: SeymourInstance
    primal: SeymourInstance
    face_structure: FaceStructure
    dual: SeymourInstance
    removed_demands: tuple[int, ...]
    dropped_supply: tuple[int, ...]


def _without_edges(inst: SeymourInstance, drop: set[int]) -> SeymourInstance:
    g2 = Multigraph(
        inst.g.n,
        [(e.id, e.u, e.v, e.cost) for e in inst.g.edges if e.id not in drop],
    )
    tags2 = {eid: t for eid, t in inst.tags.items() if eid not in drop}
    rot2 = {
        v: tuple(eid for eid in inst.rotation.get(v, ()) if eid not in drop)
        for v in range(inst.g.n)
    }
    return SeymourInstance(g2, tags2, rot2)


def dualize(
    instance: SeymourInstance,
    remove_trivial_demands: bool = True,
) -> tuple[Multigraph, AugmentationFromForest, DualCorrespondence]:
    """Planar dual of an embedded supply/demand instance.

    Returns the cover multigraph (supply duals, costs kept, primal ids
    kept), the augmentation requirement built from the demand duals, and
    the correspondence needed to pull covers and duals back to the
    primal side.
    """
    work = instance
    removed: list[int] = []
    while True:
        bridge_ids = bridges(work.g, work.g.edge_ids())
        demand_bridges = sorted(
            eid for eid in bridge_ids if work.tags[eid] == DEMAND
        )
        if not demand_bridges:
            break
        if not remove_trivial_demands:
            raise EmbeddingError(
                f"demand edge {demand_bridges[0]} is a bridge: its endpoints "
                "share no supply path, so its dual would be a loop"
            )
        removed.extend(demand_bridges)
        work = _without_edges(work, set(demand_bridges))

    fs = trace_faces(work.g, work.rotation)
    bridge_ids = bridges(work.g, work.g.edge_ids())

    dropped: list[int] = []
    supply_dual: list[tuple[int, int, int, int]] = []
    demand_dual: list[tuple[int, int, int, int]] = []
    for e in work.g.edges:
        f1 = fs.face_of_dart[(e.id, 0)]
        f2 = fs.face_of_dart[(e.id, 1)]
        if (f1 == f2) != (e.id in bridge_ids):
            raise EmbeddingError(
                f"edge {e.id} sides disagree with bridge status; "
                "the rotation system is inconsistent"
            )
        if f1 == f2:
            if work.tags[e.id] == DEMAND:
                raise EmbeddingError(f"demand edge {e.id} is a bridge after preprocessing")
            dropped.append(e.id)
            continue
        if work.tags[e.id] == SUPPLY:
            supply_dual.append((e.id, f1, f2, e.cost))
        else:
            demand_dual.append((e.id, f1, f2, 0))

    n_faces = len(fs.faces)
    ecap_g = Multigraph(n_faces, supply_dual)
    oracle = AugmentationFromForest(
        n_faces, tuple((u, v) for _, u, v, _ in demand_dual)
    )

    dropped_set = set(dropped)
    dual_rotation: dict[int, tuple[int, ...]] = {}
    for idx, walk in enumerate(fs.faces):
        dual_rotation[idx] = tuple(eid for eid, _ in walk if eid not in dropped_set)
    dual_inst = SeymourInstance(
        Multigraph(n_faces, supply_dual + demand_dual),
        {eid: work.tags[eid] for eid, *_ in supply_dual + demand_dual},
        dual_rotation,
    )
    corr = DualCorrespondence(
        original=instance,
        primal=work,
        face_structure=fs,
        dual=dual_inst,
        removed_demands=tuple(removed),
        dropped_supply=tuple(dropped),
    )
    return ecap_g, oracle, corr


@dataclass(frozen=True)
class MulticutReport:
    edges: tuple[int, ...]
    capacity: int
    ok: bool
    failing_demand: int | None
    surviving_path: tuple[int, ...]


def multicut_from_cover(corr: DualCorrespondence, cover: tuple[int, ...]) -> MulticutReport:
    """Pull a dual cover back to primal supply edges and verify it cuts
    every demand; a failure reports the surviving supply path."""
    inst = corr.original
    cover_set = set(cover)
    for eid in cover_set:
        if inst.tags.get(eid) != SUPPLY:
            raise ValueError(f"cover edge {eid} is not a primal supply edge")
    live = [eid for eid in inst.supply_edges() if eid not in cover_set]
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(inst.g.n)}
    for eid in live:
        e = inst.g.edge_by_id[eid]
        adj[e.u].append((e.v, eid))
        adj[e.v].append((e.u, eid))
    capacity = sum(inst.g.edge_by_id[eid].cost for eid in cover_set)
    for did in sorted(inst.demand_edges()):
        d = inst.g.edge_by_id[did]
        prev: dict[int, tuple[int, int]] = {d.u: (-1, -1)}
        queue = [d.u]
        while queue:
            x = queue.pop(0)
            if x == d.v:
                break
            for y, eid in adj[x]:
                if y not in prev:
                    prev[y] = (x, eid)
                    queue.append(y)
        if d.v in prev:
            path = []
            x = d.v
            while x != d.u:
                px, eid = prev[x]
                path.append(eid)
                x = px
            return MulticutReport(
                tuple(sorted(cover_set)), capacity, False, did, tuple(reversed(path))
            )
    return MulticutReport(tuple(sorted(cover_set)), capacity, True, None, ())


def double_dual_isomorphic(instance: SeymourInstance) -> bool:
    """Dualizing twice must reproduce the instance (up to relabeling).

    Compared against the preprocessed primal: demand bridges are removed
    and supply bridges drop out of the dual, so instances without
    bridges round-trip exactly.
    """
    from .bruteforce import labeled_isomorphic

    _, _, corr = dualize(instance)
    _, _, corr2 = dualize(corr.dual)
    reference = _without_edges(corr.primal, set(corr.dropped_supply))
    back = corr2.dual
    labels_a = {e.id: (reference.tags[e.id], e.cost) for e in reference.g.edges}
    labels_b = {e.id: (back.tags[e.id], e.cost) for e in back.g.edges}
    return labeled_isomorphic(reference.g, back.g, labels_a, labels_b)
