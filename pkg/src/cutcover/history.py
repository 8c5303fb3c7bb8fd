"""Laminar structure of the sets a moat-growing run ever grew.

Every set that was ever minimally unsatisfied is kept, with the
iteration it got satisfied as its label; edges carry the iteration they
went tight.  The family plus the full vertex set forms a laminar tree.
For an iteration i, restricting to labels >= i and carving each set A
into its surviving children plus the leftover region X gives a small
quotient graph H of the final cover's edges inside A; the audits check
that these quotients are forests, that boundary edges are claimed by
exactly one first-crossing set, and that the tree/leaf criticality
condition never occurs with an empty claim.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotUncrossableError
from .graphs import Multigraph, bits, crosses, full_mask, is_laminar, is_subset
from .wgmv import MoatCertificate


@dataclass(frozen=True)
class HGraph:
    set_mask: int
    iteration: int
    x_region: int
    parts: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]
    is_forest: bool
    is_tree: bool
    x_degree: int


@dataclass(frozen=True)
class History:
    n: int
    root: int
    masks: tuple[int, ...]
    labels: dict[int, int]
    parent: dict[int, int]
    children: dict[int, tuple[int, ...]]
    edge_labels: dict[int, int]
    final_edges: tuple[int, ...]
    actives: dict[int, tuple[int, ...]]
    max_iteration: int
    h_graphs: dict[tuple[int, int], HGraph]
    alphas: dict[tuple[int, int], tuple[int, ...]]
    critical: dict[tuple[int, int], bool]


def _delta(g: Multigraph, edge_ids, mask: int) -> list[int]:
    out = []
    for eid in edge_ids:
        e = g.edge_by_id[eid]
        if crosses(mask, e.u, e.v):
            out.append(eid)
    return out


def build_laminar_history(g: Multigraph, cert: MoatCertificate) -> History:
    masks = sorted(cert.sets, key=lambda m: (m.bit_count(), m))
    ok, pair = is_laminar(masks)
    if not ok:
        raise NotUncrossableError(
            "sets grown by the run are not laminar", witness=pair
        )
    root = full_mask(cert.n)
    if root in cert.sets:
        raise NotUncrossableError("the full vertex set appeared as minimally unsatisfied")
    labels: dict[int, int] = {}
    for m, rec in cert.sets.items():
        if rec.satisfied_iteration is None:
            raise ValueError(f"set {m:#x} was never satisfied; certificate is incomplete")
        labels[m] = rec.satisfied_iteration

    parent: dict[int, int] = {}
    for m in masks:
        sups = [c for c in masks if c != m and is_subset(m, c)]
        parent[m] = min(sups, key=lambda c: (c.bit_count(), c)) if sups else root
    children: dict[int, list[int]] = {m: [] for m in masks}
    children[root] = []
    for m in masks:
        children[parent[m]].append(m)
    children_t = {k: tuple(sorted(v)) for k, v in children.items()}

    # an edge's label is the iteration it was admitted to F; a zero-cost
    # edge can be tight long before anything admits it
    edge_labels: dict[int, int] = {}
    for rec in cert.iterations:
        for eid in rec.admitted:
            edge_labels[eid] = rec.index
    actives = {rec.index: rec.active for rec in cert.iterations if rec.index >= 1}
    max_iteration = max((rec.index for rec in cert.iterations), default=0)
    final = cert.final_edges

    h_graphs: dict[tuple[int, int], HGraph] = {}
    alphas: dict[tuple[int, int], tuple[int, ...]] = {}
    critical: dict[tuple[int, int], bool] = {}

    for i in range(1, max_iteration + 1):
        si = [m for m in masks if labels[m] >= i]
        si_set = set(si)
        for a in si + [root]:
            kids = tuple(b for b in children_t[a] if b in si_set)
            x = a
            for b in kids:
                x &= ~b
            parts = (x,) + kids
            where: dict[int, int] = {}
            for idx, p in enumerate(parts):
                for v in bits(p):
                    where[v] = idx
            h_edges = []
            for eid in final:
                e = g.edge_by_id[eid]
                if not (is_subset(1 << e.u, a) and is_subset(1 << e.v, a)):
                    continue
                pu, pv = where[e.u], where[e.v]
                if pu != pv:
                    h_edges.append((eid, pu, pv))
            uf = list(range(len(parts)))

            def find(z: int) -> int:
                while uf[z] != z:
                    uf[z] = uf[uf[z]]
                    z = uf[z]
                return z

            acyclic = True
            for _, pu, pv in h_edges:
                ru, rv = find(pu), find(pv)
                if ru == rv:
                    acyclic = False
                else:
                    uf[ru] = rv
            connected = len({find(z) for z in range(len(parts))}) == 1
            x_degree = sum(1 for _, pu, pv in h_edges if 0 in (pu, pv))
            hg = HGraph(
                a, i, x, parts, tuple(h_edges),
                is_forest=acyclic,
                is_tree=acyclic and connected and len(parts) >= 2,
                x_degree=x_degree,
            )
            h_graphs[(i, a)] = hg
            if a != root:
                # first-crossing edges: boundary edges incident on the X region
                alpha = tuple(
                    eid for eid in _delta(g, final, a)
                    if (x >> g.edge_by_id[eid].u) & 1 or (x >> g.edge_by_id[eid].v) & 1
                )
                alphas[(i, a)] = alpha
                critical[(i, a)] = hg.is_tree and x_degree == 1

    return History(
        n=cert.n,
        root=root,
        masks=tuple(masks),
        labels=labels,
        parent=parent,
        children=children_t,
        edge_labels=edge_labels,
        final_edges=final,
        actives=actives,
        max_iteration=max_iteration,
        h_graphs=h_graphs,
        alphas=alphas,
        critical=critical,
    )


@dataclass(frozen=True)
class StructureReport:
    ok: bool
    failures: tuple[str, ...]
    h_checked: int
    alpha_checked: int
    partition_checked: int


def structure_audit(g: Multigraph, cert: MoatCertificate, history: History | None = None) -> StructureReport:
    """Audit the laminar-history invariants on a finished certificate.

    Checks, per iteration i >= 1 on the restricted family:
    * containment implies label order, and boundary edges of a set are no
      older than the set;
    * every quotient graph H is a forest and its edges have label >= i;
    * the two characterizations of the first-crossing sets agree (boundary
      minus descendants' boundaries vs incidence on the X region);
    * every boundary edge of a set is claimed by exactly one first-crossing
      set below it;
    * active sets claim their whole boundary;
    * critical sets claim at least one edge;
    * total claims are at most 2|active| - 2 + #critical (two or more
      active sets; the degenerate case is recorded, not asserted).
    """
    failures: list[str] = []
    try:
        h = history if history is not None else build_laminar_history(g, cert)
    except NotUncrossableError as exc:
        return StructureReport(False, (str(exc),), 0, 0, 0)

    for m in h.masks:
        p = h.parent[m]
        if p != h.root and h.labels[m] > h.labels[p]:
            failures.append(
                f"label order broken: child {m:#x} label {h.labels[m]} > parent {p:#x} label {h.labels[p]}"
            )
    for m in h.masks:
        for eid in _delta(g, h.final_edges, m):
            if h.edge_labels[eid] < h.labels[m]:
                failures.append(
                    f"edge {eid} (label {h.edge_labels[eid]}) crosses set {m:#x} "
                    f"of larger label {h.labels[m]}"
                )

    h_checked = 0
    for (i, a), hg in h.h_graphs.items():
        h_checked += 1
        if not hg.is_forest:
            failures.append(f"quotient at set {a:#x} iteration {i} contains a cycle")
        for eid, _, _ in hg.edges:
            if h.edge_labels[eid] < i:
                failures.append(
                    f"quotient at set {a:#x} iteration {i} uses edge {eid} of label {h.edge_labels[eid]}"
                )

    alpha_checked = 0
    for (i, a), alpha in h.alphas.items():
        alpha_checked += 1
        si = [m for m in h.masks if h.labels[m] >= i]
        boundary = set(_delta(g, h.final_edges, a))
        inner = set()
        for s in si:
            if s != a and is_subset(s, a):
                inner.update(_delta(g, h.final_edges, s))
        way1 = tuple(sorted(boundary - inner))
        if way1 != tuple(sorted(alpha)):
            failures.append(
                f"first-crossing mismatch at set {a:#x} iteration {i}: {way1} vs {tuple(sorted(alpha))}"
            )
        if h.critical[(i, a)] and not alpha:
            failures.append(f"critical set {a:#x} iteration {i} claims no edge")

    partition_checked = 0
    for i in range(1, h.max_iteration + 1):
        si = [m for m in h.masks if h.labels[m] >= i]
        for a in si:
            for eid in _delta(g, h.final_edges, a):
                partition_checked += 1
                owners = [
                    s for s in si
                    if is_subset(s, a) and eid in h.alphas[(i, s)]
                ]
                if len(owners) != 1:
                    failures.append(
                        f"edge {eid} across set {a:#x} iteration {i} claimed by "
                        f"{len(owners)} sets"
                    )
        for s in h.actives.get(i, ()):
            if tuple(sorted(h.alphas[(i, s)])) != tuple(sorted(_delta(g, h.final_edges, s))):
                failures.append(
                    f"active set {s:#x} iteration {i} does not claim its whole boundary"
                )
        act = h.actives.get(i, ())
        if len(act) >= 2:
            total = sum(len(h.alphas[(i, s)]) for s in si)
            crit = sum(1 for s in si if h.critical[(i, s)])
            if total > 2 * len(act) - 2 + crit:
                failures.append(
                    f"claim total {total} exceeds 2*{len(act)}-2+{crit} at iteration {i}"
                )

    return StructureReport(not failures, tuple(failures), h_checked, alpha_checked, partition_checked)
