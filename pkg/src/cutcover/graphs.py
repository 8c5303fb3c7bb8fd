"""Multigraphs over small vertex sets, with vertex sets as integer bitmasks.

Vertices are 0..n-1 with n <= 64; a set of vertices is an int whose bit v
is set iff vertex v belongs.  Edges carry explicit integer ids so that
parallel edges stay distinguishable end to end.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

MAX_VERTICES = 64


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits(mask: int) -> Iterator[int]:
    """Yield the vertices of a mask in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def full_mask(n: int) -> int:
    return (1 << n) - 1


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def crosses(mask: int, u: int, v: int) -> bool:
    """True iff exactly one endpoint of (u, v) lies in mask."""
    return ((mask >> u) ^ (mask >> v)) & 1 == 1


@dataclass(frozen=True)
class Edge:
    id: int
    u: int
    v: int
    cost: int


class Multigraph:
    """Undirected multigraph; loop-free, nonnegative integer costs."""

    def __init__(self, vertex_count: int, edges: Iterable[tuple[int, int, int, int]]):
        if not 0 < vertex_count <= MAX_VERTICES:
            raise ValueError(f"vertex_count must be in 1..{MAX_VERTICES}")
        self.n = vertex_count
        built = []
        by_id: dict[int, Edge] = {}
        for eid, u, v, cost in edges:
            if u == v:
                raise ValueError(f"edge {eid}: self-loops are not allowed")
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ValueError(f"edge {eid}: endpoint out of range")
            if not (isinstance(cost, int) and cost >= 0):
                raise ValueError(f"edge {eid}: cost must be a nonnegative integer")
            if eid in by_id:
                raise ValueError(f"duplicate edge id {eid}")
            e = Edge(eid, u, v, cost)
            by_id[eid] = e
            built.append(e)
        self.edges: tuple[Edge, ...] = tuple(built)
        self.edge_by_id = by_id
        self._adj: list[list[Edge]] = [[] for _ in range(vertex_count)]
        for e in built:
            self._adj[e.u].append(e)
            self._adj[e.v].append(e)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Multigraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    __hash__ = None

    def incident(self, v: int) -> list[Edge]:
        return self._adj[v]

    def edge_ids(self) -> list[int]:
        return [e.id for e in self.edges]

    def cost_of(self, edge_ids: Iterable[int]) -> int:
        return sum(self.edge_by_id[i].cost for i in edge_ids)

    def cut_edges(self, subset: int) -> list[int]:
        """Ids of edges with exactly one endpoint in subset, ascending."""
        if subset & ~full_mask(self.n):
            raise ValueError("subset contains vertices outside the graph")
        return sorted(e.id for e in self.edges if crosses(subset, e.u, e.v))


def connected_components(g: Multigraph, edge_subset: Iterable[int]) -> list[int]:
    """Vertex masks of the components of (V, edge_subset), by smallest vertex."""
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for eid in edge_subset:
        e = g.edge_by_id[eid]
        ru, rv = find(e.u), find(e.v)
        if ru != rv:
            parent[ru] = rv
    comps: dict[int, int] = {}
    for v in range(g.n):
        r = find(v)
        comps[r] = comps.get(r, 0) | (1 << v)
    return sorted(comps.values(), key=lambda m: (m & -m).bit_length())


def component_of(g: Multigraph, edge_subset: Iterable[int], vertex: int) -> int:
    for comp in connected_components(g, edge_subset):
        if (comp >> vertex) & 1:
            return comp
    raise ValueError("vertex outside graph")


def is_laminar(family: Iterable[int]) -> tuple[bool, tuple[int, int] | None]:
    """Check pairwise nesting/disjointness; returns first violating pair if any."""
    sets = list(family)
    for i, a in enumerate(sets):
        for b in sets[i + 1:]:
            inter = a & b
            if inter and inter != a and inter != b:
                return False, (a, b)
    return True, None


def bridges(g: Multigraph, edge_subset: Iterable[int]) -> set[int]:
    """Edge ids in edge_subset whose removal disconnects their component.

    Parallel edges are handled by id: a pair of parallel edges is never
    a bridge.  Standard lowpoint search over the sub-multigraph.
    """
    sub = set(edge_subset)
    adj: list[list[Edge]] = [[] for _ in range(g.n)]
    for eid in sub:
        e = g.edge_by_id[eid]
        adj[e.u].append(e)
        adj[e.v].append(e)

    index = [0] * g.n
    low = [0] * g.n
    seen = [False] * g.n
    out: set[int] = set()
    counter = 1
    for root in range(g.n):
        if seen[root]:
            continue
        # iterative DFS: stack of (vertex, incoming edge id, iterator position)
        stack: list[tuple[int, int, int]] = [(root, -1, 0)]
        seen[root] = True
        index[root] = low[root] = counter
        counter += 1
        while stack:
            v, in_eid, pos = stack.pop()
            if pos < len(adj[v]):
                stack.append((v, in_eid, pos + 1))
                e = adj[v][pos]
                if e.id == in_eid:
                    continue
                w = e.v if e.u == v else e.u
                if seen[w]:
                    low[v] = min(low[v], index[w])
                else:
                    seen[w] = True
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append((w, e.id, 0))
            elif in_eid != -1:
                # retreat over the incoming edge
                e = g.edge_by_id[in_eid]
                parent = e.v if e.u == v else e.u
                low[parent] = min(low[parent], low[v])
                if low[v] > index[parent]:
                    out.add(in_eid)
    return out
