"""Exhaustive ground truth: optimal covers, feasibility, isomorphism.

Everything here is deliberately independent of the solvers.  Costs are
exact integers, subsets are enumerated, and the only cleverness allowed
is pruning that cannot change the answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import CapExceededError, InfeasibleInstanceError
from .graphs import Multigraph, crosses, full_mask
from .requirements import RequirementOracle, f_eval

EDGE_CAP = 22
GROUND_CAP = 16


def _violated_cutmasks(g: Multigraph, oracle: RequirementOracle) -> list[int]:
    """For each f=1 subset, the bitmask (over edge positions) of its cut."""
    univ = full_mask(g.n)
    pos = {e.id: i for i, e in enumerate(g.edges)}
    masks = []
    for s in range(univ + 1):
        if f_eval(oracle, s) != 1:
            continue
        cm = 0
        for e in g.edges:
            if crosses(s, e.u, e.v):
                cm |= 1 << pos[e.id]
        if cm == 0:
            raise InfeasibleInstanceError(s)
        masks.append(cm)
    return masks


def _minimal_masks(masks: Iterable[int]) -> list[int]:
    uniq = sorted(set(masks), key=lambda m: (m.bit_count(), m))
    keep: list[int] = []
    for m in uniq:
        if not any(k & ~m == 0 for k in keep):
            keep.append(m)
    return keep


def feasibility_bruteforce(
    g: Multigraph,
    oracle: RequirementOracle,
    f_edges: Iterable[int],
    cap: int = GROUND_CAP,
) -> tuple[bool, int | None]:
    """(True, None) if every f=1 set is crossed by f_edges, else (False, witness)."""
    if g.n > cap:
        raise CapExceededError("feasibility_bruteforce", g.n, cap)
    chosen = set(f_edges)
    univ = full_mask(g.n)
    for s in range(univ + 1):
        if f_eval(oracle, s) != 1:
            continue
        if not any(crosses(s, e.u, e.v) for e in g.edges if e.id in chosen):
            return False, s
    return True, None


@dataclass(frozen=True)
class BruteforceResult:
    cost: int
    edge_ids: frozenset[int]


def min_cut_cover_bruteforce(
    g: Multigraph,
    oracle: RequirementOracle,
    edge_cap: int = EDGE_CAP,
    ground_cap: int = GROUND_CAP,
) -> BruteforceResult:
    """Minimum-cost edge set crossing every f=1 subset, by branch and bound.

    Branches on the edges of an uncovered cut, pruning on cost; reduces the
    requirement to inclusion-minimal cutmasks first, which cannot change
    the optimum.
    """
    if g.n > ground_cap:
        raise CapExceededError("min_cut_cover_bruteforce", g.n, ground_cap)
    if len(g.edges) > edge_cap:
        raise CapExceededError("min_cut_cover_bruteforce", len(g.edges), edge_cap)
    targets = _minimal_masks(_violated_cutmasks(g, oracle))
    pos_edge = list(g.edges)
    # zero-cost edges are free; take them all up front
    base = 0
    for i, e in enumerate(pos_edge):
        if e.cost == 0:
            base |= 1 << i
    targets = [t for t in targets if t & base == 0]

    best_cost = sum(e.cost for e in pos_edge) + 1
    best_pick = 0

    def search(pick: int, cost: int, remaining: list[int]) -> None:
        nonlocal best_cost, best_pick
        if cost >= best_cost:
            return
        live = [t for t in remaining if t & pick == 0]
        if not live:
            best_cost, best_pick = cost, pick
            return
        # branch on the sparsest uncovered cut
        t = min(live, key=lambda m: m.bit_count())
        choices = sorted(
            (i for i in range(len(pos_edge)) if (t >> i) & 1),
            key=lambda i: pos_edge[i].cost,
        )
        for i in choices:
            search(pick | (1 << i), cost + pos_edge[i].cost, live)

    search(base, 0, targets)
    ids = frozenset(pos_edge[i].id for i in range(len(pos_edge)) if (best_pick >> i) & 1)
    return BruteforceResult(best_cost, ids)


def labeled_isomorphic(
    ga: Multigraph,
    gb: Multigraph,
    labels_a: dict[int, object] | None = None,
    labels_b: dict[int, object] | None = None,
) -> bool:
    """Multigraph isomorphism respecting per-edge labels, by backtracking.

    Labels default to edge costs.  Two graphs are isomorphic when some
    vertex bijection matches edges with equal labels, multiplicities
    included.
    """
    if ga.n != gb.n or len(ga.edges) != len(gb.edges):
        return False
    la = labels_a if labels_a is not None else {e.id: e.cost for e in ga.edges}
    lb = labels_b if labels_b is not None else {e.id: e.cost for e in gb.edges}

    def pair_counts(g: Multigraph, lab) -> dict[tuple[int, int], dict[object, int]]:
        out: dict[tuple[int, int], dict[object, int]] = {}
        for e in g.edges:
            key = (min(e.u, e.v), max(e.u, e.v))
            slot = out.setdefault(key, {})
            slot[lab[e.id]] = slot.get(lab[e.id], 0) + 1
        return out

    pa, pb = pair_counts(ga, la), pair_counts(gb, lb)

    def signature(g: Multigraph, lab, v: int):
        tags = sorted((str(lab[e.id]) for e in g.incident(v)))
        return (len(g.incident(v)), tuple(tags))

    sig_a = [signature(ga, la, v) for v in range(ga.n)]
    sig_b = [signature(gb, lb, v) for v in range(gb.n)]
    if sorted(sig_a) != sorted(sig_b):
        return False

    order = sorted(range(ga.n), key=lambda v: sig_a[v])
    image: list[int | None] = [None] * ga.n
    used = [False] * gb.n

    def consistent(v: int, w: int) -> bool:
        for u in range(ga.n):
            x = image[u]
            if x is None:
                continue
            key_a = (min(u, v), max(u, v))
            key_b = (min(x, w), max(x, w))
            if pa.get(key_a, {}) != pb.get(key_b, {}):
                return False
        return True

    def extend(k: int) -> bool:
        if k == len(order):
            return True
        v = order[k]
        for w in range(gb.n):
            if used[w] or sig_b[w] != sig_a[v]:
                continue
            if consistent(v, w):
                image[v] = w
                used[w] = True
                if extend(k + 1):
                    return True
                image[v] = None
                used[w] = False
        return False

    return extend(0)
