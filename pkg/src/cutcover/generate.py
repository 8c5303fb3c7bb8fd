"""Seeded random instances: cover problems and embedded supply/demand graphs.

All randomness flows from the one seed handed in, so equal seeds give
byte-identical instances after serialization.
"""

from __future__ import annotations

import random

from .errors import ExtractionError, SolverAbortError
from .graphs import Multigraph
from .planar import DEMAND, SUPPLY, SeymourInstance
from .requirements import AugmentationFromForest, ProperFromDemands


def gen_proper(seed: int, max_vertices: int = 10, max_cost: int = 10):
    rng = random.Random(("proper", seed).__repr__())
    n = rng.randint(3, max_vertices)
    edges = []
    eid = 1
    for v in range(1, n):
        u = rng.randrange(v)
        edges.append((eid, u, v, rng.randint(0, max_cost)))
        eid += 1
    for _ in range(rng.randint(0, n)):
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v:
            continue
        edges.append((eid, min(u, v), max(u, v), rng.randint(0, max_cost)))
        eid += 1
    pairs = set()
    for _ in range(rng.randint(1, max(1, n // 2))):
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u != v:
            pairs.add((min(u, v), max(u, v)))
    if not pairs:
        pairs.add((0, 1))
    g = Multigraph(n, edges)
    return g, ProperFromDemands(n, tuple(sorted(pairs)))


def gen_ecap(seed: int, max_vertices: int = 10, max_cost: int = 10):
    rng = random.Random(("ecap", seed).__repr__())
    n = rng.randint(3, max_vertices)
    edges = []
    eid = 1
    for v in range(1, n):
        u = rng.randrange(v)
        edges.append((eid, u, v, rng.randint(0, max_cost)))
        eid += 1
    for _ in range(rng.randint(0, n)):
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v:
            continue
        edges.append((eid, min(u, v), max(u, v), rng.randint(0, max_cost)))
        eid += 1
    y: list[tuple[int, int]] = []
    for v in range(1, n):
        if rng.random() < 0.6:
            y.append((rng.randrange(v), v))
    if not y:
        y.append((0, rng.randrange(1, n)))
    if len(y) >= 1 and rng.random() < 0.15:
        y.append(rng.choice(y))
    g = Multigraph(n, edges)
    return g, AugmentationFromForest(n, tuple(y))


def _insert_parallel(rotation: dict[int, list[int]], g_edges, base_id: int, new_id: int):
    """Insert new_id as a planar parallel partner of base_id: just after it
    at the base edge's u end, just before it at the v end, closing a bigon."""
    u, v = None, None
    for eid, a, b, _, _ in g_edges:
        if eid == base_id:
            u, v = a, b
    pos_u = rotation[u].index(base_id)
    rotation[u].insert(pos_u, new_id)
    pos_v = rotation[v].index(base_id)
    rotation[v].insert(pos_v + 1, new_id)


def gen_seymour(seed: int, max_vertices: int = 12, max_cost: int = 10,
                ensure_pipeline: bool = True) -> SeymourInstance:
    """Random triangulated polygon with some diagonals deleted, random
    supply/demand tags, and occasional parallel demand partners.

    The polygon rim always survives, so the union graph is 2-connected:
    no edge is ever a bridge, faces stay simple cycles, and the double
    dual reproduces the instance exactly.

    With ensure_pipeline (the default), candidates are redrawn from the
    same seeded stream until the flow pipeline completes with positive
    flow.  A grown moat whose primal boundary pinches at a vertex makes
    flow extraction fail by design, and a draw whose demands are all
    supply-disconnected routes nothing; both are skipped.  Pass
    ensure_pipeline=False to get the first draw unconditionally, which
    is how such draws are found in the first place.
    """
    rng = random.Random(("seymour", seed).__repr__())
    for _ in range(200):
        inst = _seymour_candidate(rng, max_vertices, max_cost)
        if not ensure_pipeline:
            return inst
        try:
            # local import: flow pulls in the solver stack, generate stays light otherwise
            from .flow import gap_report

            report = gap_report(inst)
        except ExtractionError:
            continue
        if report.flow_total == 0:
            continue
        return inst
    raise SolverAbortError(
        f"no pipeline-clean draw for seed {seed} in 200 attempts")


def _seymour_candidate(rng: random.Random, max_vertices: int, max_cost: int) -> SeymourInstance:
    k = rng.randint(4, max(4, max_vertices))
    edges: list[tuple[int, int, int, int, str]] = []  # id, u, v, cost, tag
    eid = 1
    rim_ids = []
    for i in range(k):
        edges.append((eid, i, (i + 1) % k, 0, ""))
        rim_ids.append(eid)
        eid += 1
    diagonals: list[tuple[int, int]] = []

    def triangulate(a: int, b: int):
        if b - a < 2:
            return
        m = rng.randint(a + 1, b - 1)
        if m - a >= 2:
            diagonals.append((a, m))
        if b - m >= 2:
            diagonals.append((m, b))
        triangulate(a, m)
        triangulate(m, b)

    triangulate(0, k - 1)
    for u, v in diagonals:
        if rng.random() < 0.35:
            continue
        edges.append((eid, u, v, 0, ""))
        eid += 1

    # convex-position rotation: neighbors in circular index order around each vertex
    rotation: dict[int, list[int]] = {v: [] for v in range(k)}
    for v in range(k):
        incident = [(e[0], e[1] if e[2] == v else e[2]) for e in edges if v in (e[1], e[2])]
        incident.sort(key=lambda t: (t[1] - v) % k)
        rotation[v] = [i for i, _ in incident]

    tagged = []
    demand_count = 0
    for i, (e_id, u, v, _, _) in enumerate(edges):
        if rng.random() < 0.3:
            tagged.append((e_id, u, v, 0, DEMAND))
            demand_count += 1
        else:
            tagged.append((e_id, u, v, rng.randint(1, max_cost), SUPPLY))
    if demand_count == 0:
        e_id, u, v, _, _ = tagged[rng.randrange(len(tagged))]
        tagged = [(i2, a, b, 0, DEMAND) if i2 == e_id else (i2, a, b, c, t)
                  for i2, a, b, c, t in tagged]
    if all(t == DEMAND for *_, t in tagged):
        e_id, u, v, _, _ = tagged[0]
        tagged[0] = (e_id, u, v, rng.randint(1, max_cost), SUPPLY)

    if rng.random() < 0.4:
        supply_ids = [e[0] for e in tagged if e[4] == SUPPLY]
        if supply_ids:
            base = rng.choice(supply_ids)
            bu, bv = next((a, b) for i2, a, b, _, _ in tagged if i2 == base)
            tagged.append((eid, bu, bv, 0, DEMAND))
            _insert_parallel(rotation, tagged, base, eid)
            eid += 1

    g = Multigraph(k, [(i2, a, b, c) for i2, a, b, c, _ in tagged])
    tags = {i2: t for i2, _, _, _, t in tagged}
    return SeymourInstance(g, tags, {v: tuple(r) for v, r in rotation.items()})
