"""Pinned instances with known behaviour, used by tests and the CLI.

quarter_dual_instance: smallest known augmentation instance where the
plain minimal-violated-set algorithm emits duals with denominator four.
Hand trace: singleton moats for c, d, e grow to 1/2, the c-d link goes
tight and is admitted, then {b,c,d} and {e} grow another 1/4 until the
b-e link goes tight, leaving y = 1/2, 1/2, 3/4, 1/4.  The parity-guided
variant instead reduces the b-e cost by 1/2 when {b,c,d} enters, so that
edge goes tight at time 1/2 and every dual lands on 1/2.

matched_wheel_gap: embedded supply/demand instance whose pipeline ratio
of cut capacity to flow value is exactly 2n/(n+1) for n spokes.  All n+1
dual moats grow at once, every unit spoke goes tight at time 1/2 with
two moats paying into it, and the expensive rim keeps the union graph
2-connected without ever being bought.
"""

from __future__ import annotations

from .graphs import Multigraph
from .planar import DEMAND, SUPPLY, DualCorrespondence, SeymourInstance, dualize
from .requirements import AugmentationFromForest


def quarter_dual_instance() -> tuple[Multigraph, AugmentationFromForest]:
    # vertices a=0 b=1 c=2 d=3 e=4
    y = ((1, 2), (1, 3), (0, 1), (0, 4))
    g = Multigraph(5, [(1, 2, 3, 1), (2, 1, 4, 1)])
    return g, AugmentationFromForest(5, y)


def matched_wheel_dual(n: int = 9) -> SeymourInstance:
    """The embedded graph whose planar dual is the gap instance: hub 0,
    leaves 1..n, unit-cost spokes, one demand parallel to spoke 1, and
    the remaining demands paired off as partners of alternate rim edges.
    n must be odd so the demand edges form a perfect matching on hub
    plus leaves."""
    if n < 3 or n % 2 == 0:
        raise ValueError("need odd n >= 3")
    edges = []
    # demand ids 1..(n+1)//2: (hub,1) then (2,3),(4,5),...
    edges.append((1, 0, 1, 0, DEMAND))
    did = 2
    arc_of: dict[int, int] = {}
    for a in range(2, n, 2):
        edges.append((did, a, a + 1, 0, DEMAND))
        arc_of[a] = did
        did += 1
    spoke = {i: 10 + i for i in range(1, n + 1)}
    for i in range(1, n + 1):
        edges.append((spoke[i], 0, i, 1, SUPPLY))
    rim = {i: 10 + n + i for i in range(1, n + 1)}  # rim i joins leaf i and leaf i%n+1
    for i in range(1, n + 1):
        edges.append((rim[i], i, i % n + 1, 100, SUPPLY))

    rotation: dict[int, tuple[int, ...]] = {}
    rotation[0] = tuple([1] + [spoke[i] for i in range(1, n + 1)])
    for i in range(1, n + 1):
        prev_rim = rim[n] if i == 1 else rim[i - 1]
        order = [spoke[i]]
        if i == 1:
            order.append(1)  # partner demand right after the spoke
        if i in arc_of:
            order += [prev_rim, rim[i], arc_of[i]]
        elif i - 1 in arc_of:
            order += [arc_of[i - 1], prev_rim, rim[i]]
        else:
            order += [prev_rim, rim[i]]
        rotation[i] = tuple(order)

    g = Multigraph(n + 1, [(e, u, v, c) for e, u, v, c, _ in edges])
    tags = {e: t for e, u, v, c, t in edges}
    return SeymourInstance(g, tags, rotation)


def matched_wheel_gap(n: int = 9) -> tuple[SeymourInstance, DualCorrespondence]:
    """Primal gap instance: the planar dual of matched_wheel_dual(n).
    Running the pipeline on it grows the wheel duals back and yields
    flow value (n+1)/2 against a cut of capacity n."""
    wheel = matched_wheel_dual(n)
    _, _, corr = dualize(wheel)
    return corr.dual, corr
