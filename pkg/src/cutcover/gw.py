"""Moat growing for proper requirement functions.

Moats are the components of the tight-edge subgraph; a moat is active
while its requirement value is 1.  All active moats grow in lockstep,
every edge that goes tight is picked, and a reverse-order deletion pass
prunes the pick afterwards.  The trace records enough to replay the run,
which the parity audit uses: at every merge, the vertices of the merged
set must agree on the fractional part of their accumulated dual mass,
and that shared value must be 0 or 1/2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InfeasibleInstanceError
from .graphs import Multigraph, bits, connected_components, crosses
from .requirements import (
    RequirementOracle,
    f_eval,
    minimal_violated_proper,
    require_proper,
)


@dataclass(frozen=True)
class GrowStep:
    start: Fraction
    end: Fraction
    active: tuple[int, ...]


@dataclass(frozen=True)
class TightEvent:
    time: Fraction
    edge_id: int


@dataclass(frozen=True)
class MergeEvent:
    time: Fraction
    merged: int
    parts: tuple[int, ...]


@dataclass(frozen=True)
class DeactivateEvent:
    time: Fraction
    component: int


@dataclass(frozen=True)
class GwResult:
    picked: tuple[int, ...]
    duals: dict[int, Fraction]
    loads: dict[int, Fraction]
    trace: tuple[object, ...]
    end_time: Fraction


def gw_grow(g: Multigraph, oracle: RequirementOracle) -> GwResult:
    require_proper(oracle)
    if g.n != oracle.n:
        raise ValueError("graph and oracle ground sets differ")
    t = Fraction(0)
    picked: list[int] = []
    in_pick: set[int] = set()
    loads: dict[int, Fraction] = {e.id: Fraction(0) for e in g.edges}
    duals: dict[int, Fraction] = {}
    trace: list[object] = []
    prev_comps: list[int] | None = None
    edges_by_id = sorted(g.edges, key=lambda e: e.id)

    def slack(e) -> Fraction:
        return e.cost - loads[e.id]

    while True:
        comps = connected_components(g, picked)
        if prev_comps is not None:
            for c in comps:
                parts = tuple(p for p in prev_comps if p & c)
                if len(parts) >= 2:
                    trace.append(MergeEvent(t, c, parts))
                    if f_eval(oracle, c) == 0 and any(f_eval(oracle, p) for p in parts):
                        trace.append(DeactivateEvent(t, c))
        prev_comps = comps

        newly_tight = [e.id for e in edges_by_id if e.id not in in_pick and slack(e) == 0]
        if newly_tight:
            for eid in newly_tight:
                trace.append(TightEvent(t, eid))
                picked.append(eid)
                in_pick.add(eid)
            continue

        active = [c for c in comps if f_eval(oracle, c) == 1]
        if not active:
            break

        best: Fraction | None = None
        for e in edges_by_id:
            if e.id in in_pick:
                continue
            rate = sum(1 for a in active if crosses(a, e.u, e.v))
            if rate == 0:
                continue
            step = slack(e) / rate
            if best is None or step < best:
                best = step
        if best is None:
            raise InfeasibleInstanceError(active[0])
        trace.append(GrowStep(t, t + best, tuple(active)))
        t += best
        for a in active:
            duals[a] = duals.get(a, Fraction(0)) + best
        for e in edges_by_id:
            if e.id in in_pick:
                continue
            rate = sum(1 for a in active if crosses(a, e.u, e.v))
            if rate:
                loads[e.id] += best * rate

    return GwResult(tuple(picked), duals, loads, tuple(trace), t)


def gw_reverse_delete(g: Multigraph, oracle: RequirementOracle, picked: tuple[int, ...]) -> tuple[int, ...]:
    """Drop picked edges in reverse pick order whenever feasibility survives."""
    keep = list(picked)
    if minimal_violated_proper(oracle, g, keep).sets:
        raise ValueError("input edge set is not feasible; nothing to prune")
    for eid in reversed(picked):
        trial = [x for x in keep if x != eid]
        if not minimal_violated_proper(oracle, g, trial).sets:
            keep = trial
    return tuple(keep)


def gw_solve(g: Multigraph, oracle: RequirementOracle) -> tuple[tuple[int, ...], GwResult]:
    res = gw_grow(g, oracle)
    return gw_reverse_delete(g, oracle, res.picked), res


def _frac(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True)
class ParityAuditReport:
    ok: bool
    merges_checked: int
    failures: tuple[tuple[Fraction, int, str], ...]


def gw_parity_audit(result: GwResult) -> ParityAuditReport:
    """Replay the trace; at each merge all merged vertices must share a
    fractional dual mass of 0 or 1/2, and final duals must be half-integral."""
    duals: dict[int, Fraction] = {}
    failures: list[tuple[Fraction, int, str]] = []
    merges = 0
    for ev in result.trace:
        if isinstance(ev, GrowStep):
            gamma = ev.end - ev.start
            for a in ev.active:
                duals[a] = duals.get(a, Fraction(0)) + gamma
        elif isinstance(ev, MergeEvent):
            merges += 1
            seen: set[Fraction] = set()
            for v in bits(ev.merged):
                mass = Fraction(0)
                for s, y in duals.items():
                    if (s >> v) & 1 and s & ~ev.merged == 0:
                        mass += y
                seen.add(_frac(mass))
            if len(seen) > 1:
                failures.append((ev.time, ev.merged, f"vertex parities differ: {sorted(seen)}"))
            elif seen and next(iter(seen)) not in (Fraction(0), Fraction(1, 2)):
                failures.append((ev.time, ev.merged, f"parity {next(iter(seen))} not in {{0, 1/2}}"))
    if duals != result.duals:
        failures.append((result.end_time, 0, "trace replay does not reproduce recorded duals"))
    for s, y in result.duals.items():
        if _frac(y) not in (Fraction(0), Fraction(1, 2)):
            failures.append((result.end_time, s, f"dual {y} is not a multiple of 1/2"))
    return ParityAuditReport(not failures, merges, tuple(failures))


def dual_value(oracle: RequirementOracle, duals: dict[int, Fraction]) -> Fraction:
    """Sum of f(S) * y_S, evaluating f rather than assuming it is 1."""
    return sum((y * f_eval(oracle, s) for s, y in duals.items()), Fraction(0))
