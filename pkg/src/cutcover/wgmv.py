"""Moat growing for uncrossable requirement functions.

The run alternates two phases.  With time frozen, tight edges are
admitted one at a time (ascending id, minimal violated sets recomputed
after every admission) until no tight edge crosses a current minimal
violated set; the parity-reducing variant then gives each set that just
became minimally unsatisfied a one-time pass that halves the cost of
crossing edges whose dual parity disagrees with the clock, and newly
tightened edges feed back into admission.  With the frozen phase stable,
all minimal violated sets grow their duals in lockstep until the next
edge goes tight.  A reverse-order deletion pass prunes the admitted set.

The certificate keeps every set that was ever minimally unsatisfied
(even transiently, with zero dual), entry and satisfaction iterations
for sets and tightening iterations for edges, per-iteration records, and
the full cost-reduction ledger.  The laminar-structure audits consume
exactly this.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import InfeasibleInstanceError, SolverAbortError
from .graphs import Multigraph, Edge, crosses, is_subset
from .requirements import (
    AugmentationFromForest,
    ProperFromDemands,
    RequirementOracle,
    ViolatedSetReport,
    minimal_violated_2ecap,
    minimal_violated_bruteforce,
    minimal_violated_proper,
)


def violated_sets(
    oracle: RequirementOracle,
    g: Multigraph,
    f_edges: Iterable[int],
    method: str,
) -> ViolatedSetReport:
    if method == "bruteforce":
        return minimal_violated_bruteforce(oracle, g, f_edges)
    if method == "proper":
        return minimal_violated_proper(oracle, g, f_edges)
    if method == "2ecap":
        return minimal_violated_2ecap(oracle, g, f_edges)
    raise ValueError(f"unknown violated-set method {method!r}")


def resolve_method(oracle: RequirementOracle, method: str) -> str:
    if method != "auto":
        return method
    if isinstance(oracle, AugmentationFromForest):
        return "2ecap"
    if isinstance(oracle, ProperFromDemands):
        return "proper"
    return "bruteforce"


@dataclass
class SetRecord:
    mask: int
    entered_time: Fraction
    entered_iteration: int
    order: int
    satisfied_time: Fraction | None = None
    satisfied_iteration: int | None = None
    processed_time: Fraction | None = None
    processed_iteration: int | None = None
    processed_order: int | None = None
    reduced_edges: tuple[int, ...] = ()


@dataclass(frozen=True)
class IterationRecord:
    index: int
    t_start: Fraction
    t_end: Fraction
    active: tuple[int, ...]
    gamma: Fraction
    tight: tuple[int, ...]
    admitted: tuple[int, ...]
    entered: tuple[int, ...]
    reductions: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class MoatCertificate:
    algorithm: str
    n: int
    final_edges: tuple[int, ...]
    grown_edges: tuple[int, ...]
    duals: dict[int, Fraction]
    reductions: dict[int, tuple[int, ...]]
    iterations: tuple[IterationRecord, ...]
    sets: dict[int, SetRecord]
    edge_events: dict[int, tuple[Fraction, int]]
    original_costs: dict[int, int]
    end_time: Fraction
    violated_method: str

    def dual_value(self, oracle: RequirementOracle) -> Fraction:
        from .requirements import f_eval

        return sum((y * f_eval(oracle, s) for s, y in self.duals.items()), Fraction(0))


def _frac(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


class _Engine:
    def __init__(self, g: Multigraph, oracle: RequirementOracle, method: str, reduce_costs: bool):
        if g.n != oracle.n:
            raise ValueError("graph and oracle ground sets differ")
        self.g = g
        self.oracle = oracle
        self.method = resolve_method(oracle, method)
        self.reduce_costs = reduce_costs
        self.t = Fraction(0)
        self.loads: dict[int, Fraction] = {e.id: Fraction(0) for e in g.edges}
        self.reduced: dict[int, Fraction] = {e.id: Fraction(0) for e in g.edges}
        self.admitted: list[int] = []
        self.in_f: set[int] = set()
        self.tight: set[int] = set()
        self.edge_events: dict[int, tuple[Fraction, int]] = {}
        self.duals: dict[int, Fraction] = {}
        self.sets: dict[int, SetRecord] = {}
        self.delta_prime: dict[int, list[int]] = {}
        self.current: list[int] = []
        self.records: list[IterationRecord] = []
        self._order = 0
        self._porder = 0
        self._edges = sorted(g.edges, key=lambda e: e.id)

    def slack(self, e: Edge) -> Fraction:
        return e.cost - self.reduced[e.id] - self.loads[e.id]

    def parity(self, eid: int, mask: int) -> Fraction:
        """Fractional part of the dual mass plus half the reduction count
        that subsets of mask have laid on this edge."""
        e = self.g.edge_by_id[eid]
        total = Fraction(0)
        for s, y in self.duals.items():
            if is_subset(s, mask) and crosses(s, e.u, e.v):
                total += y
        for s, edge_list in self.delta_prime.items():
            if is_subset(s, mask):
                total += Fraction(edge_list.count(eid), 2)
        return _frac(total)

    def _recompute(self, iteration: int, entered_log: list[int]) -> None:
        report = violated_sets(self.oracle, self.g, self.admitted, self.method)
        new_masks = sorted(m for m in report.sets if m not in self.sets)
        for m in new_masks:
            self.sets[m] = SetRecord(m, self.t, iteration, self._order)
            self._order += 1
            entered_log.append(m)
        still = set(report.sets)
        for m in self.current:
            if m not in still:
                rec = self.sets[m]
                rec.satisfied_time = self.t
                rec.satisfied_iteration = iteration
        self.current = list(report.sets)

    def _admit_pass(self, iteration: int, admitted_log: list[int], entered_log: list[int]) -> bool:
        progress = False
        for eid in sorted(self.tight - self.in_f):
            e = self.g.edge_by_id[eid]
            if any(crosses(c, e.u, e.v) for c in self.current):
                self.admitted.append(eid)
                self.in_f.add(eid)
                admitted_log.append(eid)
                self._recompute(iteration, entered_log)
                progress = True
        return progress

    def _mark_tight(self, eid: int, iteration: int, tight_log: list[int]) -> None:
        self.tight.add(eid)
        self.edge_events[eid] = (self.t, iteration)
        tight_log.append(eid)

    def _reduction_batch(
        self,
        iteration: int,
        reductions_log: list[tuple[int, int]],
        tight_log: list[int],
    ) -> bool:
        batch = sorted(
            (m for m in self.current if self.sets[m].processed_time is None),
            key=lambda m: (m & -m).bit_length(),
        )
        target = _frac(self.t)
        for mask in batch:
            rec = self.sets[mask]
            reduced_here: list[int] = []
            for e in self._edges:
                if not crosses(mask, e.u, e.v):
                    continue
                if self.parity(e.id, mask) != target:
                    self.reduced[e.id] += Fraction(1, 2)
                    self.delta_prime.setdefault(mask, []).append(e.id)
                    reduced_here.append(e.id)
                    reductions_log.append((mask, e.id))
                    s = self.slack(e)
                    if s < 0:
                        raise SolverAbortError(
                            f"reduced cost of edge {e.id} went negative at time {self.t}",
                            dump=self._dump(),
                        )
                    if s == 0 and e.id not in self.tight:
                        self._mark_tight(e.id, iteration, tight_log)
            rec.processed_time = self.t
            rec.processed_iteration = iteration
            rec.processed_order = self._porder
            self._porder += 1
            rec.reduced_edges = tuple(reduced_here)
        return bool(batch)

    def _frozen_phase(self, iteration: int):
        admitted_log: list[int] = []
        entered_log: list[int] = []
        reductions_log: list[tuple[int, int]] = []
        tight_log: list[int] = []
        while True:
            while self._admit_pass(iteration, admitted_log, entered_log):
                pass
            if not self.reduce_costs:
                break
            if not self._reduction_batch(iteration, reductions_log, tight_log):
                break
        return admitted_log, entered_log, reductions_log, tight_log

    def _growth_step(self) -> Fraction:
        best: Fraction | None = None
        for e in self._edges:
            if e.id in self.in_f:
                continue
            rate = sum(1 for c in self.current if crosses(c, e.u, e.v))
            if rate == 0:
                continue
            if e.id in self.tight:
                raise SolverAbortError(
                    f"tight edge {e.id} crosses a minimal violated set after "
                    "the admission fixpoint",
                    dump=self._dump(),
                )
            step = self.slack(e) / rate
            if best is None or step < best:
                best = step
        if best is None:
            raise InfeasibleInstanceError(self.current[0])
        return best

    def run(self) -> MoatCertificate:
        entered0: list[int] = []
        tight0: list[int] = []
        for e in self._edges:
            if self.slack(e) == 0:
                self._mark_tight(e.id, 0, tight0)
        self._recompute(0, entered0)
        adm0, ent0, red0, t0 = self._frozen_phase(0)
        self.records.append(
            IterationRecord(
                0, Fraction(0), Fraction(0), (), Fraction(0),
                tuple(tight0 + t0), tuple(adm0), tuple(entered0 + ent0), tuple(red0),
            )
        )
        i = 0
        while self.current:
            i += 1
            active = tuple(self.current)
            t_start = self.t
            gamma = self._growth_step()
            self.t += gamma
            for c in active:
                self.duals[c] = self.duals.get(c, Fraction(0)) + gamma
            for e in self._edges:
                if e.id in self.in_f:
                    continue
                rate = sum(1 for c in active if crosses(c, e.u, e.v))
                if rate:
                    self.loads[e.id] += gamma * rate
            growth_tight: list[int] = []
            for e in self._edges:
                if e.id not in self.tight and self.slack(e) == 0:
                    self._mark_tight(e.id, i, growth_tight)
            adm, ent, red, extra_tight = self._frozen_phase(i)
            self.records.append(
                IterationRecord(
                    i, t_start, self.t, active, gamma,
                    tuple(growth_tight + extra_tight), tuple(adm), tuple(ent), tuple(red),
                )
            )
        final = reverse_delete(self.g, self.oracle, tuple(self.admitted), self.method)
        return MoatCertificate(
            algorithm="wgmv-half" if self.reduce_costs else "wgmv",
            n=self.g.n,
            final_edges=final,
            grown_edges=tuple(self.admitted),
            duals=dict(self.duals),
            reductions={m: tuple(v) for m, v in self.delta_prime.items()},
            iterations=tuple(self.records),
            sets=self.sets,
            edge_events=dict(self.edge_events),
            original_costs={e.id: e.cost for e in self.g.edges},
            end_time=self.t,
            violated_method=self.method,
        )

    def _dump(self) -> dict:
        return {
            "time": self.t,
            "loads": dict(self.loads),
            "reduced": dict(self.reduced),
            "admitted": list(self.admitted),
            "tight": sorted(self.tight),
            "duals": dict(self.duals),
            "reduction_ledger": {m: list(v) for m, v in self.delta_prime.items()},
            "current": list(self.current),
        }


def reverse_delete(
    g: Multigraph,
    oracle: RequirementOracle,
    order: tuple[int, ...],
    method: str,
) -> tuple[int, ...]:
    """Drop edges in reverse admission order whenever feasibility survives."""
    keep = list(order)
    if violated_sets(oracle, g, keep, method).sets:
        raise ValueError("input edge set is not feasible; nothing to prune")
    for eid in reversed(order):
        trial = [x for x in keep if x != eid]
        if not violated_sets(oracle, g, trial, method).sets:
            keep = trial
    return tuple(keep)


def wgmv_solve(
    g: Multigraph,
    oracle: RequirementOracle,
    violated_set_method: str = "auto",
) -> tuple[tuple[int, ...], MoatCertificate]:
    """Plain moat growing; duals need not be half-integral."""
    cert = _Engine(g, oracle, violated_set_method, reduce_costs=False).run()
    return cert.final_edges, cert


@dataclass(frozen=True)
class DegreeRow:
    iteration: int
    active_count: int
    boundary_sum: int
    sharp_bound: int
    weak_bound: int
    sharp_applies: bool


@dataclass(frozen=True)
class DegreeReport:
    ok: bool
    rows: tuple[DegreeRow, ...]


def wgmv_degree_audit(g: Multigraph, cert: MoatCertificate) -> DegreeReport:
    """Per growth iteration, the final cover's boundary degrees over the
    active sets must total at most 2|active| - 2 (sharp form needs at
    least two active sets; the weak bound 2|active| is reported always)."""
    final = set(cert.final_edges)
    rows = []
    ok = True
    for rec in cert.iterations:
        if rec.index == 0:
            continue
        total = 0
        for mask in rec.active:
            total += sum(
                1 for eid in final if crosses(mask, g.edge_by_id[eid].u, g.edge_by_id[eid].v)
            )
        k = len(rec.active)
        sharp = 2 * k - 2
        weak = 2 * k
        applies = k >= 2
        row_ok = total <= sharp if applies else total <= weak
        ok = ok and row_ok
        rows.append(DegreeRow(rec.index, k, total, sharp, weak, applies))
    return DegreeReport(ok, tuple(rows))
