"""Moat growing with parity-driven cost reductions, and certificate checks.

The variant: each set, at the moment it becomes minimally unsatisfied,
halves the cost of every crossing edge whose dual parity disagrees with
the fractional part of the clock.  The payoff is half-integral duals,
which the audit and the independent certificate check verify rather
than assume.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CapExceededError
from .bruteforce import GROUND_CAP, feasibility_bruteforce
from .graphs import Multigraph, crosses, is_laminar, is_subset
from .requirements import RequirementOracle, f_eval
from .wgmv import MoatCertificate, _Engine, violated_sets


def wgmv_half_solve(
    g: Multigraph,
    oracle: RequirementOracle,
    violated_set_method: str = "auto",
) -> tuple[tuple[int, ...], MoatCertificate]:
    """Moat growing with the cost-reduction step enabled."""
    cert = _Engine(g, oracle, violated_set_method, reduce_costs=True).run()
    return cert.final_edges, cert


def _frac(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True)
class ParityUniformityReport:
    ok: bool
    passes_checked: int
    edges_checked: int
    failures: tuple[str, ...]


def parity_uniformity_audit(g: Multigraph, cert: MoatCertificate) -> ParityUniformityReport:
    """Replay the run; immediately after each set's reduction pass, every
    edge crossing the set must have parity equal to the clock fraction.

    Also checks that every event time is a multiple of one half and that
    the replayed ledger and duals match the certificate.
    """
    failures: list[str] = []
    duals: dict[int, Fraction] = {}
    ledger: dict[int, list[int]] = {}
    processed = sorted(
        (rec for rec in cert.sets.values() if rec.processed_order is not None),
        key=lambda rec: rec.processed_order,
    )
    by_iteration: dict[int, list] = {}
    for rec in processed:
        by_iteration.setdefault(rec.processed_iteration, []).append(rec)

    def parity(eid: int, mask: int) -> Fraction:
        e = g.edge_by_id[eid]
        total = Fraction(0)
        for s, y in duals.items():
            if is_subset(s, mask) and crosses(s, e.u, e.v):
                total += y
        for s, lst in ledger.items():
            if is_subset(s, mask):
                total += Fraction(lst.count(eid), 2)
        return _frac(total)

    passes = 0
    edges_checked = 0
    for it in cert.iterations:
        if _frac(it.t_end) not in (Fraction(0), Fraction(1, 2)):
            failures.append(f"iteration {it.index} ends at time {it.t_end}, not a half-integer")
        for mask in it.active:
            duals[mask] = duals.get(mask, Fraction(0)) + it.gamma
        for rec in by_iteration.get(it.index, ()):
            if rec.reduced_edges:
                ledger.setdefault(rec.mask, []).extend(rec.reduced_edges)
            target = _frac(rec.processed_time)
            passes += 1
            for e in g.edges:
                if not crosses(rec.mask, e.u, e.v):
                    continue
                edges_checked += 1
                got = parity(e.id, rec.mask)
                if got != target:
                    failures.append(
                        f"edge {e.id} across set {rec.mask:#x} has parity {got} "
                        f"after the pass at time {rec.processed_time} (expected {target})"
                    )
    if duals != cert.duals:
        failures.append("replayed duals do not match the certificate")
    if {m: tuple(v) for m, v in ledger.items()} != dict(cert.reductions):
        failures.append("replayed reduction ledger does not match the certificate")
    return ParityUniformityReport(not failures, passes, edges_checked, tuple(failures))


@dataclass(frozen=True)
class CertificateVerdict:
    ok: bool
    feasible: bool
    laminar: bool
    dual_feasible: bool
    half_integral: bool
    tightness_ok: bool
    ratio_ok: bool
    cost: int
    dual_total: Fraction
    ratio: Fraction | None
    failures: tuple[str, ...]


def check_certificate(
    g: Multigraph,
    oracle: RequirementOracle,
    final_edges: tuple[int, ...],
    duals: dict[int, Fraction],
    reductions: dict[int, tuple[int, ...]] | None = None,
    violated_method: str = "bruteforce",
    cap: int = GROUND_CAP,
) -> CertificateVerdict:
    """Independent verification of a cover-and-dual pair.

    Clauses: the cover crosses every requirement-1 set; the dual support
    is laminar with positive half-integral values on requirement-1 sets;
    edge loads respect the original costs, and loads plus ledgered
    reductions respect them too, with equality on cover edges; and the
    cover costs at most twice the dual total.  Nothing is taken from the
    solver's internal state; everything is recomputed from the instance.
    """
    failures: list[str] = []
    reductions = reductions or {}

    missing = [eid for eid in final_edges if eid not in g.edge_by_id]
    for m in missing:
        failures.append(f"cover edge {m} does not exist in the instance")
    cover = [eid for eid in final_edges if eid in g.edge_by_id]

    try:
        if g.n <= cap:
            feasible, witness = feasibility_bruteforce(g, oracle, cover, cap=cap)
        else:
            feasible = not violated_sets(oracle, g, cover, violated_method).sets
            witness = None
    except CapExceededError:
        feasible, witness = False, None
    if not feasible:
        msg = f"cover misses the requirement-1 set {witness:#x}" if witness is not None \
            else "cover is not feasible"
        failures.append(msg)

    support = [s for s, y in duals.items() if y != 0]
    laminar, pair = is_laminar(support)
    if not laminar:
        failures.append(f"dual support is not laminar: {pair[0]:#x} and {pair[1]:#x}")
    half = True
    for s, y in duals.items():
        if y <= 0:
            failures.append(f"dual on {s:#x} is {y}, not positive")
        if _frac(y) not in (Fraction(0), Fraction(1, 2)):
            half = False
            failures.append(f"dual on {s:#x} is {y}, not a multiple of 1/2")
        if f_eval(oracle, s) != 1:
            failures.append(f"dual support set {s:#x} has requirement 0")

    loads = {e.id: Fraction(0) for e in g.edges}
    for s, y in duals.items():
        for e in g.edges:
            if crosses(s, e.u, e.v):
                loads[e.id] += y
    reduction_mass = {e.id: Fraction(0) for e in g.edges}
    for s, eids in reductions.items():
        for eid in eids:
            if eid not in reduction_mass:
                failures.append(f"reduction ledger names unknown edge {eid}")
                continue
            reduction_mass[eid] += Fraction(1, 2)

    dual_feasible = True
    tightness_ok = True
    for e in g.edges:
        if loads[e.id] > e.cost:
            dual_feasible = False
            failures.append(f"edge {e.id} is overloaded: {loads[e.id]} > {e.cost}")
        if loads[e.id] + reduction_mass[e.id] > e.cost:
            tightness_ok = False
            failures.append(
                f"edge {e.id} exceeds its cost after ledgered reductions: "
                f"{loads[e.id]} + {reduction_mass[e.id]} > {e.cost}"
            )
    for eid in cover:
        e = g.edge_by_id[eid]
        if loads[eid] + reduction_mass[eid] != e.cost:
            tightness_ok = False
            failures.append(
                f"cover edge {eid} is not tight: load {loads[eid]} + "
                f"reductions {reduction_mass[eid]} != cost {e.cost}"
            )

    cost = sum(g.edge_by_id[eid].cost for eid in cover)
    dual_total = sum((y * f_eval(oracle, s) for s, y in duals.items()), Fraction(0))
    if dual_total > 0:
        ratio = Fraction(cost) / dual_total
        ratio_ok = cost <= 2 * dual_total
    else:
        ratio = None
        ratio_ok = cost == 0
    if not ratio_ok:
        failures.append(f"cover cost {cost} exceeds twice the dual total {dual_total}")

    return CertificateVerdict(
        ok=not failures,
        feasible=feasible and not missing,
        laminar=laminar,
        dual_feasible=dual_feasible,
        half_integral=half,
        tightness_ok=tightness_ok,
        ratio_ok=ratio_ok,
        cost=cost,
        dual_total=dual_total,
        ratio=ratio,
        failures=tuple(failures),
    )


def check_moat_certificate(
    g: Multigraph,
    oracle: RequirementOracle,
    cert: MoatCertificate,
    cap: int = GROUND_CAP,
) -> CertificateVerdict:
    for eid, cost in cert.original_costs.items():
        e = g.edge_by_id.get(eid)
        if e is None or e.cost != cost:
            return CertificateVerdict(
                False, False, False, False, False, False, False,
                0, Fraction(0), None,
                (f"certificate costs disagree with the instance at edge {eid}",),
            )
    return check_certificate(
        g, oracle, cert.final_edges, cert.duals, cert.reductions,
        violated_method=cert.violated_method, cap=cap,
    )
