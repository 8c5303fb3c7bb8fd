"""Requirement oracles f: 2^V -> {0, 1} and violated-set computations.

Three flavors:

* ProperFromDemands: f(S) = 1 iff some demand pair is split by S.  Such f
  is proper (symmetric, f(V) = 0, disjoint-union maximality).
* AugmentationFromForest: f(S) = 1 iff exactly one edge of a fixed
  loop-free multigraph Y crosses S.  Such f is uncrossable.
* ExplicitTable: f given extensionally; queries outside the table raise
  rather than defaulting to 0.

A set S is violated for (g, F) when f(S) = 1 and no edge of F crosses S;
the minimal violated sets of an uncrossable function are pairwise
disjoint, and each flavor gets a matching computation: brute force
(reference), component scan (proper), bridge-block structure (augmentation).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import (
    CapExceededError,
    FlavorMismatchError,
    IncompleteTableError,
    NotUncrossableError,
)
from .graphs import (
    Multigraph,
    bits,
    bridges,
    connected_components,
    crosses,
    full_mask,
)

PROPER_CHECK_CAP = 12
UNCROSSABLE_CHECK_CAP = 12
BRUTEFORCE_VIOLATED_CAP = 16


class RequirementOracle:
    """Base flavor; subclasses define ground size n and value(subset)."""

    n: int

    def value(self, subset: int) -> int:
        raise NotImplementedError


@dataclass(frozen=True)
class ProperFromDemands(RequirementOracle):
    n: int
    demands: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for s, t in self.demands:
            if s == t or not (0 <= s < self.n and 0 <= t < self.n):
                raise ValueError(f"bad demand pair ({s}, {t})")

    def value(self, subset: int) -> int:
        for s, t in self.demands:
            if crosses(subset, s, t):
                return 1
        return 0


@dataclass(frozen=True)
class AugmentationFromForest(RequirementOracle):
    """f(S) = 1 iff exactly one Y edge crosses S.

    Y is loop-free and may contain parallel edges; it need not actually
    be a forest.  Crossings count with multiplicity.
    """

    n: int
    y_edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for s, t in self.y_edges:
            if s == t or not (0 <= s < self.n and 0 <= t < self.n):
                raise ValueError(f"bad edge ({s}, {t})")

    def crossing_count(self, subset: int) -> int:
        return sum(1 for s, t in self.y_edges if crosses(subset, s, t))

    def value(self, subset: int) -> int:
        return 1 if self.crossing_count(subset) == 1 else 0


@dataclass(frozen=True)
class ExplicitTable(RequirementOracle):
    n: int
    table: dict[int, int] = field(hash=False)

    def value(self, subset: int) -> int:
        try:
            return self.table[subset]
        except KeyError:
            raise IncompleteTableError(subset) from None


def f_eval(oracle: RequirementOracle, subset: int) -> int:
    """Evaluate f with ground-set bounds checking."""
    if subset & ~full_mask(oracle.n):
        raise ValueError("subset contains vertices outside the ground set")
    val = oracle.value(subset)
    if val not in (0, 1):
        raise ValueError(f"oracle returned non-boolean value {val!r}")
    return val


@dataclass(frozen=True)
class PropertyVerdict:
    ok: bool
    reason: str = ""
    witness: tuple[int, ...] = ()


def check_proper(oracle: RequirementOracle, cap: int = PROPER_CHECK_CAP) -> PropertyVerdict:
    """Exhaustively test f(empty)=f(V)=0, symmetry, disjoint-union maximality."""
    n = oracle.n
    if n > cap:
        raise CapExceededError("check_proper", n, cap)
    univ = full_mask(n)
    if f_eval(oracle, 0) != 0:
        return PropertyVerdict(False, "f(empty) != 0", (0,))
    if f_eval(oracle, univ) != 0:
        return PropertyVerdict(False, "f(ground set) != 0", (univ,))
    vals = [f_eval(oracle, s) for s in range(univ + 1)]
    for s in range(univ + 1):
        if vals[s] != vals[univ ^ s]:
            return PropertyVerdict(False, "not symmetric", (s, univ ^ s))
    for a in range(univ + 1):
        rest = univ ^ a
        b = rest
        while b:
            if vals[a | b] > max(vals[a], vals[b]):
                return PropertyVerdict(False, "disjoint-union maximality fails", (a, b))
            b = (b - 1) & rest
    return PropertyVerdict(True)


def check_uncrossable(oracle: RequirementOracle, cap: int = UNCROSSABLE_CHECK_CAP) -> PropertyVerdict:
    """Exhaustively test the uncrossing property together with f(empty)=f(V)=0."""
    n = oracle.n
    if n > cap:
        raise CapExceededError("check_uncrossable", n, cap)
    univ = full_mask(n)
    if f_eval(oracle, 0) != 0:
        return PropertyVerdict(False, "f(empty) != 0", (0,))
    if f_eval(oracle, univ) != 0:
        return PropertyVerdict(False, "f(ground set) != 0", (univ,))
    vals = [f_eval(oracle, s) for s in range(univ + 1)]
    ones = [s for s in range(univ + 1) if vals[s]]
    for a in ones:
        for b in ones:
            inter = a & b
            # pairs that nest or miss each other satisfy one branch trivially
            if not inter or inter == a or inter == b:
                continue
            first = vals[inter] == 1 and vals[a | b] == 1
            second = vals[a & ~b] == 1 and vals[b & ~a] == 1
            if not (first or second):
                return PropertyVerdict(False, "uncrossing fails", (a, b))
    return PropertyVerdict(True)


@dataclass(frozen=True)
class ViolatedSetReport:
    sets: tuple[int, ...]
    method: str

    def __post_init__(self):
        for i, a in enumerate(self.sets):
            for b in self.sets[i + 1:]:
                if a & b:
                    raise NotUncrossableError(
                        "minimal violated sets overlap, so the requirement "
                        "function is not uncrossable",
                        witness=(a, b),
                    )


def _is_violated(oracle, g, f_edges, subset) -> bool:
    if not f_eval(oracle, subset):
        return False
    for eid in f_edges:
        e = g.edge_by_id[eid]
        if crosses(subset, e.u, e.v):
            return False
    return True


def minimal_violated_bruteforce(
    oracle: RequirementOracle,
    g: Multigraph,
    f_edges: Iterable[int],
    cap: int = BRUTEFORCE_VIOLATED_CAP,
) -> ViolatedSetReport:
    """All inclusion-minimal violated sets by subset enumeration."""
    n = oracle.n
    if n > cap:
        raise CapExceededError("minimal_violated_bruteforce", n, cap)
    if g.n != n:
        raise ValueError("graph and oracle ground sets differ")
    f_list = list(f_edges)
    univ = full_mask(n)
    by_size: list[list[int]] = [[] for _ in range(n + 1)]
    for s in range(1, univ + 1):
        by_size[s.bit_count()].append(s)
    minimal: list[int] = []
    for size in range(1, n + 1):
        for s in by_size[size]:
            if any(m & ~s == 0 for m in minimal):
                continue
            if _is_violated(oracle, g, f_list, s):
                minimal.append(s)
    return ViolatedSetReport(tuple(sorted(minimal)), "BruteForce")


def minimal_violated_proper(
    oracle: RequirementOracle,
    g: Multigraph,
    f_edges: Iterable[int],
) -> ViolatedSetReport:
    """Minimal violated sets of a proper function: f=1 components of (V, F)."""
    require_proper(oracle)
    comps = connected_components(g, f_edges)
    sets = tuple(sorted(c for c in comps if f_eval(oracle, c) == 1))
    return ViolatedSetReport(sets, "ProperComponents")


def require_proper(oracle: RequirementOracle) -> None:
    if isinstance(oracle, ProperFromDemands):
        return
    if oracle.n <= PROPER_CHECK_CAP:
        verdict = check_proper(oracle)
        if verdict.ok:
            return
        raise FlavorMismatchError(f"oracle is not proper: {verdict.reason}")
    raise FlavorMismatchError(
        "need a ProperFromDemands oracle (or a small one verifiable by check_proper)"
    )


def minimal_violated_2ecap(
    oracle: AugmentationFromForest,
    g: Multigraph,
    f_edges: Iterable[int],
) -> ViolatedSetReport:
    """Minimal violated sets of an augmentation requirement, structurally.

    Contract the components of (V, F), quotient Y onto them, and take the
    bridge-block forest of the quotient.  A violated set must be a union
    of F-components with exactly one Y bridge leaving it; the minimal
    ones are exactly the expansions of the leaf blocks (blocks incident
    to exactly one bridge, counting tree-degree in the block forest).
    """
    if not isinstance(oracle, AugmentationFromForest):
        raise FlavorMismatchError("need an AugmentationFromForest oracle")
    if g.n != oracle.n:
        raise ValueError("graph and oracle ground sets differ")
    comps = connected_components(g, f_edges)
    comp_index = {}
    for idx, c in enumerate(comps):
        for v in bits(c):
            comp_index[v] = idx
    # quotient multigraph of Y over the F-components, dropping loops
    q_edges = []
    for k, (s, t) in enumerate(oracle.y_edges):
        cs, ct = comp_index[s], comp_index[t]
        if cs != ct:
            q_edges.append((k, cs, ct, 0))
    quotient = Multigraph(max(len(comps), 1), q_edges)
    bridge_ids = bridges(quotient, [e[0] for e in q_edges])
    # 2-edge-connected blocks: components after removing the bridges
    block_masks = connected_components(quotient, [e[0] for e in q_edges if e[0] not in bridge_ids])
    out = []
    for bm in block_masks:
        incident = sum(1 for bid in bridge_ids if crosses(bm, *_endpoints(quotient, bid)))
        if incident == 1:
            expanded = 0
            for ci in bits(bm):
                expanded |= comps[ci]
            out.append(expanded)
    return ViolatedSetReport(tuple(sorted(out)), "EcapStructural")


def _endpoints(g: Multigraph, eid: int) -> tuple[int, int]:
    e = g.edge_by_id[eid]
    return e.u, e.v


def demands_from_y(n: int, y_edges: Iterable[tuple[int, int]]) -> AugmentationFromForest:
    return AugmentationFromForest(n, tuple(y_edges))


def table_from_oracle(oracle: RequirementOracle) -> ExplicitTable:
    """Materialize any small oracle as an explicit table."""
    univ = full_mask(oracle.n)
    return ExplicitTable(oracle.n, {s: f_eval(oracle, s) for s in range(univ + 1)})
