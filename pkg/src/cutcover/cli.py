"""Command-line surface.

Exit codes: 0 success, 1 failed verification or failing harness
property, 2 parse error, 3 flavor mismatch, 4 solver abort, 5 invalid
embedding, 6 flow extraction failure.  Every error prints one
machine-greppable line to stderr: "cutcover: <category>: <reason>".
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .errors import (
    EmbeddingError,
    ExtractionError,
    FlavorMismatchError,
    InfeasibleInstanceError,
    NotUncrossableError,
    SolverAbortError,
)
from .flow import extract_flow, verify_flow
from .generate import gen_ecap, gen_proper, gen_seymour
from .gw import gw_solve
from .half import check_certificate, wgmv_half_solve
from .harness import (
    FAULT_MODES,
    property_harness,
    report_to_dict,
    search_quarter_duals,
    write_report,
)
from .planar import dualize, multicut_from_cover
from .serialize import (
    CertificateDoc,
    LoadedInstance,
    ParseError,
    doc_from_gw,
    doc_from_moat,
    frac_str,
    parse_certificate,
    parse_flow,
    parse_instance,
    serialize_certificate,
    serialize_ecap_instance,
    serialize_flow,
    serialize_gap,
    serialize_gw_trace,
    serialize_moat_trace,
    serialize_multicut,
    serialize_proper_instance,
    serialize_seymour_instance,
)
from .wgmv import wgmv_solve

EXIT_OK = 0
EXIT_FAILED_CHECK = 1
EXIT_PARSE = 2
EXIT_FLAVOR = 3
EXIT_ABORT = 4
EXIT_EMBEDDING = 5
EXIT_EXTRACTION = 6


def _fail(code: int, category: str, reason: str) -> int:
    print(f"cutcover: {category}: {reason}", file=sys.stderr)
    return code


def _read(path: str) -> str:
    return Path(path).read_text()


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _load_instance(path: str) -> LoadedInstance:
    return parse_instance(_read(path))


def cmd_solve(args: argparse.Namespace) -> int:
    loaded = _load_instance(args.instance)
    if loaded.kind == "seymour":
        raise FlavorMismatchError(
            "solve takes a cover instance; run the seymour command on embedded inputs")
    if args.algorithm == "gw":
        if loaded.kind != "proper":
            raise FlavorMismatchError("algorithm gw requires a proper instance")
        final, result = gw_solve(loaded.graph, loaded.oracle)
        doc = doc_from_gw(loaded.graph, loaded.oracle, final, result)
        if args.trace:
            _emit(serialize_gw_trace(result), args.trace)
    else:
        solver = wgmv_half_solve if args.algorithm == "wgmv-half" else wgmv_solve
        _, cert = solver(loaded.graph, loaded.oracle, violated_set_method=args.method)
        doc = doc_from_moat(cert)
        if args.trace:
            _emit(serialize_moat_trace(cert), args.trace)
    _emit(serialize_certificate(doc), args.output)
    return EXIT_OK


def _provenance_problems(loaded: LoadedInstance, g, doc: CertificateDoc) -> list[str]:
    """Sanity of the fields the certificate check does not cover: the grown
    set and the algorithm tag must be consistent with how the solvers behave.
    Every admitted edge is tight when it enters and never crosses a later
    violated set, so grown edges stay tight under the final duals."""
    problems = []
    if not set(doc.final_edges) <= set(doc.grown_edges):
        problems.append("final edges are not a subset of the grown set")
    if doc.algorithm != "wgmv-half" and doc.reductions:
        problems.append(f"algorithm {doc.algorithm} never ledgers reductions")
    if doc.algorithm == "gw" and loaded.kind != "proper":
        problems.append("gw certificates come from proper instances")
    unknown = sorted(e for e in doc.grown_edges if e not in g.edge_by_id)
    if unknown:
        problems.append(f"grown edges name unknown ids {unknown}")
        return problems
    ledger: dict[int, Fraction] = {}
    for _, eids in doc.reductions_dict().items():
        for eid in eids:
            ledger[eid] = ledger.get(eid, Fraction(0)) + Fraction(1, 2)
    duals = doc.duals_dict()
    for eid in doc.grown_edges:
        edge = g.edge_by_id[eid]
        load = sum((y for mask, y in duals.items()
                    if (mask >> edge.u & 1) != (mask >> edge.v & 1)), Fraction(0))
        if load + ledger.get(eid, Fraction(0)) != edge.cost:
            problems.append(f"grown edge {eid} is not tight")
    return problems


def _verify_certificate(loaded: LoadedInstance, doc: CertificateDoc) -> int:
    if loaded.kind == "seymour":
        g, oracle, _ = dualize(loaded.seymour)
    else:
        g, oracle = loaded.graph, loaded.oracle
    clauses: list[tuple[str, bool, str]] = []
    if doc.vertex_count != g.n:
        clauses.append(("instance-match", False,
                        f"certificate is for {doc.vertex_count} vertices, instance has {g.n}"))
    known = all(e in g.edge_by_id for e in doc.final_edges)
    if not known:
        clauses.append(("instance-match", False, "certificate names unknown edges"))
    if doc.vertex_count == g.n and known:
        verdict = check_certificate(
            g, oracle, doc.final_edges, doc.duals_dict(),
            doc.reductions_dict() if doc.reductions else None)
        detail = "; ".join(verdict.failures)
        clauses.append(("feasibility", verdict.feasible, detail))
        clauses.append(("laminar-support", verdict.laminar, detail))
        clauses.append(("dual-feasibility", verdict.dual_feasible, detail))
        clauses.append(("half-integrality", verdict.half_integral, detail))
        clauses.append(("tightness", verdict.tightness_ok, detail))
        clauses.append(("ratio", verdict.ratio_ok, detail))
        declared_ok = (doc.cost == verdict.cost
                       and doc.dual_total == verdict.dual_total
                       and doc.ratio == verdict.ratio
                       and doc.half_integral == verdict.half_integral)
        clauses.append(("declared-values", declared_ok,
                        "stored cost/dual/ratio/flag disagree with recomputation"))
        problems = _provenance_problems(loaded, g, doc)
        clauses.append(("provenance", not problems, "; ".join(problems)))
    ok = all(c[1] for c in clauses)
    for name, good, detail in clauses:
        line = f"{name}: {'ok' if good else 'FAIL'}"
        if not good and detail:
            line += f" ({detail})"
        print(line)
    return EXIT_OK if ok else EXIT_FAILED_CHECK


def _verify_flow_doc(loaded: LoadedInstance, text: str) -> int:
    if loaded.kind != "seymour":
        raise FlavorMismatchError("flow files verify against embedded instances")
    bundle = parse_flow(text)
    report = verify_flow(loaded.seymour, bundle)
    print(f"flow-paths: {'ok' if report.ok else 'FAIL'}")
    print(f"half-integrality: {'ok' if report.half_integral else 'FAIL'}")
    for failure in report.failures:
        print(f"  {failure}")
    return EXIT_OK if report.ok and report.half_integral else EXIT_FAILED_CHECK


def cmd_verify(args: argparse.Namespace) -> int:
    loaded = _load_instance(args.instance)
    text = _read(args.document)
    try:
        head = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from None
    if isinstance(head, dict) and "flows" in head:
        return _verify_flow_doc(loaded, text)
    return _verify_certificate(loaded, parse_certificate(text))


def cmd_seymour(args: argparse.Namespace) -> int:
    loaded = _load_instance(args.instance)
    if loaded.kind != "seymour":
        raise FlavorMismatchError("the seymour command needs an embedded instance")
    instance = loaded.seymour
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    ecap_g, oracle, corr = dualize(instance)
    (out / "dual_instance.json").write_text(serialize_ecap_instance(ecap_g, oracle))

    final, cert = wgmv_half_solve(ecap_g, oracle)
    (out / "certificate.json").write_text(serialize_certificate(doc_from_moat(cert)))

    mrep = multicut_from_cover(corr, final)
    if not mrep.ok:
        raise SolverAbortError(
            f"cover does not separate demand {mrep.failing_demand}")
    (out / "multicut.json").write_text(serialize_multicut(mrep.edges, mrep.capacity))

    bundle = extract_flow(corr, cert.duals)
    frep = verify_flow(instance, bundle)
    if not frep.ok:
        raise SolverAbortError("extracted flow failed verification: "
                               + "; ".join(frep.failures[:3]))
    (out / "flow.json").write_text(serialize_flow(bundle))

    ratio = None if bundle.total == 0 else Fraction(mrep.capacity) / bundle.total
    (out / "gap.json").write_text(serialize_gap(
        mrep.capacity, bundle.total, ratio, frep.half_integral))
    print(f"cut capacity {mrep.capacity}, flow value {frac_str(bundle.total)}, "
          f"ratio {'-' if ratio is None else frac_str(ratio)}")
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    if args.kind == "proper":
        g, oracle = gen_proper(args.seed, args.max_vertices, args.max_cost)
        text = serialize_proper_instance(g, oracle)
    elif args.kind == "ecap":
        g, oracle = gen_ecap(args.seed, args.max_vertices, args.max_cost)
        text = serialize_ecap_instance(g, oracle)
    else:
        text = serialize_seymour_instance(
            gen_seymour(args.seed, args.max_vertices, args.max_cost))
    _emit(text, args.output)
    return EXIT_OK


def cmd_harness(args: argparse.Namespace) -> int:
    report = property_harness(
        args.seed, args.count, max_vertices=args.max_vertices,
        max_cost=args.max_cost, fault=args.fault)
    if args.out:
        paths = write_report(report, args.out)
        if args.search_quarter:
            hits = search_quarter_duals(args.seed, args.search_quarter)
            hit_path = Path(args.out) / "quarter_hits.json"
            hit_path.write_text(json.dumps(
                {"format_version": 1, "hits": hits}, indent=2, sort_keys=True) + "\n")
            paths.append(hit_path)
        for p in paths:
            print(f"wrote {p}")
    else:
        print(json.dumps(report_to_dict(report), indent=2, sort_keys=True))
    if not report.ok:
        failing = sorted(n for n, p in report.properties.items() if p.failures)
        print(f"cutcover: harness: failing properties: {', '.join(failing)}",
              file=sys.stderr)
        return EXIT_FAILED_CHECK
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cutcover",
        description="Primal-dual moat growing for cut covering, with planar "
                    "dual multicut and flow extraction.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run a moat solver on a cover instance")
    p.add_argument("instance")
    p.add_argument("--algorithm", choices=("gw", "wgmv", "wgmv-half"), required=True)
    p.add_argument("--method", default="auto",
                   choices=("auto", "bruteforce", "proper", "2ecap"),
                   help="how minimal violated sets are found")
    p.add_argument("--output", "-o", default=None, help="certificate path (default stdout)")
    p.add_argument("--trace", default=None, help="also write the full trace here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a certificate or flow against an instance")
    p.add_argument("instance")
    p.add_argument("document", help="certificate or flow file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("seymour", help="dualize, solve, and extract multicut and flow")
    p.add_argument("instance")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_seymour)

    p = sub.add_parser("gen", help="write a deterministic random instance")
    p.add_argument("--kind", choices=("proper", "ecap", "seymour"), required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-vertices", type=int, default=10)
    p.add_argument("--max-cost", type=int, default=10)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("harness", help="run the property sweep")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--max-vertices", type=int, default=10)
    p.add_argument("--max-cost", type=int, default=10)
    p.add_argument("--out", default=None, help="report directory (JSON, CSV, figures)")
    p.add_argument("--fault", choices=FAULT_MODES, default=None,
                   help="deliberately break a solver stage to exercise the audits")
    p.add_argument("--search-quarter", type=int, default=0, metavar="TRIES",
                   help="also scan for plain-variant duals beyond half-integral")
    p.set_defaults(func=cmd_harness)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        return _fail(EXIT_PARSE, "parse-error", str(exc))
    except OSError as exc:
        return _fail(EXIT_PARSE, "parse-error", str(exc))
    except FlavorMismatchError as exc:
        return _fail(EXIT_FLAVOR, "flavor-mismatch", str(exc))
    except EmbeddingError as exc:
        return _fail(EXIT_EMBEDDING, "embedding-invalid", str(exc))
    except ExtractionError as exc:
        return _fail(EXIT_EXTRACTION, "extraction-failure", str(exc))
    except (SolverAbortError, NotUncrossableError, InfeasibleInstanceError) as exc:
        return _fail(EXIT_ABORT, "solver-abort", str(exc))


if __name__ == "__main__":
    sys.exit(main())
