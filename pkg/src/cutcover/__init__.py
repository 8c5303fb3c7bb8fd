"""Exact primal-dual moat growing for cut covering problems, with the
planar-dual pipeline from cut covers to multicuts and half-integral
multicommodity flows."""

from .bruteforce import (
    feasibility_bruteforce,
    labeled_isomorphic,
    min_cut_cover_bruteforce,
)
from .errors import (
    CapExceededError,
    CutCoverError,
    EmbeddingError,
    ExtractionError,
    FlavorMismatchError,
    IncompleteTableError,
    InfeasibleInstanceError,
    NotUncrossableError,
    SolverAbortError,
)
from .flow import FlowBundle, extract_flow, gap_report, verify_flow
from .generate import gen_ecap, gen_proper, gen_seymour
from .graphs import Edge, Multigraph, connected_components, is_laminar
from .gw import GwResult, dual_value, gw_grow, gw_parity_audit, gw_reverse_delete, gw_solve
from .half import (
    CertificateVerdict,
    check_certificate,
    check_moat_certificate,
    parity_uniformity_audit,
    wgmv_half_solve,
)
from .harness import property_harness, search_quarter_duals, write_report
from .history import build_laminar_history, structure_audit
from .instances import matched_wheel_gap, quarter_dual_instance
from .planar import (
    SeymourInstance,
    double_dual_isomorphic,
    dualize,
    multicut_from_cover,
    trace_faces,
)
from .requirements import (
    AugmentationFromForest,
    ExplicitTable,
    ProperFromDemands,
    check_proper,
    check_uncrossable,
    f_eval,
    minimal_violated_2ecap,
    minimal_violated_bruteforce,
    minimal_violated_proper,
)
from .wgmv import (
    MoatCertificate,
    wgmv_degree_audit,
    wgmv_solve,
)

__version__ = "0.1.0"

__all__ = [
    "AugmentationFromForest",
    "CapExceededError",
    "CertificateVerdict",
    "CutCoverError",
    "Edge",
    "EmbeddingError",
    "ExplicitTable",
    "ExtractionError",
    "FlavorMismatchError",
    "FlowBundle",
    "GwResult",
    "IncompleteTableError",
    "InfeasibleInstanceError",
    "MoatCertificate",
    "Multigraph",
    "NotUncrossableError",
    "ProperFromDemands",
    "SeymourInstance",
    "SolverAbortError",
    "build_laminar_history",
    "check_certificate",
    "check_moat_certificate",
    "check_proper",
    "check_uncrossable",
    "connected_components",
    "double_dual_isomorphic",
    "dual_value",
    "dualize",
    "extract_flow",
    "f_eval",
    "feasibility_bruteforce",
    "gap_report",
    "gen_ecap",
    "gen_proper",
    "gen_seymour",
    "gw_grow",
    "gw_parity_audit",
    "gw_reverse_delete",
    "gw_solve",
    "is_laminar",
    "labeled_isomorphic",
    "matched_wheel_gap",
    "min_cut_cover_bruteforce",
    "minimal_violated_2ecap",
    "minimal_violated_bruteforce",
    "minimal_violated_proper",
    "multicut_from_cover",
    "parity_uniformity_audit",
    "property_harness",
    "quarter_dual_instance",
    "search_quarter_duals",
    "structure_audit",
    "trace_faces",
    "verify_flow",
    "wgmv_degree_audit",
    "wgmv_half_solve",
    "wgmv_solve",
    "write_report",
]
