"""Negativity-based monogamy and polygamy constraints for small
multipartite quantum states: SCREN / SCRENoA measures, a decomposition-roof
optimizer, the weighted Hamming-weight inequality family, and a seeded
Monte Carlo verification harness."""

from .states import (
    DensityMatrix,
    PureState,
    SchmidtForm,
    density,
    haar_random_mixed,
    haar_random_pure,
    ket,
    partial_trace,
    partial_transpose,
    read_state_json,
    schmidt,
    tensor,
    trace_norm,
    write_state_json,
)
from .measures import (
    Bipartition,
    MeasureValue,
    Method,
    negativity,
    pure_negativity,
    pure_scren,
    pure_tangle,
    scren,
    screnoa,
    two_qubit_tangle,
    two_qubit_tangle_and_toa,
    two_qubit_toa,
)
from .roof import (
    Direction,
    RoofConfig,
    RoofResult,
    decomposition_from_isometry,
    optimize_roof,
)
from .relations import (
    ConditionMode,
    MeasureKind,
    MeasureVector,
    RelationId,
    RelationReport,
    admissible_k,
    bound_average,
    bound_hamming,
    bound_kim,
    bound_power_j,
    check_ordering_condition,
    check_tail_sum_condition,
    evaluate_relation,
    hamming_weight,
    weight_factor,
)
from .harness import (
    AnalysisResult,
    CampaignConfig,
    CampaignReport,
    analyze,
    builtin_state,
    emit_report,
    run_campaign,
    sample_state,
    sweep,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisResult",
    "Bipartition",
    "CampaignConfig",
    "CampaignReport",
    "ConditionMode",
    "DensityMatrix",
    "Direction",
    "MeasureKind",
    "MeasureValue",
    "MeasureVector",
    "Method",
    "PureState",
    "RelationId",
    "RelationReport",
    "RoofConfig",
    "RoofResult",
    "SchmidtForm",
    "admissible_k",
    "analyze",
    "bound_average",
    "bound_hamming",
    "bound_kim",
    "bound_power_j",
    "builtin_state",
    "check_ordering_condition",
    "check_tail_sum_condition",
    "decomposition_from_isometry",
    "density",
    "emit_report",
    "evaluate_relation",
    "haar_random_mixed",
    "haar_random_pure",
    "hamming_weight",
    "ket",
    "negativity",
    "optimize_roof",
    "partial_trace",
    "partial_transpose",
    "pure_negativity",
    "pure_scren",
    "pure_tangle",
    "read_state_json",
    "run_campaign",
    "sample_state",
    "schmidt",
    "scren",
    "screnoa",
    "sweep",
    "tensor",
    "trace_norm",
    "two_qubit_tangle",
    "two_qubit_tangle_and_toa",
    "two_qubit_toa",
    "weight_factor",
    "write_state_json",
]
