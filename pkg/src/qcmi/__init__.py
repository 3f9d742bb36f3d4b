"""Conditional mutual information bounds for tripartite quantum states.

The package computes I(A:C|B), the trace of the associated exponential
operator exp(log rho_AB - log rho_B + log rho_BC), the lower-bound chain
it generates, and the recovery-map diagnostics that decide when the
bound chain is saturated.
"""

from .bounds import (
    BoundReport,
    bound_report,
    channel_exp_operator,
    channel_gap_bound,
    fidelity_lower_bound,
    log_overlap_bound,
    sigma_star,
    trace_exp_check,
)
from .channels import (
    KrausChannel,
    depolarizing_channel,
    identity_channel,
    partial_trace_channel,
    petz_dual,
    random_channel,
)
from .entropy import (
    EntropyReport,
    classical_rel_entropy,
    cmi,
    fidelity,
    pinsker_slack,
    rel_entropy,
    sorted_spectra,
    vn_entropy,
)
from .errors import (
    ConfigError,
    DimensionMismatchError,
    InequalityViolationError,
    NoConvergenceError,
    NotDistributionError,
    NotHermitianError,
    NotPSDError,
    ParseError,
    QcmiError,
    SingularMatrixError,
    TraceNotOneError,
    ValidationError,
)
from .harness import (
    ChannelGapSummary,
    ConjectureResult,
    ScanConfig,
    ScanRow,
    channel_gap_scan,
    evaluate_sample,
    run_conjecture,
    scan,
    write_scan_report,
)
from .linalg import (
    HermitianEigen,
    commutator,
    eig_hermitian,
    mat_abs,
    mat_cpower,
    mat_exp,
    mat_log,
    mat_power,
    mat_sqrt,
    support_projector,
    support_rank,
    trace_norm,
)
from .recovery import (
    ClassificationLabel,
    classify,
    m_operator,
    modular_residual,
    recover_via_ab,
    recover_via_bc,
    ruskai_residual,
    zhang_gaps,
)
from .sampling import (
    near_markov_state,
    random_classical,
    random_classical_state,
    random_density,
    random_hermitian,
    random_markov_spec,
    random_markov_state,
    random_tripartite,
    random_unitary,
    substream,
)
from .states import (
    ClassicalJoint,
    DensityMatrix,
    MarkovBlock,
    MarkovSpec,
    TripartiteState,
    classical_state,
    embed,
    markov_state,
    partial_trace,
    regularize,
    tensor,
    tripartite,
    validate_density,
)
from .stateio import (
    read_markov_spec,
    read_state,
    write_markov_spec,
    write_state,
)
from .trace_inequalities import (
    audenaert_gap,
    gt_gap,
    lieb_triple_lhs,
    lieb_triple_rhs,
    pb_gap,
    powers_stormer_sandwich,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "ChannelGapSummary",
    "ClassicalJoint",
    "ClassificationLabel",
    "ConfigError",
    "ConjectureResult",
    "DensityMatrix",
    "DimensionMismatchError",
    "EntropyReport",
    "HermitianEigen",
    "InequalityViolationError",
    "KrausChannel",
    "MarkovBlock",
    "MarkovSpec",
    "NoConvergenceError",
    "NotDistributionError",
    "NotHermitianError",
    "NotPSDError",
    "ParseError",
    "QcmiError",
    "ScanConfig",
    "ScanRow",
    "SingularMatrixError",
    "TraceNotOneError",
    "TripartiteState",
    "ValidationError",
    "audenaert_gap",
    "bound_report",
    "channel_exp_operator",
    "channel_gap_bound",
    "channel_gap_scan",
    "classical_rel_entropy",
    "classical_state",
    "classify",
    "cmi",
    "commutator",
    "depolarizing_channel",
    "eig_hermitian",
    "embed",
    "evaluate_sample",
    "fidelity",
    "fidelity_lower_bound",
    "gt_gap",
    "identity_channel",
    "lieb_triple_lhs",
    "lieb_triple_rhs",
    "log_overlap_bound",
    "m_operator",
    "markov_state",
    "mat_abs",
    "mat_cpower",
    "mat_exp",
    "mat_log",
    "mat_power",
    "mat_sqrt",
    "modular_residual",
    "near_markov_state",
    "partial_trace",
    "partial_trace_channel",
    "pb_gap",
    "petz_dual",
    "pinsker_slack",
    "powers_stormer_sandwich",
    "random_channel",
    "random_classical",
    "random_classical_state",
    "random_density",
    "random_hermitian",
    "random_markov_spec",
    "random_markov_state",
    "random_tripartite",
    "random_unitary",
    "read_markov_spec",
    "read_state",
    "recover_via_ab",
    "recover_via_bc",
    "regularize",
    "rel_entropy",
    "ruskai_residual",
    "run_conjecture",
    "scan",
    "sigma_star",
    "sorted_spectra",
    "substream",
    "support_projector",
    "support_rank",
    "tensor",
    "trace_exp_check",
    "trace_norm",
    "tripartite",
    "validate_density",
    "vn_entropy",
    "write_markov_spec",
    "write_scan_report",
    "write_state",
    "zhang_gaps",
]
