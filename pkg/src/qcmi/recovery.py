"""Recovery maps, Markov equality diagnostics, and state classification.

The workhorse is the operator

    M = sqrt(rho_AB) pinv_sqrt(rho_B) sqrt(rho_BC)

(all factors embedded into the full space). M M^dag equals the recovered
state obtained by sandwiching rho_BC with sqrt(rho_AB) pinv_sqrt(rho_B),
and M^dag M is the mirror recovery through the BC side. A state has zero
conditional mutual information exactly when these recoveries reproduce it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularMatrixError
from .linalg import (
    commutator,
    dagger,
    hs_norm,
    mat_cpower,
    mat_log,
    mat_power,
    mat_sqrt,
    trace_norm,
)
from .states import DensityMatrix, TripartiteState, embed, partial_trace, validate_density

DEFAULT_CLASSIFY_TOL = 1e-8
DEFAULT_MODULAR_TIMES = (0.5, 1.0, 2.0)


@dataclass(frozen=True)
class ClassificationLabel:
    """Outcome of the commutation / reconstruction classification.

    D1: M is normal and M M^dag reproduces the state (Markov).
    D2: M is normal but the reconstruction differs from the state.
    D3: M is not normal.
    """

    label: str
    commutator_norm: float
    reconstruction_gap: float
    tol: float


def _marginals(state: TripartiteState):
    return (
        partial_trace(state, "AB"),
        partial_trace(state, "BC"),
        partial_trace(state, "B"),
    )


def m_operator(state: TripartiteState) -> np.ndarray:
    """sqrt(rho_AB) pinv_sqrt(rho_B) sqrt(rho_BC), embedded in A (x) B (x) C."""
    rho_ab, rho_bc, rho_b = _marginals(state)
    dims = state.dims
    left = embed(mat_sqrt(rho_ab.mat), "AB", dims)
    middle = embed(mat_power(rho_b.mat, -0.5), "B", dims)
    right = embed(mat_sqrt(rho_bc.mat), "BC", dims)
    return left @ middle @ right


def recover_via_ab(state: TripartiteState) -> DensityMatrix:
    """Recovered state M M^dag: rho_BC sandwiched through the AB marginal."""
    m = m_operator(state)
    return validate_density(m @ dagger(m))


def recover_via_bc(state: TripartiteState) -> DensityMatrix:
    """Mirror recovery M^dag M: rho_AB sandwiched through the BC marginal."""
    m = m_operator(state)
    return validate_density(dagger(m) @ m)


def ruskai_residual(state: TripartiteState) -> float:
    """||log rho_ABC + log rho_B - log rho_AB - log rho_BC||_2.

    Zero exactly on Markov states. Logs are support restricted, so the
    residual is defined for singular states as well; reports flag that
    case separately.
    """
    rho_ab, rho_bc, rho_b = _marginals(state)
    dims = state.dims
    combo = (
        mat_log(state.mat)
        + embed(mat_log(rho_b.mat), "B", dims)
        - embed(mat_log(rho_ab.mat), "AB", dims)
        - embed(mat_log(rho_bc.mat), "BC", dims)
    )
    return hs_norm(combo)


def modular_residual(state: TripartiteState, times=DEFAULT_MODULAR_TIMES) -> float:
    """Largest deviation of the modular commutation identity over `times`.

    Compares rho_ABC^(it) rho_BC^(-it) with rho_AB^(it) rho_B^(-it) in the
    Frobenius norm; all zero exactly on Markov states. Requires a
    full-rank state.
    """
    if not state.rho.is_full_rank():
        raise SingularMatrixError(
            f"modular residual needs a full-rank state "
            f"(support rank {state.rho.support_rank} of {state.dim})"
        )
    rho_ab, rho_bc, rho_b = _marginals(state)
    dims = state.dims
    worst = 0.0
    for t in times:
        lhs = mat_cpower(state.mat, t) @ embed(mat_cpower(rho_bc.mat, -t), "BC", dims)
        rhs = embed(mat_cpower(rho_ab.mat, t), "AB", dims) @ embed(
            mat_cpower(rho_b.mat, -t), "B", dims
        )
        worst = max(worst, hs_norm(lhs - rhs))
    return worst


def zhang_gaps(state: TripartiteState) -> tuple[float, float]:
    """Trace distances of rho to both factorizations M M^dag and M^dag M."""
    m = m_operator(state)
    return (
        trace_norm(state.mat - m @ dagger(m)),
        trace_norm(state.mat - dagger(m) @ m),
    )


def classify(state: TripartiteState, tol: float = DEFAULT_CLASSIFY_TOL) -> ClassificationLabel:
    """Classify by whether M is normal and whether M M^dag reproduces rho."""
    m = m_operator(state)
    comm_norm = trace_norm(commutator(m, dagger(m)))
    gap = trace_norm(state.mat - m @ dagger(m))
    if comm_norm > tol:
        label = "D3"
    elif gap <= tol:
        label = "D1"
    else:
        label = "D2"
    return ClassificationLabel(
        label=label, commutator_norm=comm_norm, reconstruction_gap=gap, tol=tol
    )
