"""Lower bounds on conditional mutual information and channel analogues.

The central object is the candidate state

    exp(log rho_AB - log rho_B + log rho_BC)

built from embedded marginal logarithms. For states with singular
marginals the exponential is taken on the intersection of the embedded
marginal supports, and reports flag that restriction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import KrausChannel
from .entropy import classical_rel_entropy, cmi, fidelity, rel_entropy, vn_entropy
from .errors import SingularMatrixError
from .linalg import (
    dagger,
    eig_hermitian,
    hermitian_part,
    hs_norm,
    mat_exp,
    mat_log,
    mat_sqrt,
    support_projector,
    trace_norm,
)
from .states import DensityMatrix, TripartiteState, embed, partial_trace, validate_density

# Tr[sqrt(rho) sqrt(sigma)] at or below this is treated as zero overlap.
ZERO_OVERLAP = 1e-300


@dataclass(frozen=True)
class BoundReport:
    """CMI, the lower-bound chain evaluated on one state, and the slacks."""

    cmi: float
    sigma_star_trace: float
    log_overlap_bound: float
    thm1_bound: float
    corollary_bound: float
    slack_thm1: float
    slack_corollary: float
    support_restricted: bool


def _intersection_projector(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    # Intersection of the ranges of two orthogonal projectors: the
    # eigenvalue-2 eigenspace of p + q.
    e = eig_hermitian(p + q)
    cols = e.eigenvectors[:, e.eigenvalues > 2.0 - 1e-8]
    return hermitian_part(cols @ dagger(cols))


def _sigma_star_parts(state: TripartiteState) -> tuple[np.ndarray, bool]:
    dims = state.dims
    rho_ab = partial_trace(state, "AB")
    rho_bc = partial_trace(state, "BC")
    rho_b = partial_trace(state, "B")
    h = (
        embed(mat_log(rho_ab.mat), "AB", dims)
        + embed(mat_log(rho_bc.mat), "BC", dims)
        - embed(mat_log(rho_b.mat), "B", dims)
    )
    if rho_ab.is_full_rank() and rho_bc.is_full_rank():
        return mat_exp(h), False
    proj = _intersection_projector(
        embed(support_projector(rho_ab.mat), "AB", dims),
        embed(support_projector(rho_bc.mat), "BC", dims),
    )
    compressed = hermitian_part(proj @ h @ proj)
    return hermitian_part(proj @ mat_exp(compressed) @ proj), True


def sigma_star(state: TripartiteState) -> np.ndarray:
    """The exponentiated-marginal-logs candidate state (PSD, trace <= 1)."""
    sig, _ = _sigma_star_parts(state)
    return sig


def trace_exp_check(state: TripartiteState) -> float:
    """Trace of sigma_star; at most 1 up to roundoff."""
    return float(np.trace(sigma_star(state)).real)


def _overlap_bound(overlap: float) -> float:
    if overlap <= ZERO_OVERLAP:
        return math.inf
    return -2.0 * math.log(overlap)


def log_overlap_bound(state: TripartiteState) -> float:
    """-2 log Tr[sqrt(rho) sqrt(sigma_star)], the sharpest bound in the chain."""
    sig, _ = _sigma_star_parts(state)
    overlap = float(np.trace(mat_sqrt(state.mat) @ mat_sqrt(sig)).real)
    return _overlap_bound(overlap)


def bound_report(state: TripartiteState) -> BoundReport:
    """Evaluate the full lower-bound chain on one state.

    The three bounds are ordered: corollary <= thm1 <= log_overlap <= cmi,
    each up to the documented tolerances.
    """
    report = cmi(state)
    sig, restricted = _sigma_star_parts(state)
    sq_rho = mat_sqrt(state.mat)
    sq_sig = mat_sqrt(sig)
    overlap = float(np.trace(sq_rho @ sq_sig).real)
    log_overlap = _overlap_bound(overlap)
    thm1 = hs_norm(sq_rho - sq_sig) ** 2
    corollary = 0.25 * trace_norm(state.mat - sig) ** 2
    return BoundReport(
        cmi=report.cmi,
        sigma_star_trace=float(np.trace(sig).real),
        log_overlap_bound=log_overlap,
        thm1_bound=thm1,
        corollary_bound=corollary,
        slack_thm1=report.cmi - thm1,
        slack_corollary=report.cmi - corollary,
        support_restricted=restricted,
    )


def _require_full_rank(rho: DensityMatrix, what: str) -> None:
    if not rho.is_full_rank():
        raise SingularMatrixError(f"{what} must be full rank (support rank {rho.support_rank} of {rho.dim})")


def channel_exp_operator(rho: DensityMatrix, sigma: DensityMatrix, phi: KrausChannel) -> np.ndarray:
    """exp(log sigma + phi^dag(log phi(rho)) - phi^dag(log phi(sigma)))."""
    _require_full_rank(rho, "rho")
    _require_full_rank(sigma, "sigma")
    phi_rho = validate_density(phi.apply(rho.mat))
    phi_sigma = validate_density(phi.apply(sigma.mat))
    _require_full_rank(phi_rho, "phi(rho)")
    _require_full_rank(phi_sigma, "phi(sigma)")
    x = (
        mat_log(sigma.mat)
        + phi.dual(mat_log(phi_rho.mat))
        - phi.dual(mat_log(phi_sigma.mat))
    )
    return mat_exp(hermitian_part(x))


def channel_gap_bound(
    rho: DensityMatrix, sigma: DensityMatrix, phi: KrausChannel
) -> tuple[float, float]:
    """Data-processing gap of relative entropy under phi and its lower bound.

    Returns (lhs, rhs) with
        lhs = S(rho || sigma) - S(phi rho || phi sigma)
        rhs = -2 log Tr[sqrt(rho) sqrt(channel_exp_operator(rho, sigma, phi))]
    and lhs >= rhs - tolerance for full-rank inputs.
    """
    _require_full_rank(rho, "rho")
    _require_full_rank(sigma, "sigma")
    phi_rho = validate_density(phi.apply(rho.mat))
    phi_sigma = validate_density(phi.apply(sigma.mat))
    lhs = rel_entropy(rho, sigma) - rel_entropy(phi_rho, phi_sigma)
    ex = channel_exp_operator(rho, sigma, phi)
    overlap = float(np.trace(mat_sqrt(rho.mat) @ mat_sqrt(ex)).real)
    return float(lhs), _overlap_bound(overlap)


def fidelity_lower_bound(rho: DensityMatrix, sigma: DensityMatrix) -> tuple[float, float]:
    """Fidelity and its spectral lower bound for full-rank states.

    The bound is Tr[sqrt(rho)] * exp(-S(rho)/2 - H/2) where H is the
    classical divergence between the descending spectrum of rho and the
    ascending spectrum of sigma. Equality holds at rho = sigma = I / dim.
    """
    _require_full_rank(rho, "rho")
    _require_full_rank(sigma, "sigma")
    f = fidelity(rho, sigma)
    w_rho = eig_hermitian(rho.mat).eigenvalues
    w_sigma = eig_hermitian(sigma.mat).eigenvalues
    tr_sqrt = float(np.sum(np.sqrt(np.clip(w_rho, 0.0, None))))
    entropy = vn_entropy(rho)
    divergence = classical_rel_entropy(w_rho[::-1], w_sigma)
    bound = tr_sqrt * math.exp(-0.5 * entropy - 0.5 * divergence)
    return f, bound
