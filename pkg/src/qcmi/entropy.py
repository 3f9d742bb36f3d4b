"""Entropy functionals. All logarithms are natural, so values are in nats.

Relative entropy returns math.inf when the support condition fails. The
infinity never enters arithmetic downstream: consumers check math.isinf
first, and report writers serialize it as the string "inf".
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, NotDistributionError
from .linalg import (
    Spectrum,
    eig_hermitian,
    hermitian_part,
    hs_norm,
    mat_log,
    mat_sqrt,
    support_cutoff,
    support_projector,
    trace_norm,
)
from .states import DensityMatrix, TripartiteState, partial_trace

REL_ENTROPY_SUPPORT_TOL = 1e-9


@dataclass(frozen=True)
class EntropyReport:
    """The four entropies of a tripartite state and the derived CMI."""

    s_abc: float
    s_ab: float
    s_bc: float
    s_b: float
    cmi: float


def _spectrum(rho: DensityMatrix) -> np.ndarray:
    return eig_hermitian(rho.mat).eigenvalues


def vn_entropy(rho: DensityMatrix) -> float:
    """von Neumann entropy -Tr[rho log rho] in nats."""
    w = _spectrum(rho)
    tau = support_cutoff(w)
    on = w > tau
    return float(-np.sum(w[on] * np.log(w[on])))


def rel_entropy(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Umegaki relative entropy S(rho || sigma).

    Returns math.inf when rho has weight outside the support of sigma
    (detected as ||(I - P) rho (I - P)||_2 above 1e-9 for the support
    projector P of sigma); otherwise Tr[rho (log rho - log sigma)] with
    support-restricted logs.
    """
    if rho.dim != sigma.dim:
        raise DimensionMismatchError(f"states have dimensions {rho.dim} and {sigma.dim}")
    proj = support_projector(sigma.mat)
    comp = np.eye(sigma.dim) - proj
    if hs_norm(comp @ rho.mat @ comp) > REL_ENTROPY_SUPPORT_TOL:
        return math.inf
    w = _spectrum(rho)
    tau = support_cutoff(w)
    on = w > tau
    tr_rho_log_rho = float(np.sum(w[on] * np.log(w[on])))
    tr_rho_log_sigma = float(np.trace(rho.mat @ mat_log(sigma.mat)).real)
    return tr_rho_log_rho - tr_rho_log_sigma


def cmi(state: TripartiteState) -> EntropyReport:
    """Conditional mutual information I(A:C|B) = S_AB + S_BC - S_ABC - S_B."""
    s_abc = vn_entropy(state.rho)
    s_ab = vn_entropy(partial_trace(state, "AB"))
    s_bc = vn_entropy(partial_trace(state, "BC"))
    s_b = vn_entropy(partial_trace(state, "B"))
    return EntropyReport(
        s_abc=s_abc,
        s_ab=s_ab,
        s_bc=s_bc,
        s_b=s_b,
        cmi=s_ab + s_bc - s_abc - s_b,
    )


def classical_rel_entropy(p, q) -> float:
    """Kullback-Leibler divergence between two probability vectors, in nats."""
    pv = np.asarray(p, dtype=float).ravel()
    qv = np.asarray(q, dtype=float).ravel()
    if pv.size != qv.size:
        raise DimensionMismatchError(f"vector lengths {pv.size} and {qv.size} differ")
    for name, v in (("p", pv), ("q", qv)):
        if float(v.min()) < -1e-12:
            raise NotDistributionError(f"{name} has negative entry {v.min():.3e}")
        if abs(float(v.sum()) - 1.0) > 1e-9:
            raise NotDistributionError(f"{name} sums to {v.sum()!r}, expected 1")
    on = pv > 0.0
    if np.any(qv[on] <= 0.0):
        return math.inf
    return float(np.sum(pv[on] * (np.log(pv[on]) - np.log(qv[on]))))


def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho))."""
    if rho.dim != sigma.dim:
        raise DimensionMismatchError(f"states have dimensions {rho.dim} and {sigma.dim}")
    s = mat_sqrt(rho.mat)
    inner = hermitian_part(s @ sigma.mat @ s)
    w = np.clip(np.linalg.eigvalsh(inner), 0.0, None)
    return float(np.sum(np.sqrt(w)))


def pinsker_slack(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """S(rho || sigma) - ||rho - sigma||_1^2 / 2 (infinite when S is)."""
    rel = rel_entropy(rho, sigma)
    if math.isinf(rel):
        return math.inf
    return rel - 0.5 * trace_norm(rho.mat - sigma.mat) ** 2


def sorted_spectra(rho: DensityMatrix) -> Spectrum:
    """Eigenvalues of rho in ascending and descending order."""
    w = _spectrum(rho)
    return Spectrum(ascending=w.copy(), descending=w[::-1].copy())
