"""Spectral operations on complex Hermitian matrices.

Every matrix function in the package goes through one eigendecomposition
routine so that support handling (pseudo-inverses, logs of singular
operators) stays consistent. Matrix 2-norms are Frobenius norms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    NoConvergenceError,
    NotHermitianError,
    NotPSDError,
)

# Relative Hermiticity tolerance used everywhere a Hermitian input is required.
HERMITIAN_RTOL = 1e-8
# Eigenvalues below support_cutoff() are treated as exact zeros.
SUPPORT_RTOL = 1e-10
SUPPORT_FLOOR = 1e-14


def as_matrix(m) -> np.ndarray:
    """Coerce input to a square, C-ordered complex128 array."""
    a = np.ascontiguousarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(m).conj().T


def hs_norm(m) -> float:
    """Hilbert-Schmidt (Frobenius) norm."""
    return float(np.linalg.norm(np.asarray(m)))


def hermitian_part(m: np.ndarray) -> np.ndarray:
    return (m + dagger(m)) / 2.0


def require_hermitian(m, rtol: float = HERMITIAN_RTOL) -> np.ndarray:
    """Return the symmetrized copy of m, raising if it is not Hermitian.

    The deviation ||m - m^dag||_2 is compared against rtol * max(1, ||m||_2).
    """
    a = as_matrix(m)
    dev = hs_norm(a - dagger(a))
    if dev > rtol * max(1.0, hs_norm(a)):
        raise NotHermitianError(f"matrix deviates from Hermitian by {dev:.3e}")
    return hermitian_part(a)


def support_cutoff(eigenvalues: np.ndarray) -> float:
    """Threshold below which eigenvalues count as kernel, not support."""
    lam_max = float(np.max(eigenvalues)) if np.size(eigenvalues) else 0.0
    return max(SUPPORT_RTOL * max(lam_max, 0.0), SUPPORT_FLOOR)


@dataclass(frozen=True, eq=False)
class HermitianEigen:
    """Eigendecomposition with ascending eigenvalues and fixed phases."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues of a density matrix in both sort orders."""

    ascending: np.ndarray
    descending: np.ndarray


def _fix_phases(q: np.ndarray) -> np.ndarray:
    # Rephase each column so its first non-negligible component is real
    # and positive. This pins the eigenvector matrix for a fixed input.
    q = q.copy()
    for j in range(q.shape[1]):
        col = q[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size:
            pivot = col[nz[0]]
            q[:, j] = col * (pivot.conj() / abs(pivot))
    return q


def eig_hermitian(m) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix.

    Eigenvalues are returned in ascending order. Eigenvector phases are
    fixed deterministically so repeated calls on the same input agree
    bitwise.
    """
    h = require_hermitian(m)
    try:
        w, q = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NoConvergenceError(f"eigensolver did not converge: {exc}") from exc
    return HermitianEigen(eigenvalues=w, eigenvectors=_fix_phases(q))


def _rebuild(w: np.ndarray, q: np.ndarray) -> np.ndarray:
    return (q * w) @ dagger(q)


def _psd_eig(m, what: str) -> tuple[np.ndarray, np.ndarray, float]:
    e = eig_hermitian(m)
    w = e.eigenvalues
    tau = support_cutoff(w)
    if w[0] < -tau:
        raise NotPSDError(f"{what} requires a PSD input, found eigenvalue {w[0]:.3e}")
    return w, e.eigenvectors, tau


def mat_exp(m) -> np.ndarray:
    """exp(m) for Hermitian m."""
    e = eig_hermitian(m)
    return hermitian_part(_rebuild(np.exp(e.eigenvalues), e.eigenvectors))


def mat_log(m) -> np.ndarray:
    """Support-restricted logarithm of a PSD matrix.

    Kernel eigenvalues map to 0, so exp(mat_log(rho)) reproduces rho on its
    support and acts as the identity times zero on the kernel.
    """
    w, q, tau = _psd_eig(m, "log")
    f = np.where(w > tau, np.log(np.where(w > tau, w, 1.0)), 0.0)
    return hermitian_part(_rebuild(f, q))


def mat_sqrt(m) -> np.ndarray:
    """Principal square root of a PSD matrix (kernel stays kernel)."""
    w, q, tau = _psd_eig(m, "sqrt")
    f = np.sqrt(np.where(w > tau, w, 0.0))
    return hermitian_part(_rebuild(f, q))


def mat_power(m, t: float) -> np.ndarray:
    """Support-restricted real power of a PSD matrix.

    Negative exponents invert on the support only, so mat_power(rho, -0.5)
    is the pseudo-inverse square root.
    """
    w, q, tau = _psd_eig(m, "power")
    on = w > tau
    f = np.where(on, np.power(np.where(on, w, 1.0), t), 0.0)
    return hermitian_part(_rebuild(f, q))


def mat_cpower(m, t: float) -> np.ndarray:
    """m**(it) for PSD m: unitary on the support, zero on the kernel."""
    w, q, tau = _psd_eig(m, "cpower")
    on = w > tau
    f = np.where(on, np.exp(1j * t * np.log(np.where(on, w, 1.0))), 0.0)
    return _rebuild(f, q)


def mat_abs(m) -> np.ndarray:
    """Operator absolute value |m| of a Hermitian matrix."""
    e = eig_hermitian(m)
    return hermitian_part(_rebuild(np.abs(e.eigenvalues), e.eigenvectors))


def support_projector(m) -> np.ndarray:
    """Orthogonal projector onto the support (range) of a PSD matrix."""
    w, q, tau = _psd_eig(m, "support projector")
    cols = q[:, w > tau]
    return hermitian_part(cols @ dagger(cols))


def support_rank(m) -> int:
    """Number of eigenvalues above the support cutoff."""
    w, _, tau = _psd_eig(m, "support rank")
    return int(np.count_nonzero(w > tau))


def trace_norm(m) -> float:
    """Schatten 1-norm of a Hermitian matrix (sum of |eigenvalues|)."""
    h = require_hermitian(m)
    w = np.linalg.eigvalsh(h)
    return float(np.sum(np.abs(w)))


def commutator(a, b) -> np.ndarray:
    """a @ b - b @ a."""
    x = as_matrix(a)
    y = as_matrix(b)
    if x.shape != y.shape:
        raise DimensionMismatchError(f"commutator of shapes {x.shape} and {y.shape}")
    return x @ y - y @ x
