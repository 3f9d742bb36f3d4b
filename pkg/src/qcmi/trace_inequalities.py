"""Scalar trace inequalities used by the bound chain.

Each function returns a gap or bound value rather than a boolean, so the
harness and the tests can assert nonnegativity at an explicit tolerance
and record how tight each inequality is.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError, SingularMatrixError
from .linalg import (
    _psd_eig,
    dagger,
    hs_norm,
    mat_exp,
    mat_log,
    mat_power,
    mat_sqrt,
    require_hermitian,
    trace_norm,
)


def _same_dim(*mats: np.ndarray) -> None:
    dims = {m.shape[0] for m in mats}
    if len(dims) != 1:
        raise DimensionMismatchError(f"operands act on different spaces: {sorted(dims)}")


def pb_gap(h, k) -> float:
    """Peierls-Bogoliubov gap.

    Returns Tr exp(h + k) / Tr exp(h) - exp(Tr[exp(h) k] / Tr exp(h)),
    which is nonnegative for Hermitian h, k and zero when k is a multiple
    of the identity.
    """
    hh = require_hermitian(h)
    kk = require_hermitian(k)
    _same_dim(hh, kk)
    eh = mat_exp(hh)
    z = float(np.trace(eh).real)
    lhs = float(np.trace(mat_exp(hh + kk)).real) / z
    rhs = float(np.exp(np.trace(eh @ kk).real / z))
    return lhs - rhs


def gt_gap(a, b) -> float:
    """Golden-Thompson gap Tr[exp(a) exp(b)] - Tr exp(a + b), nonnegative."""
    aa = require_hermitian(a)
    bb = require_hermitian(b)
    _same_dim(aa, bb)
    lhs = float(np.trace(mat_exp(aa) @ mat_exp(bb)).real)
    rhs = float(np.trace(mat_exp(aa + bb)).real)
    return lhs - rhs


def lieb_triple_lhs(r, s, t) -> float:
    """Tr exp(log r - log s + log t) with support-restricted logs."""
    return float(np.trace(mat_exp(mat_log(r) - mat_log(s) + mat_log(t))).real)


def lieb_triple_rhs(r, s, t) -> float:
    """Closed form of Tr of the integral of r (s + x)^-1 t (s + x)^-1 dx.

    Evaluated in the eigenbasis of s: the integral over x in [0, inf)
    contributes the inverse logarithmic mean (ln s_i - ln s_j)/(s_i - s_j)
    to the (i, j) entry, with the diagonal limit 1/s_i. Requires s to be
    positive definite; r and t only need to be PSD.
    """
    _psd_eig(r, "lieb triple r")
    _psd_eig(t, "lieb triple t")
    ws, qs, tau = _psd_eig(s, "lieb triple s")
    if ws[0] <= tau:
        raise SingularMatrixError(f"middle operand is singular (min eigenvalue {ws[0]:.3e})")
    rr = dagger(qs) @ np.asarray(r, dtype=complex) @ qs
    tt = dagger(qs) @ np.asarray(t, dtype=complex) @ qs
    si = ws[:, None]
    sj = ws[None, :]
    diff = si - sj
    close = np.abs(diff) <= 1e-12 * np.maximum(si, sj)
    safe = np.where(close, 1.0, diff)
    weights = np.where(close, 2.0 / (si + sj), (np.log(si) - np.log(sj)) / safe)
    return float(np.sum(rr * tt.T * weights).real)


def audenaert_gap(m, n, t: float) -> float:
    """Audenaert gap Tr[m^t n^(1-t)] - (Tr m + Tr n - ||m - n||_1) / 2.

    Nonnegative for PSD m, n and t in [0, 1]. Powers are support
    restricted, so t = 0 and t = 1 use the support projector of the
    corresponding operand.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"exponent must lie in [0, 1], got {t}")
    term = float(np.trace(mat_power(m, t) @ mat_power(n, 1.0 - t)).real)
    mm = require_hermitian(m)
    nn = require_hermitian(n)
    _same_dim(mm, nn)
    overlap = 0.5 * float((np.trace(mm) + np.trace(nn)).real - trace_norm(mm - nn))
    return term - overlap


def powers_stormer_sandwich(m, n) -> tuple[float, float, float]:
    """Return (||m - n||_1^2 / 4, ||sqrt(m) - sqrt(n)||_2^2, ||m - n||_1).

    For unit-trace PSD operands the three values are ascending, which is
    the two-sided Powers-Stormer estimate.
    """
    mm = require_hermitian(m)
    nn = require_hermitian(n)
    _same_dim(mm, nn)
    d1 = trace_norm(mm - nn)
    mid = hs_norm(mat_sqrt(mm) - mat_sqrt(nn)) ** 2
    return (0.25 * d1 * d1, mid, d1)
