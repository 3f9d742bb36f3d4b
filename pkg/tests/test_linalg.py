import numpy as np
import pytest
import scipy.linalg

from qcmi.errors import DimensionMismatchError, NotHermitianError, NotPSDError
from qcmi.linalg import (
    commutator,
    eig_hermitian,
    hs_norm,
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
from oracles import eig2x2

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def random_hermitian(dim, rng):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (g + g.conj().T) / 2.0


class TestEigHermitian:
    def test_identity(self):
        e = eig_hermitian(np.eye(2))
        np.testing.assert_allclose(e.eigenvalues, [1.0, 1.0])

    def test_diagonal_sorted_ascending(self):
        e = eig_hermitian(np.diag([3.0, 1.0]))
        np.testing.assert_allclose(e.eigenvalues, [1.0, 3.0])
        # eigenvectors are the permuted standard basis
        np.testing.assert_allclose(np.abs(e.eigenvectors), [[0.0, 1.0], [1.0, 0.0]], atol=1e-14)

    def test_pauli_x_against_closed_form(self):
        e = eig_hermitian(PAULI_X)
        np.testing.assert_allclose(e.eigenvalues, eig2x2(PAULI_X), atol=1e-14)

    def test_reconstruction_and_unitarity_residuals(self):
        # 500 random Hermitian matrices across dims 2..6
        rng = np.random.default_rng(20240601)
        for i in range(500):
            dim = 2 + i % 5
            m = random_hermitian(dim, rng)
            e = eig_hermitian(m)
            q = e.eigenvectors
            rebuilt = (q * e.eigenvalues) @ q.conj().T
            scale = max(1.0, hs_norm(m))
            assert hs_norm(rebuilt - m) <= 1e-10 * scale
            assert hs_norm(q.conj().T @ q - np.eye(dim)) <= 1e-10
            assert np.all(np.diff(e.eigenvalues) >= 0)

    def test_deterministic_for_fixed_input(self):
        m = random_hermitian(4, np.random.default_rng(7))
        e1 = eig_hermitian(m)
        e2 = eig_hermitian(m.copy())
        np.testing.assert_array_equal(e1.eigenvalues, e2.eigenvalues)
        np.testing.assert_array_equal(e1.eigenvectors, e2.eigenvectors)

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitianError):
            eig_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestMatrixFunctions:
    def test_exp_of_zero_is_identity(self):
        np.testing.assert_allclose(mat_exp(np.zeros((3, 3))), np.eye(3), atol=1e-14)

    def test_sqrt_diagonal(self):
        np.testing.assert_allclose(mat_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-14)

    def test_log_support_convention(self):
        # kernel eigenvalues map to 0, not -inf
        got = mat_log(np.diag([0.5, 0.5, 0.0]))
        np.testing.assert_allclose(got, np.diag([-np.log(2), -np.log(2), 0.0]), atol=1e-14)

    def test_log_exp_roundtrip_on_support(self):
        rng = np.random.default_rng(42)
        for _ in range(20):
            g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            rho = g @ g.conj().T
            rho /= np.trace(rho).real
            assert hs_norm(mat_exp(mat_log(rho)) - rho) <= 1e-9

    def test_matches_scipy_on_full_rank(self):
        rng = np.random.default_rng(3)
        g = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        rho = g @ g.conj().T + 0.1 * np.eye(3)
        np.testing.assert_allclose(mat_log(rho), scipy.linalg.logm(rho), atol=1e-10)
        np.testing.assert_allclose(mat_sqrt(rho), scipy.linalg.sqrtm(rho), atol=1e-10)
        np.testing.assert_allclose(mat_exp(rho), scipy.linalg.expm(rho), atol=1e-8)

    def test_negative_power_is_support_pseudoinverse(self):
        m = np.diag([4.0, 0.0])
        np.testing.assert_allclose(mat_power(m, -0.5), np.diag([0.5, 0.0]), atol=1e-14)

    def test_cpower_unitary_on_support(self):
        rho = np.diag([0.5, 0.25, 0.25])
        u = mat_cpower(rho, 1.0)
        np.testing.assert_allclose(u @ u.conj().T, np.eye(3), atol=1e-12)
        expected = np.diag(np.exp(1j * np.log(np.array([0.5, 0.25, 0.25]))))
        np.testing.assert_allclose(u, expected, atol=1e-12)

    def test_cpower_zero_on_kernel(self):
        u = mat_cpower(np.diag([1.0, 0.0]), 0.7)
        np.testing.assert_allclose(u, np.diag([1.0, 0.0]), atol=1e-14)

    def test_sqrt_rejects_negative(self):
        with pytest.raises(NotPSDError):
            mat_sqrt(np.diag([1.0, -0.5]))

    def test_abs(self):
        np.testing.assert_allclose(mat_abs(np.diag([0.5, -0.5])), np.diag([0.5, 0.5]), atol=1e-14)


class TestNorms:
    def test_trace_norm_diagonal(self):
        assert trace_norm(np.diag([0.25, -0.25])) == pytest.approx(0.5, abs=1e-14)

    def test_trace_norm_zero(self):
        assert trace_norm(np.zeros((2, 2))) == 0.0

    def test_hs_norm_values(self):
        assert hs_norm(np.eye(2)) == pytest.approx(np.sqrt(2), abs=1e-14)
        assert hs_norm(np.diag([3.0, 4.0])) == pytest.approx(5.0, abs=1e-14)
        assert hs_norm(PAULI_X) == pytest.approx(np.sqrt(2), abs=1e-14)

    def test_trace_norm_rejects_non_hermitian(self):
        with pytest.raises(NotHermitianError):
            trace_norm(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestCommutator:
    def test_diagonal_matrices_commute(self):
        c = commutator(np.diag([1.0, 2.0]), np.diag([5.0, -1.0]))
        np.testing.assert_allclose(c, np.zeros((2, 2)), atol=1e-14)

    def test_pauli_x_z(self):
        np.testing.assert_allclose(commutator(PAULI_X, PAULI_Z), -2j * PAULI_Y, atol=1e-14)

    def test_identity_commutes(self):
        m = random_hermitian(3, np.random.default_rng(0))
        np.testing.assert_allclose(commutator(m, np.eye(3)), np.zeros((3, 3)), atol=1e-14)

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            commutator(np.eye(2), np.eye(3))


class TestSupport:
    def test_projector_and_rank(self):
        m = np.diag([0.7, 0.3, 0.0])
        np.testing.assert_allclose(support_projector(m), np.diag([1.0, 1.0, 0.0]), atol=1e-12)
        assert support_rank(m) == 2
        assert support_rank(np.eye(4) / 4) == 4
