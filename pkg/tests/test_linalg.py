"""Tests for the dense matrix kernel."""

import numpy as np
import pytest

from conftest import random_hermitian
from utils.utils_basic import InvalidInputError
from utils.utils_linalg import (SIGMA_X, SIGMA_Z, IDENTITY_2, hermitian_eigenvalues, is_psd, kron,
                                partial_trace)


class TestKron:
    """Tests for Kronecker products."""

    def test_identity(self):
        """Identity factors give the identity."""
        np.testing.assert_array_equal(kron(IDENTITY_2, IDENTITY_2), np.eye(4))

    def test_sigma_z(self):
        """sigma_Z x 1 is diag(1, 1, -1, -1)."""
        np.testing.assert_array_equal(kron(SIGMA_Z, IDENTITY_2), np.diag([1, 1, -1, -1]))

    def test_two_qubit_bit_flip(self):
        """sigma_X x sigma_X maps basis state m to 3 - m."""
        flip = kron(SIGMA_X, SIGMA_X)
        for m in range(4):
            np.testing.assert_array_equal(flip @ np.eye(4)[m], np.eye(4)[3 - m])

    def test_associative(self, rng):
        """Grouping of the factors does not matter for integer entries."""
        for _ in range(10):
            a, b, c = (rng.integers(-5, 6, size=(2, 2)) + 1j * rng.integers(-5, 6, size=(2, 2)) for _ in range(3))
            np.testing.assert_array_equal(kron(kron(a, b), c), kron(a, kron(b, c)))

    def test_result_is_read_only(self):
        """Returned matrices cannot be modified in place."""
        m = kron(IDENTITY_2, IDENTITY_2)
        with pytest.raises(ValueError):
            m[0, 0] = 2


class TestPartialTrace:
    """Tests for partial traces."""

    def test_identity(self):
        """Tracing two qubits out of the 3-qubit identity gives 4 I."""
        np.testing.assert_allclose(partial_trace(np.eye(8), [2, 2, 2], keep={2}), 4 * np.eye(2))

    def test_product_state(self):
        """Product state reduces to its factor."""
        ket = np.zeros(4)
        ket[0] = 1
        np.testing.assert_allclose(partial_trace(np.outer(ket, ket), [2, 2], keep={0}), np.diag([1, 0]))

    def test_bell_state(self):
        """A maximally entangled state reduces to I/2."""
        bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
        np.testing.assert_allclose(partial_trace(np.outer(bell, bell), [2, 2], keep={0}), np.eye(2) / 2, atol=1e-15)

    def test_product_operator(self, rng):
        """Tr_2 (A x B) = A Tr B."""
        a, b = random_hermitian(rng, 2), random_hermitian(rng, 4)
        np.testing.assert_allclose(partial_trace(kron(a, b), [2, 4], keep={0}), a * np.trace(b), atol=1e-12)
        np.testing.assert_allclose(partial_trace(kron(a, b), [2, 4], keep={1}), b * np.trace(a), atol=1e-12)

    def test_trace_preserved(self, rng):
        """Every reduction keeps the total trace."""
        for _ in range(20):
            m = random_hermitian(rng, 8)
            for keep in ({0}, {1}, {2}, {0, 2}, {1, 2}):
                assert abs(np.trace(partial_trace(m, [2, 2, 2], keep)) - np.trace(m)) <= 1e-12

    def test_empty_keep_is_scalar_trace(self, rng):
        """Keeping nothing gives the 1x1 trace."""
        m = random_hermitian(rng, 8)
        reduced = partial_trace(m, [2, 2, 2], keep=set())
        assert reduced.shape == (1, 1)
        assert abs(reduced[0, 0] - np.trace(m)) <= 1e-12

    def test_dimension_mismatch(self):
        """Sizes that do not multiply to the matrix dimension are rejected."""
        with pytest.raises(InvalidInputError):
            partial_trace(np.eye(8), [2, 2], keep={0})

    def test_keep_out_of_range(self):
        """Keep indices must name existing subsystems."""
        with pytest.raises(InvalidInputError):
            partial_trace(np.eye(4), [2, 2], keep={2})


class TestEigenvalues:
    """Tests for the Jacobi eigenvalue solver."""

    def test_sigma_z(self):
        """sigma_Z has eigenvalues -1 and 1."""
        np.testing.assert_allclose(hermitian_eigenvalues(SIGMA_Z), [-1, 1], atol=1e-14)

    def test_identity(self):
        """The 8x8 identity has eight unit eigenvalues."""
        np.testing.assert_allclose(hermitian_eigenvalues(np.eye(8)), np.ones(8), atol=1e-14)

    def test_two_by_two(self):
        """[[2, 1], [1, 2]] has eigenvalues 1 and 3."""
        np.testing.assert_allclose(hermitian_eigenvalues(np.array([[2.0, 1.0], [1.0, 2.0]])), [1, 3], atol=1e-13)

    def test_matches_reference_solver(self, rng):
        """Complex Hermitian spectra agree with LAPACK."""
        for dim in (2, 3, 4, 8):
            m = random_hermitian(rng, dim)
            np.testing.assert_allclose(hermitian_eigenvalues(m), np.linalg.eigvalsh(m), atol=1e-10)

    def test_sum_and_product(self, rng):
        """Eigenvalues sum to the trace and multiply to the determinant."""
        for _ in range(20):
            m = random_hermitian(rng, 4)
            values = hermitian_eigenvalues(m)
            assert abs(values.sum() - np.trace(m).real) <= 1e-10
            assert abs(np.prod(values) - np.linalg.det(m).real) <= 1e-8

    def test_ascending(self, rng):
        """Eigenvalues come sorted."""
        values = hermitian_eigenvalues(random_hermitian(rng, 8))
        assert np.all(np.diff(values) >= 0)

    def test_tiny_off_diagonal(self):
        """An off-diagonal entry far below the diagonal gap rotates without overflow."""
        m = np.array([[0.0, 1e-200, 0.0], [1e-200, 1.0, 0.5], [0.0, 0.5, 1.0]])
        with np.errstate(over="raise", invalid="raise"):
            values = hermitian_eigenvalues(m)
        np.testing.assert_allclose(values, [0.0, 0.5, 1.5], atol=1e-14)

    def test_non_hermitian(self):
        """Non-Hermitian input is rejected."""
        with pytest.raises(InvalidInputError):
            hermitian_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestIsPsd:
    """Tests for positivity checks."""

    def test_identity(self):
        """The identity is positive."""
        assert is_psd(np.eye(2), 1e-9)

    def test_sigma_z(self):
        """sigma_Z is not positive."""
        assert not is_psd(SIGMA_Z, 1e-9)

    def test_zero_matrix(self):
        """The zero matrix sits on the boundary and counts as positive."""
        assert is_psd(np.zeros((2, 2)), 1e-9)

    def test_non_hermitian(self):
        """Non-Hermitian input is rejected."""
        with pytest.raises(InvalidInputError):
            is_psd(np.array([[1.0, 1.0], [0.0, 1.0]]), 1e-9)
