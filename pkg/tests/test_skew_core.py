import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import random_normal_antisymmetric, random_skew
from skewlab.errors import NotAntisymmetric, NotNormal, NotSquare
from skewlab.skew_core import (
    canonical_matrix,
    characteristic,
    eigen_skew,
    from_text,
    gauge_phases,
    reconstruct,
    same_class,
    spectral_pairs,
    to_text,
    validate_antisymmetric,
    validate_skew,
)


class TestValidateSkew:
    def test_exact_skew_is_unchanged(self):
        M = np.array([[0.0, 1.0], [-1.0, 0.0]])
        S = validate_skew(M)
        np.testing.assert_array_equal(S.entries, M)

    def test_tiny_asymmetry_is_symmetrised(self):
        M = np.array([[0.0, 1.0], [-1.0 + 1e-16, 0.0]])
        S = validate_skew(M, tol=1e-12)
        np.testing.assert_array_equal(S.entries, -S.entries.T)

    def test_symmetric_rejected(self):
        with pytest.raises(NotAntisymmetric):
            validate_skew(np.array([[0.0, 1.0], [1.0, 0.0]]))

    def test_not_square(self):
        with pytest.raises(NotSquare):
            validate_skew(np.zeros((2, 3)))

    def test_result_is_read_only(self):
        S = validate_skew(np.array([[0.0, 1.0], [-1.0, 0.0]]))
        with pytest.raises(ValueError):
            S.entries[0, 1] = 3.0


class TestEigenSkew:
    def test_two_by_two(self):
        pairs, _ = eigen_skew(np.array([[0.0, 0.5], [-0.5, 0.0]]))
        np.testing.assert_allclose(pairs.eps, [0.5], atol=1e-15)
        assert pairs.zero_modes == 0

    def test_tridiagonal_three(self):
        M = np.array([[0.0, 1.0, 0.0], [-1.0, 0.0, 1.0], [0.0, -1.0, 0.0]])
        pairs, _ = eigen_skew(M)
        np.testing.assert_allclose(pairs.eps, [np.sqrt(2)], atol=1e-14)
        assert pairs.zero_modes == 1

    def test_matches_svd(self, rng):
        M = random_skew(rng, 8)
        pairs, _ = eigen_skew(M)
        sv = np.linalg.svd(M, compute_uv=False)
        # singular values of a real skew matrix come in equal pairs
        np.testing.assert_allclose(pairs.eps, sv[::2], atol=1e-10)

    @pytest.mark.parametrize("n", [2, 5, 16, 33])
    def test_unitary_diagonalises(self, rng, n):
        M = random_skew(rng, n)
        pairs, U = eigen_skew(M)
        np.testing.assert_allclose(U.conj().T @ U, np.eye(n), atol=1e-12)
        D = U.conj().T @ M @ U
        expected = []
        for e in pairs.eps:
            expected += [1j * e, -1j * e]
        expected += [0] * pairs.zero_modes
        np.testing.assert_allclose(D, np.diag(expected), atol=1e-12 * np.linalg.norm(M, 2))

    def test_eigenvalue_only_path_agrees(self, rng):
        M = random_skew(rng, 20)
        np.testing.assert_allclose(spectral_pairs(M).eps, eigen_skew(M)[0].eps, atol=1e-13)

    def test_degenerate_structured_input(self):
        # block diagonal with repeated eps: degeneracies must still pair up
        E = canonical_matrix([2.0, 2.0, 1.0], 7).entries
        Q, _ = np.linalg.qr(np.random.default_rng(1).standard_normal((7, 7)))
        pairs, _ = eigen_skew(Q @ E @ Q.T)
        np.testing.assert_allclose(pairs.eps, [2.0, 2.0, 1.0], atol=1e-13)
        assert pairs.zero_modes == 1

    @settings(max_examples=40, deadline=None)
    @given(arrays(np.float64, (6, 6), elements=st.floats(-5, 5, allow_subnormal=False)))
    def test_pairing_property(self, B):
        M = B - B.T
        pairs = spectral_pairs(M)
        assert 2 * len(pairs.eps) + pairs.zero_modes == 6
        assert np.all(pairs.eps > 0)
        assert np.all(np.diff(pairs.eps) <= 0)


class TestRankEvenness:
    @pytest.mark.parametrize("n,r", [(10, 1), (10, 3), (11, 2), (30, 7)])
    def test_nonzero_count_is_half_rank(self, rng, n, r):
        X = rng.standard_normal((n, r))
        Y = rng.standard_normal((n, r))
        M = X @ Y.T - Y @ X.T
        rank = np.linalg.matrix_rank(M)
        pairs = spectral_pairs(M)
        assert rank % 2 == 0
        assert len(pairs.eps) == rank // 2


class TestGaugePhases:
    def test_real_rotation_has_zero_phase(self):
        np.testing.assert_allclose(gauge_phases(np.array([[0.0, 1.0], [-1.0, 0.0]])).phases, [0.0])

    def test_imaginary_entries(self):
        M = np.array([[0, 1j], [-1j, 0]])
        # eigenvalues are +-1 and 1 = i * exp(-i pi/2)
        lam = np.linalg.eigvals(M)
        np.testing.assert_allclose(np.sort(lam.real), [-1, 1])
        np.testing.assert_allclose(gauge_phases(M).phases, [-np.pi / 2], atol=1e-12)

    def test_zero_matrix(self):
        assert len(gauge_phases(np.zeros((3, 3))).phases) == 0

    def test_real_skew_all_zero(self, rng):
        np.testing.assert_allclose(gauge_phases(random_skew(rng, 9)).phases, 0.0)

    def test_phase_reproduces_eigenvalue(self, rng):
        M = random_normal_antisymmetric(rng, 6)
        ph = gauge_phases(M).phases
        char, _ = characteristic(M)
        lam = 1j * char.eps * np.exp(1j * ph)
        ev = np.linalg.eigvals(M)
        for z in lam:
            assert np.min(np.abs(ev - z)) < 1e-10
        assert np.all((ph >= -np.pi / 2 - 1e-9) & (ph < np.pi / 2))

    def test_non_normal_rejected(self):
        M = np.array([[0, 1, 1j], [-1, 0, 0], [-1j, 0, 0]])
        with pytest.raises(NotNormal):
            gauge_phases(M)


class TestCharacteristic:
    def test_already_canonical(self):
        M = np.array([[0.0, 2.0], [-2.0, 0.0]])
        char, U = characteristic(M)
        np.testing.assert_array_equal(char.canonical.entries, M)
        assert np.abs(reconstruct(char, U) - M).max() <= 1e-12

    def test_phase_stripped(self):
        M = np.array([[0, 1j], [-1j, 0]])
        char, U = characteristic(M)
        np.testing.assert_allclose(char.canonical.entries, [[0, 1], [-1, 0]], atol=1e-15)
        assert np.abs(reconstruct(char, U) - M).max() <= 1e-12
        np.testing.assert_allclose(U.conj().T @ U, np.eye(2), atol=1e-15)

    def test_zero_matrix(self):
        char, U = characteristic(np.zeros((3, 3)))
        np.testing.assert_array_equal(char.canonical.entries, np.zeros((3, 3)))
        assert len(char.eps) == 0

    @pytest.mark.parametrize("n", [4, 7, 20])
    def test_real_input_gives_orthogonal_factor(self, rng, n):
        M = random_skew(rng, n)
        char, U = characteristic(M)
        assert U.dtype == np.float64
        np.testing.assert_allclose(U.T @ U, np.eye(n), atol=1e-12)
        # U real: congruence and similarity coincide
        np.testing.assert_allclose(U @ char.canonical.entries @ U.conj().T, M, atol=1e-12)

    @pytest.mark.parametrize("n", [2, 5, 12, 31])
    def test_complex_reconstruction(self, rng, n):
        M = random_normal_antisymmetric(rng, n)
        char, U = characteristic(M)
        np.testing.assert_allclose(U.conj().T @ U, np.eye(n), atol=1e-12)
        err = np.linalg.norm(reconstruct(char, U) - M, 2)
        assert err <= 1e-10 * np.linalg.norm(M, 2)

    def test_idempotent(self, rng):
        char, _ = characteristic(random_normal_antisymmetric(rng, 9))
        again, U = characteristic(char.canonical)
        np.testing.assert_array_equal(again.eps, char.eps)
        np.testing.assert_array_equal(U, np.eye(9))

    def test_eps_are_singular_values(self, rng):
        M = random_normal_antisymmetric(rng, 10)
        char, _ = characteristic(M)
        np.testing.assert_allclose(char.eps, np.linalg.svd(M, compute_uv=False)[::2], atol=1e-12)


class TestSameClass:
    def test_orthogonal_conjugation(self, rng):
        M = random_normal_antisymmetric(rng, 8)
        Q, _ = np.linalg.qr(rng.standard_normal((8, 8)))
        assert same_class(M, Q @ M @ Q.conj().T)

    def test_distinct_eps(self):
        assert not same_class(np.array([[0.0, 1.0], [-1.0, 0.0]]), np.array([[0.0, 2.0], [-2.0, 0.0]]))

    def test_complex_conjugate(self, rng):
        M = random_normal_antisymmetric(rng, 8)
        assert same_class(M, M.conj())

    def test_size_mismatch(self):
        assert not same_class(np.zeros((2, 2)), np.zeros((3, 3)))


class TestValidateAntisymmetric:
    def test_transpose_not_conjugate(self):
        # Hermitian-antisymmetric (M^H = -M) is not transpose antisymmetric
        with pytest.raises(NotAntisymmetric):
            validate_antisymmetric(np.array([[1j, 1], [-1, 0]]))

    def test_normal_admitted(self, rng):
        A = validate_antisymmetric(random_normal_antisymmetric(rng, 6))
        assert A.normal and A.n == 6


def test_text_round_trip(rng):
    M = random_skew(rng, 5)
    np.testing.assert_array_equal(from_text(to_text(M)), M)
