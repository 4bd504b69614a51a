import numpy as np
import pytest

from cartpend import (
    SingularMatrixError,
    UnpairedRootError,
    canonical_transform,
    char_poly,
    inverse,
    mat_exp,
    poly_from_roots,
    rank,
)
from oracles import char_poly_cofactor, poly_from_roots_convolution


class TestCharPoly:
    def test_zero_matrix(self):
        np.testing.assert_allclose(char_poly(np.zeros((2, 2))), [1, 0, 0], atol=1e-15)

    def test_pendulum_matrix(self, sys_c):
        # s^4 + s^3 - 11.65 s^2 - 11.65 s, confirmed by the cofactor oracle
        expected = np.array([1.0, 1.0, -11.65, -11.65, 0.0])
        got = char_poly(sys_c.A)
        np.testing.assert_allclose(got, expected, atol=1e-9)
        np.testing.assert_allclose(got, char_poly_cofactor(sys_c.A), atol=1e-9)

    def test_diagonal(self):
        np.testing.assert_allclose(char_poly(np.diag([-2.0, -4.0])), [1, 6, 8], atol=1e-12)

    def test_non_square_rejected(self):
        with pytest.raises(ValueError, match="square"):
            char_poly(np.zeros((2, 3)))

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError, match="finite"):
            char_poly([[np.nan, 0], [0, 1]])

    def test_dimension_cap(self):
        with pytest.raises(ValueError, match="maximum"):
            char_poly(np.eye(9))

    def test_matches_cofactor_oracle_on_random_integer_matrices(self):
        rng = np.random.RandomState(42)
        for _ in range(60):
            n = rng.randint(2, 5)
            A = rng.randint(-5, 6, size=(n, n)).astype(float)
            np.testing.assert_allclose(
                char_poly(A), char_poly_cofactor(A), atol=1e-9, rtol=0
            )

    def test_roots_reproduce_triangular_eigenvalues(self):
        rng = np.random.RandomState(7)
        for _ in range(20):
            n = rng.randint(2, 5)
            diag = rng.uniform(-3, 3, n)
            A = np.triu(rng.randn(n, n), 1) + np.diag(diag)
            roots = np.sort(np.roots(char_poly(A)).real)
            np.testing.assert_allclose(roots, np.sort(diag), atol=1e-8)


class TestPolyFromRoots:
    def test_reference_pole_set(self, poles):
        expected = np.array([1.0, 12.0, 53.25, 103.5, 74.0])
        got = poly_from_roots(poles)
        np.testing.assert_allclose(got, expected, atol=1e-12)
        np.testing.assert_allclose(got, poly_from_roots_convolution(poles), atol=1e-12)

    def test_double_zero_root(self):
        np.testing.assert_allclose(poly_from_roots([0, 0]), [1, 0, 0], atol=0)

    def test_unpaired_complex_root_rejected(self):
        with pytest.raises(UnpairedRootError):
            poly_from_roots([-1 + 2j])

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            poly_from_roots([])


class TestMatExp:
    def test_zero_is_identity(self):
        np.testing.assert_array_equal(mat_exp(np.zeros((3, 3))), np.eye(3))

    def test_diagonal(self):
        got = mat_exp(np.diag([1.0, -1.0]))
        expected = np.diag([np.e, 1.0 / np.e])
        np.testing.assert_allclose(got, expected, rtol=1e-12)

    def test_nilpotent(self):
        got = mat_exp(np.array([[0.0, 1.0], [0.0, 0.0]]))
        np.testing.assert_allclose(got, [[1, 1], [0, 1]], atol=1e-15)

    def test_semigroup_on_random_stable_matrices(self):
        rng = np.random.RandomState(5)
        for _ in range(20):
            A = rng.randn(4, 4)
            A -= (np.max(np.linalg.eigvals(A).real) + 0.5) * np.eye(4)
            t1, t2 = rng.uniform(0, 1, 2)
            err = np.max(
                np.abs(mat_exp(A * (t1 + t2)) - mat_exp(A * t1) @ mat_exp(A * t2))
            )
            assert err <= 1e-9

    def test_small_step_third_order_remainder(self, sys_c):
        A = sys_c.A

        def remainder(T):
            approx = np.eye(4) + A * T + A @ A * T * T / 2.0
            return np.max(np.abs(mat_exp(A * T) - approx))

        ratio = remainder(1e-2) / remainder(1e-3)
        # cubic leading term: a decade in T scales the remainder by ~1000
        assert 800 <= ratio <= 1250

    def test_overflow_rejected(self):
        with pytest.raises(ValueError, match="non-finite"):
            mat_exp(np.array([[1e4]]))


class TestInverse:
    def test_identity(self):
        np.testing.assert_allclose(inverse(np.eye(3)), np.eye(3), atol=1e-14)

    def test_diagonal(self):
        np.testing.assert_allclose(
            inverse([[2.0, 0.0], [0.0, 4.0]]), [[0.5, 0.0], [0.0, 0.25]], atol=1e-15
        )

    def test_canonical_transform_residual(self, sys_c):
        Phi = canonical_transform(sys_c).Phi
        np.testing.assert_allclose(Phi @ inverse(Phi), np.eye(4), atol=1e-9)

    def test_singular_rejected(self):
        with pytest.raises(SingularMatrixError):
            inverse([[1.0, 2.0], [2.0, 4.0]])

    def test_involution_on_well_conditioned_matrices(self):
        rng = np.random.RandomState(11)
        done = 0
        while done < 30:
            A = rng.randn(4, 4)
            if np.linalg.cond(A) > 100:
                continue
            np.testing.assert_allclose(inverse(inverse(A)), A, atol=1e-8)
            done += 1


class TestRank:
    def test_identity(self):
        assert rank(np.eye(3), 1e-9) == 3

    def test_dependent_rows(self):
        assert rank([[1.0, 2.0], [2.0, 4.0]], 1e-9) == 1

    def test_zero_matrix(self):
        assert rank(np.zeros((3, 3))) == 0

    def test_controllability_matrix_full_rank(self, sys_c):
        from cartpend import controllability_matrix

        assert rank(controllability_matrix(sys_c), 1e-9) == 4

    def test_invariant_under_row_swaps_and_scaling(self):
        rng = np.random.RandomState(3)
        for _ in range(30):
            r = rng.randint(1, 4)
            A = (rng.randint(-3, 4, (4, r)) @ rng.randint(-3, 4, (r, 4))).astype(float)
            base = rank(A)
            perm = rng.permutation(4)
            scales = rng.choice([-2.0, -0.5, 0.5, 1.5, 3.0], size=4)
            assert rank(A[perm] * scales[:, None]) == base

    def test_bad_tolerance_rejected(self):
        with pytest.raises(ValueError):
            rank(np.eye(2), 0.0)
