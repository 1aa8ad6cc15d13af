# tests/test_core/test_linalg.py

"""
Tests para las primitivas de álgebra lineal
"""

import numpy as np
import pytest
import scipy.linalg as la
from numpy.testing import assert_allclose

from core.errors import ContractViolation, NumericalError
from core.linalg import (
    b_norm,
    decompose,
    lambda_min_plus,
    least_norm_solve,
    numerical_rank,
    pinv,
    projector,
)
from models.problem import ProjectionProblem, SpdMatrix


@pytest.mark.unit
class TestPseudoinverse:
    """Suite de tests para pinv y least_norm_solve"""

    def test_pinv_penrose_conditions(self, rng):
        """Test: M M^† M = M y M^† M M^† = M^†"""
        M = rng.standard_normal((6, 2)) @ rng.standard_normal((2, 5))
        P = pinv(M)
        assert_allclose(M @ P @ M, M, atol=1e-10)
        assert_allclose(P @ M @ P, P, atol=1e-10)

    def test_pinv_of_invertible(self, random_spd):
        M = random_spd(4, seed=8)
        assert_allclose(pinv(M), np.linalg.inv(M), rtol=1e-9)

    def test_pinv_of_zero(self):
        """Test: la pseudoinversa de la matriz nula es nula"""
        assert_allclose(pinv(np.zeros((3, 2))), np.zeros((2, 3)))

    def test_least_norm_solution_in_range(self):
        """Test: M = [[1,1],[1,1]], d = (2,2) → λ = (1,1)"""
        M = np.array([[1.0, 1.0], [1.0, 1.0]])
        assert_allclose(least_norm_solve(M, [2.0, 2.0]), [1.0, 1.0], atol=1e-12)

    def test_least_norm_solve_inconsistent(self):
        """Test: d fuera de Range(M) da el minimizador de norma mínima"""
        M = np.diag([2.0, 0.0])
        assert_allclose(least_norm_solve(M, [4.0, 7.0]), [2.0, 0.0], atol=1e-12)

    def test_least_norm_solve_dimension_mismatch(self):
        with pytest.raises(ContractViolation, match="dimension mismatch"):
            least_norm_solve(np.eye(3), np.ones(2))

    def test_least_norm_solve_requires_square(self):
        with pytest.raises(ContractViolation, match="square"):
            least_norm_solve(np.ones((2, 3)), np.ones(2))


@pytest.mark.unit
class TestRankAndEigenvalues:
    """Suite de tests para numerical_rank y lambda_min_plus"""

    def test_rank_of_low_rank_product(self, rng):
        M = rng.standard_normal((8, 3)) @ rng.standard_normal((3, 8))
        assert numerical_rank(M) == 3

    def test_rank_of_zero(self):
        assert numerical_rank(np.zeros((3, 3))) == 0

    def test_lambda_min_plus_skips_zero(self):
        """Test: diag(0, 2, 5) → 2"""
        assert lambda_min_plus(np.diag([0.0, 2.0, 5.0])) == pytest.approx(2.0)

    def test_lambda_min_plus_of_projector(self):
        """Test: proyector de rango 1 → 1"""
        v = np.array([1.0, 1.0]) / np.sqrt(2.0)
        assert lambda_min_plus(np.outer(v, v)) == pytest.approx(1.0)

    def test_lambda_min_plus_of_zero(self):
        with pytest.raises(NumericalError, match="zero matrix"):
            lambda_min_plus(np.zeros((2, 2)))


@pytest.mark.unit
class TestBNorm:
    """Suite de tests para b_norm"""

    def test_identity_is_euclidean(self):
        """Test: ‖(3, 4)‖_I = 5"""
        assert b_norm([3.0, 4.0], SpdMatrix.identity(2)) == pytest.approx(5.0)

    def test_weighted_norm(self):
        """Test: B = diag(1, 4), x = (1, 1) → √5"""
        assert b_norm([1.0, 1.0], np.diag([1.0, 4.0])) == pytest.approx(np.sqrt(5.0))

    def test_dimension_mismatch(self):
        with pytest.raises(ContractViolation):
            b_norm(np.ones(3), SpdMatrix.identity(2))

    def test_dimension_mismatch_dense(self):
        with pytest.raises(ContractViolation):
            b_norm(np.ones(3), np.eye(2))


@pytest.mark.unit
class TestProjector:
    """Suite de tests para projector y decompose"""

    def test_trace_equals_rank(self, random_problem):
        """Test: Tr(B^{-1} Z_A) = rank(A)"""
        problem = random_problem(6, 5, rank=3, seed=2, general_B=True)
        assert projector(problem).trace() == pytest.approx(3.0, abs=1e-8)

    def test_range_map_is_idempotent(self, random_problem):
        problem = random_problem(4, 6, seed=3, general_B=True)
        P = projector(problem).range_map
        assert_allclose(P @ P, P, atol=1e-9)

    def test_null_map_annihilated_by_A(self, random_problem):
        problem = random_problem(3, 5, seed=4)
        N = projector(problem).null_map
        assert_allclose(problem.A @ N, np.zeros((3, 5)), atol=1e-9)

    def test_decompose_identity_system(self):
        """Test: A = I ⇒ s = x, t = 0"""
        problem = ProjectionProblem.create(np.eye(3))
        x = np.array([1.0, -2.0, 0.5])
        parts = decompose(x, problem)
        assert_allclose(parts.s, x, atol=1e-12)
        assert_allclose(parts.t, np.zeros(3), atol=1e-12)

    def test_decompose_components(self, random_problem):
        """Test: t ∈ Null(A), s ⊥_B t, s + t = x"""
        problem = random_problem(3, 6, rank=2, seed=6, general_B=True)
        x = np.arange(1.0, 7.0)
        parts = decompose(x, problem)
        assert_allclose(parts.reconstruct(), x, atol=1e-12)
        assert_allclose(problem.A @ parts.t, np.zeros(3), atol=1e-8)
        inner = parts.s @ problem.B.entries @ parts.t
        assert abs(inner) < 1e-8 * (1.0 + b_norm(x, problem.B) ** 2)

    def test_decompose_wrong_length(self, identity_problem):
        with pytest.raises(ContractViolation):
            decompose(np.ones(3), identity_problem)

    def test_projector_single_row(self):
        """Test: A = [1 1], B = I → Z = ½[[1, 1], [1, 1]]"""
        problem = ProjectionProblem.create(np.array([[1.0, 1.0]]))
        assert_allclose(projector(problem).Z, 0.5 * np.ones((2, 2)), atol=1e-14)

    def test_decompose_weighted_single_row(self):
        """Test: x = (1, 0), A = [1 1], B = diag(1, 4) → s = (4/5, 1/5)"""
        problem = ProjectionProblem.create(np.array([[1.0, 1.0]]), B=np.diag([1.0, 4.0]))
        parts = decompose([1.0, 0.0], problem)
        assert_allclose(parts.s, [0.8, 0.2], atol=1e-14)
        assert_allclose(parts.t, [0.2, -0.2], atol=1e-14)


def rank_with_tolerance(M, rel=1e-9):
    """Rango con umbral relativo holgado, independiente del umbral compartido"""
    norm = np.linalg.norm(M, 2)
    return 0 if norm == 0 else int(np.linalg.matrix_rank(M, tol=rel * norm))


@pytest.mark.unit
class TestGramSpaces:
    """Suite de tests para W^T G W con G SPD: mismos espacios y cota por λ_min^+"""

    def random_instance(self, generator):
        rows = int(generator.integers(2, 7))
        cols = int(generator.integers(1, 6))
        rank = int(generator.integers(1, min(rows, cols) + 1))
        W = generator.standard_normal((rows, rank)) @ generator.standard_normal((rank, cols))
        M = generator.standard_normal((rows, rows))
        return W, M @ M.T + np.eye(rows)

    def test_null_and_range_are_preserved(self):
        """Test: Null(W) = Null(W^T G W) y Range(W^T) = Range(W^T G W)"""
        generator = np.random.default_rng(31)
        for _ in range(30):
            W, G = self.random_instance(generator)
            WGW = W.T @ G @ W
            scale = np.linalg.norm(WGW, 2)
            assert rank_with_tolerance(WGW) == rank_with_tolerance(W)

            null = la.null_space(W, rcond=1e-9)
            assert_allclose(WGW @ null, np.zeros_like(null), atol=1e-9 * scale)

            basis = la.orth(W.T, rcond=1e-9)
            onto_range = WGW @ np.linalg.pinv(WGW, rcond=1e-9)
            assert_allclose(onto_range @ basis, basis, atol=1e-7)

    def test_lambda_min_plus_inequality(self):
        """Test: y^T W W^T G W W^T y ≥ λ_min^+(W^T G W)·‖W^T y‖² en 100 instancias"""
        generator = np.random.default_rng(32)
        for _ in range(100):
            W, G = self.random_instance(generator)
            y = generator.standard_normal(W.shape[0])
            WGW = W.T @ G @ W
            v = W.T @ y
            lhs = v @ WGW @ v
            rhs = lambda_min_plus(WGW) * (v @ v)
            assert lhs >= rhs * (1.0 - 1e-9) - 1e-12 * max(1.0, abs(lhs))
