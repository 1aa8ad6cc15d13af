# tests/test_models/test_sketch.py

"""
Tests para SketchMatrix, DiscreteDistribution y SamplerSpec
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from core.errors import AnalysisUnavailableError, ContractViolation, NumericalError
from models.sketch import (
    DiscreteDistribution,
    SamplerKind,
    SamplerSpec,
    SketchMatrix,
    row_norm_probabilities,
)


@pytest.mark.unit
class TestSketchMatrix:
    """Suite de tests para SketchMatrix"""

    def test_coordinate_entries(self):
        S = SketchMatrix.coordinate(3, 1)
        assert S.q == 1
        assert_allclose(S.entries, [[0.0], [1.0], [0.0]])

    def test_block_sorts_rows(self):
        S = SketchMatrix.block(4, [3, 0])
        assert list(S.rows) == [0, 3]
        assert_allclose(S.entries, [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 1.0]])

    def test_signed_selection_matches_dense(self, rng):
        """Test: S^T M y S V coinciden con la forma densa"""
        S = SketchMatrix(m=5, rows=[4, 1, 4], signs=[1.0, -1.0, -1.0])
        M = rng.standard_normal((5, 3))
        V = rng.standard_normal((3, 2))
        assert_allclose(S.t_dot(M), S.entries.T @ M)
        assert_allclose(S.dot(V), S.entries @ V)
        assert_allclose(S.t_dot(M[:, 0]), S.entries.T @ M[:, 0])
        assert_allclose(S.dot(V[:, 0]), S.entries @ V[:, 0])

    def test_repeated_rows_accumulate(self):
        """Test: count-min con la misma fila dos veces"""
        S = SketchMatrix(m=3, rows=[2, 2])
        assert_allclose(S.dot(np.array([1.0, 2.0])), [0.0, 0.0, 3.0])

    def test_dense(self, rng):
        entries = rng.standard_normal((4, 2))
        S = SketchMatrix.from_dense(entries)
        assert not S.is_selection
        assert S.q == 2
        assert_allclose(S.t_dot(np.eye(4)), entries.T)

    def test_dense_vector_is_column(self):
        S = SketchMatrix.from_dense([1.0, 2.0, 3.0])
        assert S.entries.shape == (3, 1)

    def test_row_out_of_range(self):
        with pytest.raises(ContractViolation):
            SketchMatrix.coordinate(3, 3)

    def test_needs_rows_or_dense(self):
        with pytest.raises(ContractViolation):
            SketchMatrix(m=3)

    def test_operand_rows_mismatch(self):
        with pytest.raises(ContractViolation):
            SketchMatrix.coordinate(3, 0).t_dot(np.ones(4))


@pytest.mark.unit
class TestDiscreteDistribution:
    """Suite de tests para DiscreteDistribution"""

    def test_coordinate_skips_zero_probabilities(self):
        dist = DiscreteDistribution.coordinate([0.5, 0.0, 0.5])
        assert dist.r == 2
        assert [int(S.rows[0]) for S in dist.sketches] == [0, 2]

    def test_probabilities_must_sum_to_one(self):
        with pytest.raises(ContractViolation, match="sum"):
            DiscreteDistribution.coordinate([0.5, 0.6])

    def test_negative_probability(self):
        with pytest.raises(ContractViolation):
            DiscreteDistribution.coordinate([1.5, -0.5])

    def test_empty_support(self):
        with pytest.raises(ContractViolation, match="empty"):
            DiscreteDistribution([])

    def test_mixed_row_counts(self):
        with pytest.raises(ContractViolation):
            DiscreteDistribution([
                (SketchMatrix.coordinate(2, 0), 0.5),
                (SketchMatrix.coordinate(3, 0), 0.5)
            ])

    def test_row_norm(self):
        """Test: p_i = ‖A_i:‖² / ‖A‖²_F"""
        A = np.array([[3.0, 4.0], [0.0, 5.0], [1.0, 0.0]])
        assert_allclose(row_norm_probabilities(A), np.array([25.0, 25.0, 1.0]) / 51.0)

    def test_row_norm_zero_row(self):
        with pytest.raises(NumericalError, match="zero row"):
            DiscreteDistribution.row_norm(np.array([[1.0, 0.0], [0.0, 0.0]]))

    def test_diagonal(self):
        dist = DiscreteDistribution.diagonal(np.diag([1.0, 3.0]))
        assert_allclose(dist.probabilities, [0.25, 0.75])

    def test_all_blocks_of_size(self):
        dist = DiscreteDistribution.all_blocks_of_size(4, 2)
        assert dist.r == 6
        assert_allclose(dist.probabilities, np.full(6, 1.0 / 6.0))

    def test_all_blocks_too_many(self):
        with pytest.raises(ContractViolation, match="too many"):
            DiscreteDistribution.all_blocks_of_size(60, 5)

    def test_permuted(self):
        dist = DiscreteDistribution.coordinate([0.2, 0.8])
        flipped = dist.permuted([1, 0])
        assert_allclose(flipped.probabilities, [0.8, 0.2])


@pytest.mark.unit
class TestSamplerSpec:
    """Suite de tests para SamplerSpec"""

    def test_coordinate_is_finite(self):
        spec = SamplerSpec.uniform_coordinate(3)
        assert spec.is_finite
        assert spec.to_distribution().r == 3

    def test_coordinate_length_mismatch(self):
        spec = SamplerSpec(kind=SamplerKind.COORDINATE, m=4, probabilities=np.full(3, 1 / 3))
        with pytest.raises(ContractViolation):
            spec.validate()

    def test_improper_block_family(self):
        """Test: el índice 2 nunca aparece"""
        spec = SamplerSpec(kind=SamplerKind.BLOCK, m=3, subsets=[[0], [1]])
        with pytest.raises(ContractViolation, match="not proper"):
            spec.validate()

    def test_block_family(self):
        spec = SamplerSpec(kind=SamplerKind.BLOCK, m=3, subsets=[[0, 1], [2]],
                           subset_probabilities=[0.25, 0.75])
        dist = spec.to_distribution()
        assert_allclose(dist.probabilities, [0.25, 0.75])

    def test_block_size_out_of_range(self):
        with pytest.raises(ContractViolation):
            SamplerSpec(kind=SamplerKind.BLOCK, m=3, block_size=4).validate()

    def test_gaussian_not_finite(self):
        spec = SamplerSpec(kind=SamplerKind.GAUSSIAN, m=3, q=2)
        spec.validate()
        assert not spec.is_finite
        with pytest.raises(AnalysisUnavailableError):
            spec.to_distribution()

    def test_q_must_be_positive(self):
        with pytest.raises(ContractViolation):
            SamplerSpec(kind=SamplerKind.COUNT_SKETCH, m=3, q=0).validate()

    def test_from_distribution(self):
        spec = SamplerSpec.from_distribution(DiscreteDistribution.all_blocks_of_size(3, 2))
        assert spec.kind == SamplerKind.BLOCK
        assert spec.subsets == [[0, 1], [0, 2], [1, 2]]

    def test_from_signed_distribution_rejected(self):
        dist = DiscreteDistribution.single(SketchMatrix(m=2, rows=[0], signs=[-1.0]))
        with pytest.raises(ContractViolation):
            SamplerSpec.from_distribution(dist)

    def test_to_dict(self):
        data = SamplerSpec(kind=SamplerKind.GAUSSIAN, m=3, q=2).to_dict()
        assert data['kind'] == 'gaussian'
        assert data['q'] == 2
