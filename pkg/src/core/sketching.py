"""
Análisis exacto de distribuciones discretas finitas

H = E[S (S^T A B^{-1} A^T S)^† S^T] y el test de no singularidad
Range([S_1 S_1^T A, ..., S_r S_r^T A]) = R^m.
"""

import logging
from typing import Tuple, Union

import numpy as np
import scipy.linalg as la

from core.errors import AnalysisUnavailableError, ContractViolation
from core.linalg import numerical_rank, pinv, rank_threshold
from models.problem import ProjectionProblem
from models.sketch import DiscreteDistribution, SamplerSpec, SketchMatrix
from samplers.base_sampler import BaseSampler


logger = logging.getLogger('SDAKit.Sketching')

DistributionLike = Union[DiscreteDistribution, SamplerSpec, BaseSampler]


def as_distribution(dist: DistributionLike) -> DiscreteDistribution:
    """
    Obtiene el soporte finito de una distribución, especificación o sampler

    Raises:
        AnalysisUnavailableError: para samplers gaussianos / count-sketch /
            bloques sin familia explícita
    """
    if isinstance(dist, DiscreteDistribution):
        return dist
    if isinstance(dist, SamplerSpec):
        return dist.to_distribution()
    if isinstance(dist, BaseSampler):
        return dist.support()
    raise AnalysisUnavailableError(type(dist).__name__)


def sketched_gram(S: SketchMatrix, problem: ProjectionProblem) -> np.ndarray:
    """S^T A B^{-1} A^T S (q x q)"""
    GS = S.t_dot(problem.gram).T
    inner = S.t_dot(GS)
    return 0.5 * (inner + inner.T)


def compute_H(dist: DistributionLike, problem: ProjectionProblem) -> np.ndarray:
    """
    H = Σ_i p_i S_i (S_i^T A B^{-1} A^T S_i)^† S_i^T

    Args:
        dist: Distribución discreta finita
        problem: Problema de proyección

    Returns:
        np.ndarray: Matriz m x m simétrica semidefinida positiva
    """
    dist = as_distribution(dist)
    if dist.m != problem.m:
        raise ContractViolation(f"sketches have {dist.m} rows, A has {problem.m}")

    H = np.zeros((problem.m, problem.m))
    for S, probability in dist.support:
        inner = pinv(sketched_gram(S, problem))
        H += probability * S.dot(S.dot(inner).T)

    return 0.5 * (H + H.T)


def range_basis(S: SketchMatrix, A: np.ndarray) -> np.ndarray:
    """Base ortonormal (en R^q, llevada a R^m por S) de Range(S S^T A)"""
    W = S.t_dot(A)
    U, s, _ = la.svd(W, full_matrices=False)
    keep = s > rank_threshold(s, W.shape)
    return S.dot(U[:, keep])


def is_H_nonsingular(dist: DistributionLike, problem: ProjectionProblem) -> Tuple[bool, int]:
    """
    Test de no singularidad de H para soportes finitos

    H es no singular si y sólo si Range([S_1 S_1^T A, ..., S_r S_r^T A]) = R^m.
    Cada bloque se reemplaza por una base de su rango, lo que conserva el rango
    de la concatenación y mantiene la matriz de tamaño m x Σ rank(S_i^T A).

    Returns:
        Tuple[bool, int]: (veredicto, rango de la concatenación)
    """
    dist = as_distribution(dist)
    if dist.m != problem.m:
        raise ContractViolation(f"sketches have {dist.m} rows, A has {problem.m}")

    blocks = [range_basis(S, problem.A) for S in dist.sketches]
    blocks = [block for block in blocks if block.shape[1] > 0]
    if not blocks:
        return False, 0

    rank = numerical_rank(np.hstack(blocks))
    verdict = rank == problem.m
    logger.debug(f"Rango de la concatenación: {rank}/{problem.m}")
    return verdict, rank
