"""
Diagnósticos exactos de la tasa de convergencia

ρ = 1 − λ_min^+(B^{-1/2} A^T H A B^{-1/2}), la cota inferior por rango
1 − E[rank(S^T A)]/rank(A) y las especializaciones cerradas (Kaczmarz,
ascenso por coordenadas autodual).
"""

import logging
import math
from typing import Dict, Optional

import numpy as np
import scipy.linalg as la

from core.errors import ContractViolation, NumericalError
from core.linalg import EPS, decompose, lambda_min_plus, numerical_rank
from core.sketching import DistributionLike, as_distribution, compute_H, is_H_nonsingular
from models.problem import ProjectionProblem, SpdMatrix
from models.reports import RateReport
from models.sketch import row_norm_probabilities


logger = logging.getLogger('SDAKit.Rates')


def rate_rho(problem: ProjectionProblem, H: np.ndarray) -> float:
    """
    ρ = 1 − λ_min^+(B^{-1/2} A^T H A B^{-1/2})

    Args:
        problem: Problema de proyección
        H: Matriz m x m simétrica semidefinida positiva

    Returns:
        float: Tasa esperada de contracción de ‖x^k − x* − t‖²_B

    Raises:
        NumericalError: si A^T H A es numéricamente nula
    """
    H = np.asarray(H, dtype=np.float64)
    if H.shape != (problem.m, problem.m):
        raise ContractViolation(f"H is {H.shape}, expected {problem.m}x{problem.m}")

    A = problem.A
    AHA = A.T @ H @ A
    scale = np.linalg.norm(A, 2) ** 2 * np.linalg.norm(H, 2)
    if np.linalg.norm(AHA, 2) <= max(problem.m, problem.n) * EPS * scale:
        raise NumericalError("A^T H A is numerically zero")

    root = problem.B.inv_sqrt()
    W = root @ AHA @ root
    return max(0.0, 1.0 - lambda_min_plus(0.5 * (W + W.T)))


def expected_sketch_rank(dist: DistributionLike, A: np.ndarray) -> float:
    """E[rank(S^T A)] enumerando el soporte finito"""
    dist = as_distribution(dist)
    A = np.asarray(A, dtype=np.float64)
    return float(sum(p * numerical_rank(S.t_dot(A)) for S, p in dist.support))


def rate_lower_bound(dist: DistributionLike, A: np.ndarray) -> float:
    """
    1 − E[rank(S^T A)] / rank(A)

    Raises:
        NumericalError: si rank(A) = 0
    """
    rank_A = numerical_rank(A)
    if rank_A == 0:
        raise NumericalError("rank(A) = 0: lower bound undefined")
    return 1.0 - expected_sketch_rank(dist, A) / rank_A


def rk_rate(A: np.ndarray) -> float:
    """
    Tasa de Kaczmarz aleatorizado con p_i = ‖A_i:‖²/‖A‖²_F y B = I

        ρ = 1 − λ_min^+(A^T A) / ‖A‖²_F

    Raises:
        NumericalError: si A tiene una fila nula
    """
    A = np.asarray(A, dtype=np.float64)
    row_norm_probabilities(A)
    frobenius_sq = float(np.sum(A ** 2))
    return max(0.0, 1.0 - lambda_min_plus(A.T @ A) / frobenius_sq)


def selfdual_rate(A: np.ndarray) -> float:
    """
    Ascenso por coordenadas aleatorizado en el caso autodual (B = A SPD)

        ρ = 1 − λ_min(A) / Tr(A),  con p_i = A_ii / Tr(A)

    Raises:
        NumericalError: si A no es SPD
    """
    spd = SpdMatrix(A)
    values, _ = spd.eigh
    return max(0.0, 1.0 - float(values.min()) / float(np.trace(spd.entries)))


def shift_vector(x0: np.ndarray, problem: ProjectionProblem) -> np.ndarray:
    """t: proyección en norma B de x0 − c sobre Null(A)"""
    x0 = np.asarray(x0, dtype=np.float64).reshape(-1)
    return decompose(x0 - problem.c, problem).t


def operator_b_norm(A: np.ndarray, B: SpdMatrix) -> float:
    """‖A‖_B = max{‖Ax‖ : ‖x‖_B ≤ 1} = σ_max(A B^{-1/2})"""
    A = np.asarray(A, dtype=np.float64)
    if not isinstance(B, SpdMatrix):
        B = SpdMatrix(B)
    return float(la.svd(A @ B.inv_sqrt(), compute_uv=False).max())


def theoretical_bounds(
    rho: float,
    k: int,
    u0: float,
    opt: float,
    e0_sq: float,
    a_norm: Optional[float] = None
) -> Dict[str, float]:
    """
    Lados derechos de las cotas en esperanza tras k iteraciones

    Args:
        rho: Tasa ρ
        k: Iteración
        u0: ½‖x⁰ − x*‖²_B (arranque dual)
        opt: Valor óptimo P(x*)
        e0_sq: ‖x⁰ − x* − t‖²_B
        a_norm: ‖A‖_B; si se da se incluye la cota del residuo

    Returns:
        Dict[str, float]: error, dual_suboptimality, primal_suboptimality, gap
        (y residual)
    """
    decay = rho ** k
    half = rho ** (k / 2.0)
    cross = 2.0 * half * math.sqrt(max(opt * u0, 0.0))
    bounds = {
        'error': decay * e0_sq,
        'dual_suboptimality': decay * u0,
        'primal_suboptimality': decay * u0 + cross,
        'gap': 2.0 * decay * u0 + cross
    }
    if a_norm is not None:
        bounds['residual'] = half * a_norm * math.sqrt(e0_sq)
    return bounds


def iterations_for(rho: float, eps: float) -> Optional[int]:
    """
    k(ε) = ⌈log ε / log ρ⌉

    Returns:
        Optional[int]: 1 si ρ = 0, None si ρ ≥ 1 (sin garantía)
    """
    if not 0 < eps < 1:
        raise ContractViolation(f"eps must be in (0, 1), got {eps}")
    if rho >= 1:
        return None
    if rho <= 0:
        return 1
    return max(1, math.ceil(math.log(eps) / math.log(rho)))


def rate_report(problem: ProjectionProblem, dist: DistributionLike) -> RateReport:
    """
    Reporte completo de tasa para una distribución discreta finita

    Con H singular ρ se reporta igual, marcado con h_nonsingular=False.
    """
    dist = as_distribution(dist)
    H = compute_H(dist, problem)
    verdict, h_rank = is_H_nonsingular(dist, problem)
    if not verdict:
        logger.warning(f"H singular (rango {h_rank}/{problem.m}): ρ sin garantía")

    rank_A = numerical_rank(problem.A)
    expected = expected_sketch_rank(dist, problem.A)
    report = RateReport(
        rho=rate_rho(problem, H),
        lower_bound=1.0 - expected / rank_A,
        H=H,
        expected_sketch_rank=expected,
        rank_A=rank_A,
        h_nonsingular=verdict,
        h_rank=h_rank
    )
    logger.debug(f"ρ={report.rho:.6g} cota={report.lower_bound:.6g} rank(A)={rank_A}")
    return report
