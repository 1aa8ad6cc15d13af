"""
Primitivas de álgebra lineal densa

Pseudoinversa, rango y λ_min^+ comparten un mismo umbral de truncamiento
τ = max(m, n) · ε · σ_max, de modo que rango y "autovalor no nulo" coinciden.
"""

from typing import Tuple, Union

import numpy as np
import scipy.linalg as la

from core.errors import ContractViolation, NumericalError
from models.problem import BProjector, Decomposition, ProjectionProblem, SpdMatrix


EPS = np.finfo(np.float64).eps


def rank_threshold(singular_values: np.ndarray, shape: Tuple[int, ...]) -> float:
    """
    Umbral de truncamiento compartido

    Args:
        singular_values: Valores singulares (o |autovalores|) de la matriz
        shape: Forma de la matriz original

    Returns:
        float: τ = max(shape) · ε · σ_max
    """
    if singular_values.size == 0:
        return 0.0
    return max(shape) * EPS * float(np.max(singular_values))


def numerical_rank(M: np.ndarray) -> int:
    """Rango numérico vía SVD con el umbral compartido"""
    M = np.atleast_2d(np.asarray(M, dtype=np.float64))
    if M.size == 0:
        return 0
    singular_values = la.svd(M, compute_uv=False)
    return int(np.sum(singular_values > rank_threshold(singular_values, M.shape)))


def pinv(M: np.ndarray) -> np.ndarray:
    """Pseudoinversa de Moore-Penrose vía SVD truncada"""
    M = np.atleast_2d(np.asarray(M, dtype=np.float64))
    U, s, Vt = la.svd(M, full_matrices=False)
    keep = s > rank_threshold(s, M.shape)
    return (Vt[keep].T / s[keep]) @ U[:, keep].T


def least_norm_solve(M: np.ndarray, d: np.ndarray) -> np.ndarray:
    """
    Solución de norma mínima M^† d

    Entre los minimizadores de ‖Mλ − d‖² devuelve el único en Range(M^T).

    Args:
        M: Matriz cuadrada simétrica semidefinida positiva
        d: Vector de dimensión compatible

    Returns:
        np.ndarray: λ = M^† d
    """
    M = np.atleast_2d(np.asarray(M, dtype=np.float64))
    d = np.asarray(d, dtype=np.float64).reshape(-1)
    if M.shape[0] != M.shape[1]:
        raise ContractViolation(f"M must be square, got {M.shape}")
    if M.shape[0] != d.shape[0]:
        raise ContractViolation(
            f"dimension mismatch: M is {M.shape}, d has length {d.shape[0]}"
        )

    U, s, Vt = la.svd(M, full_matrices=False)
    keep = s > rank_threshold(s, M.shape)
    return Vt[keep].T @ ((U[:, keep].T @ d) / s[keep])


def lambda_min_plus(M: np.ndarray) -> float:
    """
    Menor autovalor estrictamente por encima del umbral de truncamiento

    Raises:
        NumericalError: si todos los autovalores están bajo el umbral (M ≈ 0)
    """
    M = np.atleast_2d(np.asarray(M, dtype=np.float64))
    eigenvalues = la.eigvalsh(0.5 * (M + M.T))
    threshold = rank_threshold(np.abs(eigenvalues), M.shape)
    positive = eigenvalues[eigenvalues > threshold]
    if positive.size == 0:
        raise NumericalError("zero matrix has no positive eigenvalue")
    return float(positive.min())


def b_norm(x: np.ndarray, B: Union[SpdMatrix, np.ndarray]) -> float:
    """‖x‖_B = √(x^T B x)"""
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if isinstance(B, SpdMatrix):
        if B.dim != x.shape[0]:
            raise ContractViolation(f"B is {B.dim}x{B.dim}, x has length {x.shape[0]}")
        value = B.quad(x)
    else:
        B = np.asarray(B, dtype=np.float64)
        if B.shape != (x.shape[0], x.shape[0]):
            raise ContractViolation(f"B is {B.shape}, x has length {x.shape[0]}")
        value = float(x @ B @ x)
    return float(np.sqrt(max(value, 0.0)))


def projector(problem: ProjectionProblem) -> BProjector:
    """Z_A = A^T (A B^{-1} A^T)^† A"""
    A = problem.A
    Z = A.T @ pinv(problem.gram) @ A
    return BProjector(Z=0.5 * (Z + Z.T), problem=problem)


def decompose(x: np.ndarray, problem: ProjectionProblem) -> Decomposition:
    """
    Descompone x = s + t en la geometría de B

    s = B^{-1} Z_A x ∈ Range(B^{-1}A^T),  t = x − s ∈ Null(A)
    """
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if x.shape[0] != problem.n:
        raise ContractViolation(f"x has length {x.shape[0]}, expected {problem.n}")

    # s = B^{-1} A^T (A B^{-1} A^T)^† A x, sin formar Z_A
    s = problem.binv_at @ least_norm_solve(problem.gram, problem.A @ x)
    return Decomposition(s=s, t=x - s)
