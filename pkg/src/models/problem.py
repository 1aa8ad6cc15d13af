# src/models/problem.py

"""
Modelos del problema de proyección: matriz SPD, problema (A, b, B, c)
y los resultados de la descomposición / proyector en la norma B
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, Optional

import numpy as np
import scipy.linalg as la

from core.errors import ContractViolation, InconsistentSystemError, NumericalError


SYMMETRY_RTOL = 1e-12


def _as_matrix(value, name: str) -> np.ndarray:
    matrix = np.atleast_2d(np.array(value, dtype=np.float64))
    if matrix.ndim != 2:
        raise ContractViolation(f"{name} must be a 2-D matrix")
    return matrix


def _as_vector(value, name: str, size: int) -> np.ndarray:
    vector = np.array(value, dtype=np.float64).reshape(-1)
    if vector.shape[0] != size:
        raise ContractViolation(
            f"{name} has length {vector.shape[0]}, expected {size}"
        )
    return vector


@dataclass(frozen=True)
class SpdMatrix:
    """Matriz simétrica definida positiva con factorización de Cholesky cacheada"""

    entries: np.ndarray
    is_identity: bool = False
    factor: Any = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        entries = _as_matrix(self.entries, "B")
        if entries.shape[0] != entries.shape[1]:
            raise ContractViolation(f"B must be square, got {entries.shape}")

        scale = np.max(np.abs(entries)) if entries.size else 0.0
        if np.max(np.abs(entries - entries.T)) > SYMMETRY_RTOL * scale:
            raise ContractViolation("B is not symmetric")

        try:
            factor = la.cho_factor(entries, lower=True, check_finite=True)
        except la.LinAlgError as e:
            raise NumericalError("matrix is not symmetric positive definite") from e

        entries.setflags(write=False)
        object.__setattr__(self, 'entries', entries)
        object.__setattr__(self, 'factor', factor)

    @classmethod
    def identity(cls, n: int) -> 'SpdMatrix':
        """B = I (atajo: las resoluciones son copias)"""
        return cls(np.eye(n), is_identity=True)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """Aplica B^{-1} usando la factorización (nunca la inversa explícita)"""
        rhs = np.asarray(rhs, dtype=np.float64)
        if self.is_identity:
            return rhs.copy()
        return la.cho_solve(self.factor, rhs)

    def quad(self, x: np.ndarray) -> float:
        """x^T B x"""
        if self.is_identity:
            return float(x @ x)
        return float(x @ (self.entries @ x))

    @cached_property
    def eigh(self):
        """Descomposición espectral simétrica (sólo para diagnósticos de tasa)"""
        return la.eigh(self.entries)

    def inv_sqrt(self) -> np.ndarray:
        """B^{-1/2} vía descomposición espectral"""
        if self.is_identity:
            return np.eye(self.dim)
        values, vectors = self.eigh
        return (vectors / np.sqrt(values)) @ vectors.T


@dataclass(frozen=True)
class ProjectionProblem:
    """
    Problema de mejor aproximación

        minimizar  ½‖x − c‖²_B   sujeto a  Ax = b

    y su dual  D(y) = (b − Ac)^T y − ½‖A^T y‖²_{B^{-1}}.
    """

    A: np.ndarray
    b: np.ndarray
    B: SpdMatrix
    c: np.ndarray

    def __post_init__(self):
        A = _as_matrix(self.A, "A")
        m, n = A.shape
        b = _as_vector(self.b, "b", m)
        c = _as_vector(self.c, "c", n)

        if not isinstance(self.B, SpdMatrix):
            raise ContractViolation("B must be an SpdMatrix")
        if self.B.dim != n:
            raise ContractViolation(f"B is {self.B.dim}x{self.B.dim}, expected {n}x{n}")
        if not np.any(A):
            raise ContractViolation("A must have at least one nonzero entry")

        for array in (A, b, c):
            array.setflags(write=False)
        object.__setattr__(self, 'A', A)
        object.__setattr__(self, 'b', b)
        object.__setattr__(self, 'c', c)

    @classmethod
    def create(
        cls,
        A,
        b=None,
        B=None,
        c=None
    ) -> 'ProjectionProblem':
        """
        Construye un problema con valores por defecto b = 0, B = I, c = 0

        Args:
            A: Matriz del sistema (m x n)
            b: Lado derecho (m)
            B: Matriz SPD (n x n), SpdMatrix o array
            c: Punto a proyectar (n)
        """
        A = _as_matrix(A, "A")
        m, n = A.shape
        if B is None:
            B = SpdMatrix.identity(n)
        elif not isinstance(B, SpdMatrix):
            B = SpdMatrix(B)
        return cls(
            A=A,
            b=np.zeros(m) if b is None else b,
            B=B,
            c=np.zeros(n) if c is None else c
        )

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]

    @cached_property
    def binv_at(self) -> np.ndarray:
        """B^{-1} A^T (n x m)"""
        return self.B.solve(self.A.T)

    @cached_property
    def gram(self) -> np.ndarray:
        """A B^{-1} A^T (m x m), simetrizada"""
        G = self.A @ self.binv_at
        return 0.5 * (G + G.T)

    @cached_property
    def shifted_rhs(self) -> np.ndarray:
        """b − Ac"""
        return self.b - self.A @ self.c

    def residual(self, x: np.ndarray) -> float:
        """‖Ax − b‖ (euclídea en R^m)"""
        return float(np.linalg.norm(self.A @ x - self.b))

    def least_squares_residual(self) -> float:
        """Residuo de mínimos cuadrados de Ax = b"""
        solution, *_ = la.lstsq(self.A, self.b)
        return self.residual(solution)

    def is_consistent(self, tol: float = 1e-8) -> bool:
        """Verifica que Ax = b tenga solución (residuo relativo ≤ tol)"""
        return self.least_squares_residual() <= tol * max(1.0, float(np.linalg.norm(self.b)))

    def validate(self, tol: float = 1e-8) -> None:
        """Validar consistencia del sistema"""
        residual = self.least_squares_residual()
        if residual > tol * max(1.0, float(np.linalg.norm(self.b))):
            raise InconsistentSystemError(residual)

    def to_dict(self) -> Dict[str, Any]:
        """Resumen serializable (sin las matrices completas)"""
        return {
            'm': self.m,
            'n': self.n,
            'b_norm': float(np.linalg.norm(self.b)),
            'c_norm': float(np.linalg.norm(self.c)),
            'B_identity': self.B.is_identity
        }


@dataclass(frozen=True)
class Decomposition:
    """x = s + t con s ∈ Range(B^{-1}A^T) y t ∈ Null(A)"""
    s: np.ndarray
    t: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.s + self.t


@dataclass(frozen=True)
class BProjector:
    """Z_A = A^T (A B^{-1} A^T)^† A; B^{-1} Z_A proyecta en la geometría de B"""
    Z: np.ndarray
    problem: Optional[ProjectionProblem] = field(default=None, repr=False, compare=False)

    @cached_property
    def range_map(self) -> np.ndarray:
        """B^{-1} Z_A: proyector sobre Range(B^{-1}A^T)"""
        return self.problem.B.solve(self.Z)

    @cached_property
    def null_map(self) -> np.ndarray:
        """I − B^{-1} Z_A: proyector sobre Null(A)"""
        return np.eye(self.Z.shape[0]) - self.range_map

    def trace(self) -> float:
        """Tr(B^{-1} Z_A) = rank(A)"""
        return float(np.trace(self.range_map))
