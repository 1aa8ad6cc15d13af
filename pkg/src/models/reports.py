# src/models/reports.py

"""
Estado del solver, opciones, soluciones de referencia y reportes
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from core.errors import ContractViolation


@dataclass
class SolverState:
    """
    Iterados emparejados (y^k, x^k)

    Si el estado nace de un punto dual se mantiene x = c + B^{-1}A^T y;
    los estados primales (x0 arbitrario) no tienen iterado dual.
    """
    x: np.ndarray
    y: Optional[np.ndarray] = None
    k: int = 0
    last_lambda: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def has_dual(self) -> bool:
        return self.y is not None


@dataclass(frozen=True)
class ReferenceSolution:
    """Punto óptimo dual particular y*, x* = c + B^{-1}A^T y*, OPT y U₀"""
    y_star: np.ndarray
    x_star: np.ndarray
    opt: float
    u0: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'opt': self.opt,
            'u0': self.u0,
            'x_star_norm': float(np.linalg.norm(self.x_star)),
            'y_star_norm': float(np.linalg.norm(self.y_star))
        }


@dataclass
class SolveOptions:
    """
    Opciones del bucle de resolución

    tol_residual / tol_gap en None usan los valores relativos por defecto:
    1e-8·‖b‖ (o 1e-12 si b = 0) y 1e-8·(1 + |OPT|).
    """
    max_iters: int = 10000
    tol_residual: Optional[float] = None
    tol_gap: Optional[float] = None
    gap_check_period: int = 100
    seed: int = 0
    record_every: int = 1
    stagnation_tol: float = 1e-8

    def validate(self) -> None:
        """Validar opciones"""
        if self.max_iters < 1:
            raise ContractViolation("max_iters must be at least 1")
        if self.tol_residual is not None and not self.tol_residual > 0:
            raise ContractViolation("tol_residual must be positive")
        if self.tol_gap is not None and not self.tol_gap > 0:
            raise ContractViolation("tol_gap must be positive")
        if self.gap_check_period < 1:
            raise ContractViolation("gap_check_period must be at least 1")
        if self.record_every < 1:
            raise ContractViolation("record_every must be at least 1")
        if not self.stagnation_tol > 0:
            raise ContractViolation("stagnation_tol must be positive")

    def resolved_tolerances(self, b_norm: float, opt: float):
        """(tol_residual, tol_gap) con los valores por defecto aplicados"""
        tol_residual = self.tol_residual
        if tol_residual is None:
            tol_residual = 1e-8 * b_norm if b_norm > 0 else 1e-12
        tol_gap = self.tol_gap
        if tol_gap is None:
            tol_gap = 1e-8 * (1.0 + abs(opt))
        return tol_residual, tol_gap


@dataclass(frozen=True)
class TraceRow:
    """Una fila de la traza de métricas"""
    k: int
    error_sq: float
    residual: float
    dual_value: Optional[float] = None
    gap: Optional[float] = None
    euclidean_error_sq: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'k': self.k,
            'error_sq': self.error_sq,
            'residual': self.residual,
            'dual_value': self.dual_value,
            'gap': self.gap
        }


@dataclass
class SolveReport:
    """Resultado de `solve`: traza completa, estado final y veredicto"""
    trace: List[TraceRow]
    state: SolverState
    converged: bool
    iterations: int
    reference: ReferenceSolution
    shift: np.ndarray
    singular_h: Optional[bool] = None

    @property
    def initial_error_sq(self) -> float:
        return self.trace[0].error_sq if self.trace else float('nan')

    def relative_errors(self, norm: str = 'B') -> np.ndarray:
        """
        ‖x^k − x* − t‖² / ‖x^0 − x* − t‖² por fila de la traza

        Args:
            norm: 'B' (norma del problema) o 'euclidean'
        """
        if norm == 'B':
            errors = np.array([row.error_sq for row in self.trace])
        elif norm == 'euclidean':
            errors = np.array([row.euclidean_error_sq for row in self.trace], dtype=np.float64)
        else:
            raise ContractViolation(f"unknown norm '{norm}'")
        initial = errors[0] if errors.size else float('nan')
        if initial == 0:
            return np.zeros_like(errors)
        return errors / initial

    def to_dict(self) -> Dict[str, Any]:
        return {
            'converged': self.converged,
            'iterations': self.iterations,
            'singular_h': self.singular_h,
            'reference': self.reference.to_dict(),
            'final_residual': self.trace[-1].residual if self.trace else None,
            'trace_rows': len(self.trace)
        }


@dataclass
class RateReport:
    """ρ, su cota inferior por rango y la matriz H usada"""
    rho: float
    lower_bound: float
    H: np.ndarray
    expected_sketch_rank: float
    rank_A: int
    h_nonsingular: bool = True
    h_rank: Optional[int] = None

    def validate(self, slack: float = 1e-12) -> None:
        """Validar 1 − E[rank(S^T A)]/rank(A) ≤ ρ < 1 cuando H es no singular"""
        expected = 1.0 - self.expected_sketch_rank / self.rank_A
        if abs(expected - self.lower_bound) > slack:
            raise ContractViolation("lower bound does not match expected sketch rank")
        if self.h_nonsingular:
            if self.lower_bound > self.rho + slack:
                raise ContractViolation(
                    f"lower bound {self.lower_bound} exceeds rate {self.rho}"
                )
            if not self.rho < 1.0:
                raise ContractViolation(f"rate {self.rho} is not below 1")

    def to_dict(self) -> Dict[str, Any]:
        return {
            'rho': self.rho,
            'lower_bound': self.lower_bound,
            'expected_sketch_rank': self.expected_sketch_rank,
            'rank_A': self.rank_A,
            'h_nonsingular': self.h_nonsingular,
            'h_rank': self.h_rank
        }
