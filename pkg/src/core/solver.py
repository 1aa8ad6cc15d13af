"""
Stochastic dual ascent (SDA) y su proceso primal (sketch-and-project)

Paso dual:   y' = y + S λ,  λ = (S^T A B^{-1} A^T S)^† S^T (b − A x(y))
Paso primal: x' = x − B^{-1} A^T S (S^T A B^{-1} A^T S)^† S^T (Ax − b)
con x(y) = c + B^{-1} A^T y.
"""

import logging
from typing import Optional, Tuple, Union

import numpy as np

from core.errors import ContractViolation, InconsistentSystemError
from core.linalg import b_norm, least_norm_solve
from core.rates import shift_vector
from core.sketching import is_H_nonsingular
from models.problem import ProjectionProblem
from models.reports import ReferenceSolution, SolveOptions, SolveReport, SolverState, TraceRow
from models.sketch import SamplerSpec, SketchMatrix
from samplers import BaseSampler, build_sampler, make_stream


logger = logging.getLogger('SDAKit.Solver')

CONSISTENCY_TOL = 1e-8

# Índice de flujo de los sketches; el 0 queda para la matriz generada
SKETCH_STREAM = 1


# ═══════════════════════════════════════════════════════════
# PASOS
# ═══════════════════════════════════════════════════════════

def _sketched_system(
    x: np.ndarray,
    S: SketchMatrix,
    problem: ProjectionProblem
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Resuelve el sistema interno q x q de un paso

    Returns:
        (λ, B^{-1}A^T S) con λ = (S^T A B^{-1} A^T S)^† S^T (b − Ax)
    """
    SA = S.t_dot(problem.A)
    if SA.shape[1] != x.shape[0]:
        raise ContractViolation(f"x has length {x.shape[0]}, expected {SA.shape[1]}")

    rhs = S.t_dot(problem.b) - SA @ x
    basis = problem.B.solve(SA.T)
    G = SA @ basis

    if G.shape[0] == 1:
        g = G[0, 0]
        lam = rhs / g if g > 0 else np.zeros(1)
    else:
        lam = least_norm_solve(0.5 * (G + G.T), rhs)

    return lam, basis


def dual_step(state: SolverState, S: SketchMatrix, problem: ProjectionProblem) -> SolverState:
    """
    Un paso de SDA sobre el iterado dual

    El iterado primal se actualiza con la misma dirección, de modo que
    x = c + B^{-1}A^T y se conserva hasta el redondeo.

    Args:
        state: Estado con iterado dual
        S: Realización de la matriz de sketch
        problem: Problema de proyección

    Returns:
        SolverState: Nuevo estado (k + 1)
    """
    if not state.has_dual:
        raise ContractViolation("dual_step needs a state with a dual iterate")
    if state.y.shape[0] != problem.m or S.m != problem.m:
        raise ContractViolation("dual iterate and sketch must have m entries/rows")

    lam, basis = _sketched_system(state.x, S, problem)
    return SolverState(
        x=state.x + basis @ lam,
        y=state.y + S.dot(lam),
        k=state.k + 1,
        last_lambda=lam
    )


def primal_step(x: np.ndarray, S: SketchMatrix, problem: ProjectionProblem) -> np.ndarray:
    """
    Un paso de sketch-and-project

    x' es la proyección en norma B de x sobre {z : S^T A z = S^T b}.
    """
    x = np.asarray(x, dtype=np.float64)
    if S.m != problem.m:
        raise ContractViolation(f"sketch has {S.m} rows, expected {problem.m}")
    lam, basis = _sketched_system(x, S, problem)
    return x + basis @ lam


# ═══════════════════════════════════════════════════════════
# OBJETIVOS Y CERTIFICADOS
# ═══════════════════════════════════════════════════════════

def primal_from_dual(y: np.ndarray, problem: ProjectionProblem) -> np.ndarray:
    """x(y) = c + B^{-1} A^T y"""
    return problem.c + problem.binv_at @ np.asarray(y, dtype=np.float64)


def dual_value(y: np.ndarray, problem: ProjectionProblem) -> float:
    """D(y) = (b − Ac)^T y − ½ ‖A^T y‖²_{B^{-1}}"""
    y = np.asarray(y, dtype=np.float64)
    return float(problem.shifted_rhs @ y - 0.5 * (y @ (problem.gram @ y)))


def primal_value(x: np.ndarray, problem: ProjectionProblem) -> float:
    """P(x) = ½ ‖x − c‖²_B"""
    diff = np.asarray(x, dtype=np.float64) - problem.c
    return 0.5 * problem.B.quad(diff)


def duality_gap(y: np.ndarray, problem: ProjectionProblem) -> float:
    """
    P(x(y)) − D(y) = (A B^{-1} A^T y + Ac − b)^T y = −∇D(y)^T y

    Sólo certifica optimalidad junto con la factibilidad de x(y).
    """
    y = np.asarray(y, dtype=np.float64)
    return float((problem.gram @ y - problem.shifted_rhs) @ y)


def reference_solution(
    problem: ProjectionProblem,
    x0: np.ndarray,
    tol: float = CONSISTENCY_TOL
) -> ReferenceSolution:
    """
    Punto óptimo dual particular y* = (A B^{-1} A^T)^† (b − Ac)

    Args:
        problem: Problema (consistente)
        x0: Punto inicial, para U₀ = ½‖x0 − x*‖²_B
        tol: Tolerancia relativa de consistencia

    Raises:
        InconsistentSystemError: si A x* = b falla más allá de la tolerancia
    """
    y_star = least_norm_solve(problem.gram, problem.shifted_rhs)
    x_star = primal_from_dual(y_star, problem)

    residual = problem.residual(x_star)
    if residual > tol * max(1.0, float(np.linalg.norm(problem.b))):
        raise InconsistentSystemError(residual)

    opt = primal_value(x_star, problem)
    dual_opt = dual_value(y_star, problem)
    if abs(opt - dual_opt) > 1e-10 * max(1.0, abs(opt)):
        logger.warning(f"P(x*) = {opt!r} y D(y*) = {dual_opt!r} difieren")

    x0 = np.asarray(x0, dtype=np.float64)
    u0 = 0.5 * problem.B.quad(x0 - x_star)
    return ReferenceSolution(y_star=y_star, x_star=x_star, opt=opt, u0=u0)


# ═══════════════════════════════════════════════════════════
# BUCLE DE RESOLUCIÓN
# ═══════════════════════════════════════════════════════════

class Solver:
    """
    Ejecuta SDA (arranque dual) o SDA-Primal (arranque primal arbitrario)
    """

    def __init__(
        self,
        problem: ProjectionProblem,
        sampler: Union[SamplerSpec, BaseSampler],
        options: Optional[SolveOptions] = None,
        check_singular_h: bool = True
    ):
        """
        Args:
            problem: Problema de proyección
            sampler: Especificación o sampler ya construido
            options: Opciones del bucle
            check_singular_h: Probar la no singularidad de H antes de iterar
        """
        self.problem = problem
        self.options = options or SolveOptions()
        self.options.validate()
        self.check_singular_h = check_singular_h
        self.sampler = sampler if isinstance(sampler, BaseSampler) else build_sampler(sampler)
        self.logger = logger

        if self.sampler.m != problem.m:
            raise ContractViolation(
                f"sampler draws {self.sampler.m}-row sketches, A has {problem.m} rows"
            )

    def initial_state(self, y0=None, x0=None) -> SolverState:
        """Estado inicial desde un punto dual (por defecto y0 = 0) o primal"""
        if y0 is not None and x0 is not None:
            raise ContractViolation("give either y0 or x0, not both")
        if x0 is not None:
            x0 = np.array(x0, dtype=np.float64).reshape(-1)
            if x0.shape[0] != self.problem.n:
                raise ContractViolation(f"x0 has length {x0.shape[0]}, expected {self.problem.n}")
            return SolverState(x=x0)

        y = np.zeros(self.problem.m) if y0 is None else np.array(y0, dtype=np.float64).reshape(-1)
        if y.shape[0] != self.problem.m:
            raise ContractViolation(f"y0 has length {y.shape[0]}, expected {self.problem.m}")
        return SolverState(x=primal_from_dual(y, self.problem), y=y)

    def check_h(self) -> Optional[bool]:
        """True si H es singular, None si el sampler no admite análisis"""
        if not (self.check_singular_h and self.sampler.is_finite):
            return None
        verdict, rank = is_H_nonsingular(self.sampler.support(), self.problem)
        if not verdict:
            self.logger.warning(
                f"H es singular (rango {rank}/{self.problem.m}): sin garantía de decaimiento"
            )
        return not verdict

    def run(self, y0=None, x0=None) -> SolveReport:
        """
        Itera hasta cumplir el criterio de parada o agotar max_iters

        Arranque dual: converge ⇔ ‖Ax−b‖ ≤ tol_residual y |gap| ≤ tol_gap.
        Arranque primal: converge ⇔ residuo y estancamiento de ‖x^{k}−x^{k−1}‖_B.
        """
        problem = self.problem
        options = self.options
        state = self.initial_state(y0=y0, x0=x0)
        dual = state.has_dual

        reference = reference_solution(problem, state.x)
        shift = np.zeros(problem.n) if dual else shift_vector(state.x, problem)
        target = reference.x_star + shift
        tol_residual, tol_gap = options.resolved_tolerances(
            float(np.linalg.norm(problem.b)), reference.opt
        )
        singular_h = self.check_h()

        def error_sq(x):
            return problem.B.quad(x - target)

        def make_row(k, residual, gap=None):
            return TraceRow(
                k=k,
                error_sq=error_sq(state.x),
                euclidean_error_sq=float(np.sum((state.x - target) ** 2)),
                residual=residual,
                dual_value=dual_value(state.y, problem) if dual else None,
                gap=gap
            )

        rng = make_stream(options.seed, SKETCH_STREAM)
        trace = [make_row(0, problem.residual(state.x),
                          duality_gap(state.y, problem) if dual else None)]
        converged = False

        for k in range(1, options.max_iters + 1):
            S = self.sampler.sample(rng)
            previous_x = state.x
            if dual:
                state = dual_step(state, S, problem)
            else:
                state = SolverState(x=primal_step(state.x, S, problem), k=k)

            record = k % options.record_every == 0
            gap_check = dual and k % options.gap_check_period == 0
            if not (record or gap_check):
                continue

            residual = problem.residual(state.x)
            residual_ok = residual <= tol_residual
            gap = None
            if dual and (gap_check or residual_ok):
                gap = duality_gap(state.y, problem)
                self.logger.debug(f"k={k} residuo={residual:.3e} gap={gap:.3e}")

            if residual_ok:
                if dual:
                    converged = abs(gap) <= tol_gap
                else:
                    step = b_norm(state.x - previous_x, problem.B)
                    converged = step <= options.stagnation_tol * (1.0 + b_norm(state.x, problem.B))

            if record or converged:
                trace.append(make_row(k, residual, gap))
            if converged:
                break

        iterations = state.k if dual else k
        self.logger.info(
            f"{'SDA' if dual else 'SDA-Primal'} con {self.sampler!r}: "
            f"{'convergió' if converged else 'no convergió'} en {iterations} iteraciones"
        )
        return SolveReport(
            trace=trace,
            state=state,
            converged=converged,
            iterations=iterations,
            reference=reference,
            shift=shift,
            singular_h=singular_h
        )


def solve(
    problem: ProjectionProblem,
    spec: Union[SamplerSpec, BaseSampler],
    options: Optional[SolveOptions] = None,
    y0: Optional[np.ndarray] = None,
    x0: Optional[np.ndarray] = None
) -> SolveReport:
    """
    Resuelve el problema de proyección con SDA / SDA-Primal

    Determinista dada la semilla de `options`; la no convergencia se reporta
    con converged=False, no con una excepción.
    """
    return Solver(problem, spec, options).run(y0=y0, x0=x0)
