"""
Consenso promedio distribuido como problema de proyección

Modelo 1: cada arista (i, j) impone x_i = x_j  (filas f_i − f_j).
Modelo 2: cada nodo es el promedio de sus vecinos  (filas f_i − (1/d_i) Σ f_j).
En ambos casos b = 0, B = I y c son los valores privados, así que x* = c̄ 𝟙.
"""

import logging
from typing import Tuple

import numpy as np

from core.errors import ContractViolation
from core.linalg import lambda_min_plus
from core.rates import rate_rho
from core.sketching import compute_H
from core.solver import duality_gap
from models.network import GossipNetwork, GossipReport
from models.problem import ProjectionProblem
from models.sketch import DiscreteDistribution, row_norm_probabilities
from samplers import CoordinateSampler, make_stream


logger = logging.getLogger('SDAKit.Gossip')

MODELS = (1, 2)
PROBABILITY_RULES = ('uniform', 'row-norm')


def _check_model(model: int) -> None:
    if model not in MODELS:
        raise ContractViolation(f"gossip model must be 1 or 2, got {model}")


# ═══════════════════════════════════════════════════════════
# MATRICES
# ═══════════════════════════════════════════════════════════

def model1_matrix(g: GossipNetwork) -> np.ndarray:
    """Una fila por arista e = (i, j): (A_e:)^T = f_i − f_j"""
    A = np.zeros((g.m, g.n))
    rows = np.arange(g.m)
    edges = np.array(g.edges, dtype=np.intp)
    A[rows, edges[:, 0]] = 1.0
    A[rows, edges[:, 1]] = -1.0
    return A


def laplacian(g: GossipNetwork) -> np.ndarray:
    """L = D − Adj; coincide con A^T A del modelo 1"""
    L = np.diag(g.degrees.astype(np.float64))
    for i, j in g.edges:
        L[i, j] = -1.0
        L[j, i] = -1.0
    return L


def model2_matrix(g: GossipNetwork) -> np.ndarray:
    """Fila i: f_i − (1/d_i) Σ_{j ∈ N(i)} f_j"""
    A = np.eye(g.n)
    for i, adjacent in enumerate(g.neighbors):
        if not adjacent:
            raise ContractViolation(f"node {i} is isolated")
        A[i, adjacent] = -1.0 / len(adjacent)
    return A


def model_matrix(g: GossipNetwork, model: int) -> np.ndarray:
    _check_model(model)
    return model1_matrix(g) if model == 1 else model2_matrix(g)


def to_problem(g: GossipNetwork, model: int) -> ProjectionProblem:
    """Problema min ½‖x − c‖² s.a. Ax = 0 inducido por la red"""
    return ProjectionProblem.create(model_matrix(g, model), c=g.values)


def activation_probabilities(g: GossipNetwork, model: int, rule: str = 'uniform') -> np.ndarray:
    """Probabilidades de activación de aristas (modelo 1) o nodos (modelo 2)"""
    if rule not in PROBABILITY_RULES:
        raise ContractViolation(f"unknown probability rule '{rule}'")
    A = model_matrix(g, model)
    if rule == 'row-norm':
        return row_norm_probabilities(A)
    return np.full(A.shape[0], 1.0 / A.shape[0])


# ═══════════════════════════════════════════════════════════
# PASOS
# ═══════════════════════════════════════════════════════════

def gossip_step_model1(values: np.ndarray, edge: Tuple[int, int]) -> np.ndarray:
    """Los extremos de la arista reemplazan sus valores por su promedio"""
    i, j = edge
    updated = np.array(values, dtype=np.float64)
    average = (updated[i] + updated[j]) / 2.0
    updated[i] = average
    updated[j] = average
    return updated


def gossip_step_model2(values: np.ndarray, node: int, g: GossipNetwork) -> np.ndarray:
    """
    Activación del nodo i en el modelo 2

        x_i' = (x_i + Σ_{j∈N(i)} x_j) / (d_i + 1)
        x_j' = x_j + (x_i − (1/d_i) Σ_{j'∈N(i)} x_{j'}) / (d_i + 1),  j ∈ N(i)
    """
    if not 0 <= node < g.n:
        raise ContractViolation(f"node {node} out of range 0..{g.n - 1}")
    adjacent = g.neighbors[node]
    degree = len(adjacent)

    updated = np.array(values, dtype=np.float64)
    total = updated[adjacent].sum()
    own = updated[node]
    updated[node] = (own + total) / (degree + 1)
    updated[adjacent] += (own - total / degree) / (degree + 1)
    return updated


# ═══════════════════════════════════════════════════════════
# TASA Y SIMULACIÓN
# ═══════════════════════════════════════════════════════════

def gossip_rate(g: GossipNetwork, model: int, probabilities: str = 'uniform') -> float:
    """
    Tasa ρ del gossip aleatorizado

    Modelo 1 (y modelo 2 sobre grafos completos): 1 − λ_min^+(L) / (2m).
    Modelo 2 en otros grafos: ρ numérico con la H de la activación elegida.
    """
    _check_model(model)
    complete = g.m == g.n * (g.n - 1) // 2
    if model == 1 or complete:
        return max(0.0, 1.0 - lambda_min_plus(laplacian(g)) / (2.0 * g.m))

    problem = to_problem(g, model)
    dist = DiscreteDistribution.coordinate(activation_probabilities(g, model, probabilities))
    return rate_rho(problem, compute_H(dist, problem))


def run_gossip(
    g: GossipNetwork,
    model: int,
    rounds: int,
    seed: int = 0,
    record_every: int = 1,
    probabilities: str = 'uniform'
) -> GossipReport:
    """
    Simula gossip aleatorizado: una arista (modelo 1) o nodo (modelo 2) por ronda

    Los pesos duales y^k se actualizan con el paso dual, así que
    corrections = A^T y^k es exacto y tiende a c̄ − c.

    Args:
        g: Red con los valores privados
        model: 1 o 2
        rounds: Número de rondas
        seed: Semilla del flujo de activaciones
        record_every: Cada cuántas rondas guardar los valores
        probabilities: 'uniform' o 'row-norm'

    Returns:
        GossipReport: Traza, valores finales, pesos y correcciones
    """
    _check_model(model)
    if rounds < 0:
        raise ContractViolation("rounds must be non-negative")
    if record_every < 1:
        raise ContractViolation("record_every must be at least 1")

    problem = to_problem(g, model)
    A = problem.A
    row_norms_sq = np.sum(A ** 2, axis=1)
    sampler = CoordinateSampler(activation_probabilities(g, model, probabilities))
    rng = make_stream(seed)

    values = g.values.copy()
    weights = np.zeros(A.shape[0])
    initial_sum = values.sum()
    report = GossipReport(model=model, rounds=rounds)
    report.trace_rounds.append(0)
    report.trace_values.append(values.copy())

    for k in range(1, rounds + 1):
        index = int(sampler.sample(rng).rows[0])
        weights[index] -= (A[index] @ values) / row_norms_sq[index]

        if model == 1:
            values = gossip_step_model1(values, g.edges[index])
        else:
            values = gossip_step_model2(values, index, g)

        if k % record_every == 0 or k == rounds:
            report.trace_rounds.append(k)
            report.trace_values.append(values.copy())

    drift = abs(values.sum() - initial_sum)
    if drift > 1e-12 * max(1.0, abs(initial_sum)):
        logger.warning(f"La suma de los valores derivó {drift:.3e}")

    report.final_values = values
    report.weights = weights
    report.corrections = A.T @ weights
    report.gap = duality_gap(weights, problem)
    logger.info(
        f"Gossip modelo {model}: {rounds} rondas, "
        f"desvío máximo {report.max_deviation(g.mean):.3e}"
    )
    return report
