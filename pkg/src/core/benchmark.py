"""
Benchmarks de convergencia

Genera (o carga) el sistema, corre varias pruebas independientes del método
elegido y escribe el CSV por iteración más un resumen con las curvas de
percentiles y las curvas teóricas ρ^k y (1 − 1/rank(A))^k.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import logging
from math import comb
from pathlib import Path
import time
from typing import Dict, List, Optional, Tuple

import numpy as np
import scipy.linalg as la

from core.errors import ContractViolation
from core.gossip import activation_probabilities, gossip_rate, to_problem
from core.linalg import numerical_rank
from core.rates import rate_report
from core.solver import Solver
from models.bench import CSV_HEADER, SUMMARY_HEADER, BenchConfig, BenchResult, BenchRow, parse_method
from models.network import GossipNetwork
from models.problem import ProjectionProblem, SpdMatrix
from models.reports import SolveOptions
from models.sketch import (
    MAX_ENUMERATED_SUPPORT,
    DiscreteDistribution,
    SamplerKind,
    SamplerSpec,
)
from samplers import BaseSampler, build_sampler, make_stream
from utils.file_utils import read_edge_list, read_matrix, read_vector, write_csv
from utils.formatters import format_duration


logger = logging.getLogger('SDAKit.Benchmark')

# Flujos derivados de la semilla base (el 1 es SKETCH_STREAM del solver)
MATRIX_STREAM = 0
SOLUTION_STREAM = 2
VALUES_STREAM = 3

SKETCH_KINDS = {
    'count-sketch': SamplerKind.COUNT_SKETCH,
    'count-min': SamplerKind.COUNT_MIN,
    'gaussian': SamplerKind.GAUSSIAN
}


def generate_rank_deficient(n: int, r: int, seed: int) -> np.ndarray:
    """
    Matriz n x n de rango r

    Se toma una matriz con entradas uniformes(0, 1) i.i.d. y se trunca su
    SVD a los r mayores valores singulares.

    Args:
        n: Dimensión
        r: Rango deseado, 1 ≤ r ≤ n
        seed: Semilla

    Returns:
        np.ndarray: Σ_{i≤r} σ_i u_i v_i^T
    """
    if n < 1 or not 1 <= r <= n:
        raise ContractViolation(f"rank must be in 1..{n}, got {r}")

    rng = make_stream(seed, MATRIX_STREAM)
    M = rng.random((n, n))
    if r == n:
        return M
    U, s, Vt = la.svd(M)
    return (U[:, :r] * s[:r]) @ Vt[:r]


@dataclass
class BenchProblem:
    """Problema listo para correr y sus curvas teóricas"""
    problem: ProjectionProblem
    sampler: BaseSampler
    rho: Optional[float]
    rank_A: int
    lower_rank_curve: bool = False


# ═══════════════════════════════════════════════════════════
# CONSTRUCCIÓN DEL PROBLEMA
# ═══════════════════════════════════════════════════════════

def _load_network(config: BenchConfig) -> GossipNetwork:
    if config.graph_file:
        n, edges = read_edge_list(config.graph_file)
        network = GossipNetwork(n=n, edges=edges)
    else:
        network = GossipNetwork.random_connected(config.n, config.edge_probability, seed=config.seed)

    if config.values_file:
        values = read_vector(config.values_file)
    else:
        values = make_stream(config.seed, VALUES_STREAM).random(network.n)
    return network.with_values(values)


def _system_matrix(config: BenchConfig) -> np.ndarray:
    if config.matrix_file:
        return read_matrix(config.matrix_file)
    return generate_rank_deficient(config.n, config.rank, config.seed)


def method_spec(method: str, A: np.ndarray, probabilities: str = 'row-norm') -> SamplerSpec:
    """
    Especificación del sampler de un método con nombre

    kaczmarz y coordinate-ascent usan sketches coordenados: 'row-norm' da
    p_i = ‖A_i:‖²/‖A‖²_F para kaczmarz y p_i = A_ii/Tr(A) para coordinate-ascent.
    block(τ) enumera los subconjuntos de tamaño τ cuando son pocos.

    Args:
        method: 'kaczmarz', 'block(4)', 'gaussian(2)', ...
        A: Matriz del sistema
        probabilities: 'uniform' o 'row-norm'

    Returns:
        SamplerSpec: Especificación lista para build_sampler
    """
    name, size = parse_method(method)
    m = A.shape[0]

    if name == 'kaczmarz':
        if probabilities == 'row-norm':
            return SamplerSpec.row_norm(A)
        return SamplerSpec.uniform_coordinate(m)
    if name == 'coordinate-ascent':
        if probabilities == 'row-norm':
            return SamplerSpec.coordinate(DiscreteDistribution.diagonal(A).probabilities)
        return SamplerSpec.uniform_coordinate(m)
    if name == 'block':
        if size > m:
            raise ContractViolation(f"block size must be in 1..{m}, got {size}")
        if comb(m, size) <= MAX_ENUMERATED_SUPPORT:
            return SamplerSpec.from_distribution(DiscreteDistribution.all_blocks_of_size(m, size))
        return SamplerSpec(kind=SamplerKind.BLOCK, m=m, block_size=size)
    if name in SKETCH_KINDS:
        return SamplerSpec(kind=SKETCH_KINDS[name], m=m, q=size)
    raise ContractViolation(f"method '{method}' needs a network, not a matrix")


def build_bench_problem(config: BenchConfig) -> BenchProblem:
    """
    Arma el problema y el sampler del método configurado

    b se sintetiza siempre como A·x_true (sistema consistente por construcción).
    """
    config.validate()
    name = config.method_name

    if name.startswith('gossip'):
        model = 1 if name == 'gossip-model1' else 2
        network = _load_network(config)
        problem = to_problem(network, model)
        spec = SamplerSpec.coordinate(activation_probabilities(network, model, config.probabilities))
        return BenchProblem(
            problem=problem,
            sampler=build_sampler(spec),
            rho=gossip_rate(network, model, config.probabilities),
            rank_A=numerical_rank(problem.A)
        )

    A = _system_matrix(config)
    x_true = make_stream(config.seed, SOLUTION_STREAM).standard_normal(A.shape[1])
    c = read_vector(config.c_file) if config.c_file else None

    if name == 'coordinate-ascent':
        # Caso autodual: B = A necesita A SPD
        if not config.matrix_file:
            A = A @ A.T + np.eye(A.shape[0])
        B = SpdMatrix(A)
    else:
        B = SpdMatrix(read_matrix(config.b_matrix_file)) if config.b_matrix_file else None

    problem = ProjectionProblem.create(A, b=A @ x_true, B=B, c=c)
    sampler = build_sampler(method_spec(config.method, problem.A, config.probabilities))

    rho = None
    if sampler.is_finite:
        report = rate_report(problem, sampler.support())
        rho = report.rho
        if not report.h_nonsingular:
            logger.warning("H singular: la curva ρ^k no es una garantía")

    return BenchProblem(
        problem=problem,
        sampler=sampler,
        rho=rho,
        rank_A=numerical_rank(problem.A),
        lower_rank_curve=name == 'kaczmarz'
    )


# ═══════════════════════════════════════════════════════════
# PRUEBAS
# ═══════════════════════════════════════════════════════════

def run_trial(bench: BenchProblem, config: BenchConfig, trial: int) -> Tuple[List[BenchRow], Optional[int]]:
    """
    Una prueba independiente con semilla base ⊕ trial

    Returns:
        Tuple[List[BenchRow], Optional[int]]: Filas y primera iteración
        registrada con error relativo ≤ target_error
    """
    options = SolveOptions(
        max_iters=config.iterations,
        record_every=config.record_every,
        seed=config.trial_seed(trial)
    )
    started = time.monotonic()
    report = Solver(bench.problem, bench.sampler, options, check_singular_h=False).run()
    relative = report.relative_errors('euclidean')

    rows = [
        BenchRow(
            trial=trial,
            k=row.k,
            rel_error=float(rel),
            residual=row.residual,
            dual_value=row.dual_value,
            gap=row.gap
        )
        for row, rel in zip(report.trace, relative)
    ]
    reached = next((row.k for row in rows if row.rel_error <= config.target_error), None)

    logger.info(
        f"Prueba {trial}: {report.iterations} iteraciones, error relativo final "
        f"{rows[-1].rel_error:.3e} ({format_duration(time.monotonic() - started, short=True)})"
    )
    return rows, reached


def summarize(
    rows: List[BenchRow],
    trials: int,
    rho: Optional[float] = None,
    rank_A: Optional[int] = None
) -> List[Dict[str, Optional[float]]]:
    """
    Media, mediana y percentil 90 del error relativo por iteración

    Las pruebas que se detuvieron antes aportan su último valor registrado.
    """
    per_trial: Dict[int, Dict[int, float]] = {t: {} for t in range(trials)}
    for row in rows:
        per_trial[row.trial][row.k] = row.rel_error
    ks = sorted({row.k for row in rows})

    columns = []
    for t in range(trials):
        recorded = per_trial[t]
        last = np.nan
        values = []
        for k in ks:
            last = recorded.get(k, last)
            values.append(last)
        columns.append(values)
    matrix = np.array(columns, dtype=np.float64)

    summary = []
    for index, k in enumerate(ks):
        column = matrix[:, index]
        summary.append({
            'k': k,
            'mean': float(np.nanmean(column)),
            'median': float(np.nanmedian(column)),
            'p90': float(np.nanpercentile(column, 90)),
            'rho_k': None if rho is None else float(rho ** k),
            'lower_k': None if rank_A is None else float((1.0 - 1.0 / rank_A) ** k)
        })
    return summary


def summary_path(output: str) -> Path:
    path = Path(output)
    return path.with_name(f"{path.stem}_summary.csv")


def run_benchmark(config: BenchConfig) -> BenchResult:
    """
    Corre el benchmark completo y escribe los CSV

    Args:
        config: Configuración validada

    Returns:
        BenchResult: Filas, ρ, iteraciones hasta el objetivo y rutas escritas
    """
    config.validate()
    bench = build_bench_problem(config)
    logger.info(
        f"Benchmark {config.method}: A {bench.problem.m}x{bench.problem.n}, "
        f"rank {bench.rank_A}, {config.trials} pruebas"
    )

    with ThreadPoolExecutor(max_workers=config.workers) as executor:
        outcomes = list(executor.map(lambda t: run_trial(bench, config, t), range(config.trials)))

    rows = sorted((row for trial_rows, _ in outcomes for row in trial_rows),
                  key=lambda row: (row.trial, row.k))
    result = BenchResult(
        config=config,
        rows=rows,
        rho=bench.rho,
        rank_A=bench.rank_A,
        iterations_to_target={t: reached for t, (_, reached) in enumerate(outcomes)}
    )
    result.summary = summarize(
        rows,
        config.trials,
        rho=bench.rho,
        rank_A=bench.rank_A if bench.lower_rank_curve else None
    )

    result.output = str(write_csv(
        config.output,
        CSV_HEADER,
        ([row.trial, row.k, row.rel_error, row.residual, row.dual_value, row.gap] for row in rows)
    ))
    result.summary_output = str(write_csv(
        summary_path(config.output),
        SUMMARY_HEADER,
        ([entry[key] for key in SUMMARY_HEADER] for entry in result.summary)
    ))
    return result
