# src/models/bench.py

"""
Configuración y resultados de los benchmarks de convergencia
"""
from dataclasses import dataclass, field
import re
from typing import Any, Dict, List, Optional, Tuple

from core.errors import ContractViolation


METHODS = (
    'kaczmarz',
    'coordinate-ascent',
    'block',
    'count-sketch',
    'count-min',
    'gaussian',
    'gossip-model1',
    'gossip-model2',
)

# Métodos que llevan tamaño de bloque / número de columnas: block(τ), gaussian(q)...
PARAMETRIZED = ('block', 'count-sketch', 'count-min', 'gaussian')

PROBABILITY_RULES = ('uniform', 'row-norm')

_METHOD_PATTERN = re.compile(r'^\s*([a-z0-9-]+)\s*(?:\(\s*(\d+)\s*\))?\s*$')

CSV_HEADER = ['trial', 'k', 'rel_error', 'residual', 'dual_value', 'gap']
SUMMARY_HEADER = ['k', 'mean', 'median', 'p90', 'rho_k', 'lower_k']


def parse_method(method: str) -> Tuple[str, Optional[int]]:
    """
    Separa el nombre del método y su parámetro

    Args:
        method: 'kaczmarz', 'block(4)', 'gaussian(2)', ...

    Returns:
        Tuple[str, Optional[int]]: (nombre, τ o q)
    """
    match = _METHOD_PATTERN.match(method or '')
    if not match or match.group(1) not in METHODS:
        raise ContractViolation(
            f"unknown method '{method}'; expected one of {', '.join(METHODS)}"
        )
    name, parameter = match.group(1), match.group(2)
    if name in PARAMETRIZED:
        if parameter is None:
            raise ContractViolation(f"method '{name}' needs a size, e.g. {name}(2)")
        if int(parameter) < 1:
            raise ContractViolation(f"size of '{name}' must be at least 1")
        return name, int(parameter)
    if parameter is not None:
        raise ContractViolation(f"method '{name}' takes no size")
    return name, None


@dataclass
class BenchConfig:
    """Parámetros de una corrida de benchmark"""

    # Fuente de la matriz: archivo .mtx o generador (n, rank, seed)
    matrix_file: Optional[str] = None
    n: int = 300
    rank: int = 300
    seed: int = 0

    # Método y distribución
    method: str = 'kaczmarz'
    probabilities: str = 'row-norm'

    # Corrida
    trials: int = 10
    iterations: int = 100000
    record_every: int = 100
    workers: int = 1
    target_error: float = 1e-6
    output: str = 'results/bench.csv'

    # Sobrescrituras opcionales de B y c; grafo y valores para gossip
    b_matrix_file: Optional[str] = None
    c_file: Optional[str] = None
    graph_file: Optional[str] = None
    values_file: Optional[str] = None
    edge_probability: float = 0.3

    def validate(self) -> None:
        """Validar configuración"""
        parse_method(self.method)
        if self.trials < 1:
            raise ContractViolation("trials must be at least 1")
        if self.iterations < 1:
            raise ContractViolation("iterations must be at least 1")
        if self.record_every < 1:
            raise ContractViolation("record_every must be at least 1")
        if self.workers < 1:
            raise ContractViolation("workers must be at least 1")
        if self.probabilities not in PROBABILITY_RULES:
            raise ContractViolation(
                f"probability rule must be one of {', '.join(PROBABILITY_RULES)}"
            )
        if not 0 < self.target_error < 1:
            raise ContractViolation("target_error must be in (0, 1)")
        if self.matrix_file is None and not self.method.startswith('gossip'):
            if not 1 <= self.rank <= self.n:
                raise ContractViolation(f"rank must be in 1..{self.n}, got {self.rank}")
        if not self.output:
            raise ContractViolation("output path is required")

    @property
    def method_name(self) -> str:
        return parse_method(self.method)[0]

    @property
    def method_size(self) -> Optional[int]:
        return parse_method(self.method)[1]

    def trial_seed(self, trial: int) -> int:
        """Semilla independiente por prueba: base ⊕ índice"""
        return self.seed ^ trial

    def to_dict(self) -> Dict[str, Any]:
        return {
            'matrix_file': self.matrix_file,
            'n': self.n,
            'rank': self.rank,
            'seed': self.seed,
            'method': self.method,
            'probabilities': self.probabilities,
            'trials': self.trials,
            'iterations': self.iterations,
            'record_every': self.record_every,
            'workers': self.workers,
            'output': self.output
        }


@dataclass
class BenchRow:
    """Fila del CSV de un benchmark"""
    trial: int
    k: int
    rel_error: float
    residual: float
    dual_value: Optional[float] = None
    gap: Optional[float] = None


@dataclass
class BenchResult:
    """Resultado de `run_benchmark`"""
    config: BenchConfig
    rows: List[BenchRow] = field(default_factory=list)
    rho: Optional[float] = None
    rank_A: Optional[int] = None
    iterations_to_target: Dict[int, Optional[int]] = field(default_factory=dict)
    summary: List[Dict[str, Any]] = field(default_factory=list)
    output: Optional[str] = None
    summary_output: Optional[str] = None

    def trial_rows(self, trial: int) -> List[BenchRow]:
        return [row for row in self.rows if row.trial == trial]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'config': self.config.to_dict(),
            'rho': self.rho,
            'rank_A': self.rank_A,
            'iterations_to_target': self.iterations_to_target,
            'rows': len(self.rows),
            'output': self.output,
            'summary_output': self.summary_output
        }
