# src/models/sketch.py

"""
Modelos de sketching: matrices S, distribuciones discretas finitas
y la especificación de los samplers
"""
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.errors import AnalysisUnavailableError, ContractViolation, NumericalError


PROBABILITY_ATOL = 1e-12

# Límite de soportes enumerados explícitamente (bloques de tamaño τ)
MAX_ENUMERATED_SUPPORT = 20000


@dataclass(frozen=True)
class SketchMatrix:
    """
    Matriz aleatoria S de m filas y q columnas

    Los sketches de selección (coordenadas, bloques, count-sketch, count-min)
    se guardan como índices de fila con signo; la forma densa se construye
    sólo cuando se pide.
    """
    m: int
    rows: Optional[np.ndarray] = None
    signs: Optional[np.ndarray] = None
    dense: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        if self.m < 1:
            raise ContractViolation("sketch must have at least one row")
        if self.dense is None and self.rows is None:
            raise ContractViolation("sketch needs either rows or dense entries")

        if self.dense is not None:
            dense = np.atleast_2d(np.asarray(self.dense, dtype=np.float64))
            if dense.shape[0] != self.m:
                raise ContractViolation(
                    f"sketch has {dense.shape[0]} rows, expected {self.m}"
                )
            if dense.shape[1] < 1:
                raise ContractViolation("sketch must have at least one column")
            object.__setattr__(self, 'dense', dense)
            return

        rows = np.asarray(self.rows, dtype=np.intp).reshape(-1)
        if rows.size < 1:
            raise ContractViolation("sketch must have at least one column")
        if rows.min() < 0 or rows.max() >= self.m:
            raise ContractViolation(f"sketch row index out of range 0..{self.m - 1}")
        signs = (np.ones(rows.size) if self.signs is None
                 else np.asarray(self.signs, dtype=np.float64).reshape(-1))
        if signs.shape != rows.shape:
            raise ContractViolation("signs and rows must have the same length")
        object.__setattr__(self, 'rows', rows)
        object.__setattr__(self, 'signs', signs)

    @classmethod
    def from_dense(cls, entries) -> 'SketchMatrix':
        entries = np.asarray(entries, dtype=np.float64)
        if entries.ndim == 1:
            entries = entries[:, None]
        return cls(m=entries.shape[0], dense=entries)

    @classmethod
    def coordinate(cls, m: int, index: int) -> 'SketchMatrix':
        """S = e_i"""
        return cls(m=m, rows=np.array([index]))

    @classmethod
    def block(cls, m: int, subset: Sequence[int]) -> 'SketchMatrix':
        """S = I_C (columnas de la identidad indexadas por C)"""
        return cls(m=m, rows=np.asarray(sorted(subset)))

    @property
    def is_selection(self) -> bool:
        return self.dense is None

    @property
    def q(self) -> int:
        return self.rows.size if self.is_selection else self.dense.shape[1]

    @cached_property
    def entries(self) -> np.ndarray:
        """Forma densa m x q"""
        if not self.is_selection:
            return self.dense
        matrix = np.zeros((self.m, self.rows.size))
        matrix[self.rows, np.arange(self.rows.size)] = self.signs
        return matrix

    def t_dot(self, M: np.ndarray) -> np.ndarray:
        """S^T M para M con m filas"""
        M = np.asarray(M, dtype=np.float64)
        if M.shape[0] != self.m:
            raise ContractViolation(f"operand has {M.shape[0]} rows, expected {self.m}")
        if not self.is_selection:
            return self.dense.T @ M
        if M.ndim == 1:
            return self.signs * M[self.rows]
        return self.signs[:, None] * M[self.rows]

    def dot(self, V: np.ndarray) -> np.ndarray:
        """S V para V con q filas"""
        V = np.asarray(V, dtype=np.float64)
        if not self.is_selection:
            return self.dense @ V
        out = np.zeros((self.m,) + V.shape[1:])
        weights = self.signs if V.ndim == 1 else self.signs[:, None]
        np.add.at(out, self.rows, weights * V)
        return out


@dataclass
class DiscreteDistribution:
    """Distribución discreta finita: S = S_i con probabilidad p_i > 0"""

    support: List[Tuple[SketchMatrix, float]]

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        """Validar soporte y probabilidades"""
        if not self.support:
            raise ContractViolation("distribution support is empty")
        m = self.support[0][0].m
        for sketch, probability in self.support:
            if sketch.m != m:
                raise ContractViolation("all sketches must have the same number of rows")
            if not probability > 0:
                raise ContractViolation("probabilities must be strictly positive")
        total = sum(probability for _, probability in self.support)
        if abs(total - 1.0) > PROBABILITY_ATOL:
            raise ContractViolation(f"probabilities sum to {total!r}, expected 1")

    @property
    def r(self) -> int:
        return len(self.support)

    @property
    def m(self) -> int:
        return self.support[0][0].m

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([probability for _, probability in self.support])

    @property
    def sketches(self) -> List[SketchMatrix]:
        return [sketch for sketch, _ in self.support]

    def permuted(self, order: Sequence[int]) -> 'DiscreteDistribution':
        """Mismo soporte en otro orden"""
        return DiscreteDistribution([self.support[i] for i in order])

    # ═══════════════════════════════════════════════════════════
    # CONSTRUCTORES
    # ═══════════════════════════════════════════════════════════

    @classmethod
    def coordinate(cls, probabilities: Sequence[float]) -> 'DiscreteDistribution':
        """S = e_i con probabilidad p_i; se omiten las coordenadas con p_i = 0"""
        p = _normalized(probabilities)
        m = p.size
        return cls([(SketchMatrix.coordinate(m, i), float(p[i]))
                    for i in range(m) if p[i] > 0])

    @classmethod
    def uniform_coordinate(cls, m: int) -> 'DiscreteDistribution':
        return cls.coordinate(np.full(m, 1.0 / m))

    @classmethod
    def row_norm(cls, A: np.ndarray) -> 'DiscreteDistribution':
        """p_i = ‖A_i:‖² / ‖A‖²_F (Kaczmarz aleatorizado)"""
        return cls.coordinate(row_norm_probabilities(A))

    @classmethod
    def diagonal(cls, A: np.ndarray) -> 'DiscreteDistribution':
        """p_i = A_ii / Tr(A) (ascenso por coordenadas en el caso autodual)"""
        diag = np.diag(np.asarray(A, dtype=np.float64))
        if np.any(diag <= 0):
            raise NumericalError("matrix is not symmetric positive definite")
        return cls.coordinate(diag / diag.sum())

    @classmethod
    def blocks(
        cls,
        m: int,
        subsets: Sequence[Sequence[int]],
        probabilities: Optional[Sequence[float]] = None
    ) -> 'DiscreteDistribution':
        """S = I_C con probabilidad p_C"""
        if probabilities is None:
            probabilities = np.full(len(subsets), 1.0 / len(subsets))
        p = _normalized(probabilities)
        if p.size != len(subsets):
            raise ContractViolation("one probability per subset is required")
        return cls([(SketchMatrix.block(m, subset), float(prob))
                    for subset, prob in zip(subsets, p) if prob > 0])

    @classmethod
    def all_blocks_of_size(cls, m: int, tau: int) -> 'DiscreteDistribution':
        """Uniforme sobre todos los subconjuntos de tamaño τ"""
        if not 1 <= tau <= m:
            raise ContractViolation(f"block size must be in 1..{m}, got {tau}")
        count = comb(m, tau)
        if count > MAX_ENUMERATED_SUPPORT:
            raise ContractViolation(
                f"{count} subsets of size {tau} are too many to enumerate"
            )
        return cls.blocks(m, list(combinations(range(m), tau)))

    @classmethod
    def single(cls, sketch: SketchMatrix) -> 'DiscreteDistribution':
        return cls([(sketch, 1.0)])


def _normalized(probabilities: Sequence[float]) -> np.ndarray:
    p = np.asarray(probabilities, dtype=np.float64).reshape(-1)
    if p.size == 0:
        raise ContractViolation("distribution support is empty")
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise ContractViolation("probabilities must be finite and non-negative")
    total = p.sum()
    if abs(total - 1.0) > 1e-9:
        raise ContractViolation(f"probabilities sum to {total!r}, expected 1")
    return p / total


def row_norm_probabilities(A: np.ndarray) -> np.ndarray:
    """
    p_i = ‖A_i:‖² / ‖A‖²_F

    Raises:
        NumericalError: si A tiene una fila nula
    """
    row_norms = np.sum(np.asarray(A, dtype=np.float64) ** 2, axis=1)
    if np.any(row_norms == 0):
        raise NumericalError("zero row: row-norm probabilities undefined")
    return row_norms / row_norms.sum()


class SamplerKind(Enum):
    """Familias de distribuciones de sketch"""
    COORDINATE = "coordinate"
    BLOCK = "block"
    COUNT_SKETCH = "count_sketch"
    COUNT_MIN = "count_min"
    GAUSSIAN = "gaussian"


@dataclass
class SamplerSpec:
    """
    Especificación de un sampler (el parámetro 𝒟 del método)

    coordinate:   probabilities (m)
    block:        subsets + subset_probabilities, o block_size τ (uniforme
                  sobre los subconjuntos de tamaño τ, sin enumerarlos)
    count_sketch: q columnas de [I, −I] con reemplazo
    count_min:    q columnas de I con reemplazo
    gaussian:     m x q con entradas N(0, 1)
    """
    kind: SamplerKind
    m: int
    q: int = 1
    probabilities: Optional[np.ndarray] = None
    subsets: Optional[List[List[int]]] = None
    subset_probabilities: Optional[np.ndarray] = None
    block_size: Optional[int] = None

    def validate(self) -> None:
        """Validar la especificación"""
        if not isinstance(self.kind, SamplerKind):
            raise ContractViolation(f"Invalid sampler kind: {self.kind}")
        if self.m < 1:
            raise ContractViolation("m must be positive")

        if self.kind == SamplerKind.COORDINATE:
            if self.probabilities is None:
                raise ContractViolation("coordinate sampler needs probabilities")
            p = _normalized(self.probabilities)
            if p.size != self.m:
                raise ContractViolation(f"expected {self.m} probabilities, got {p.size}")

        elif self.kind == SamplerKind.BLOCK:
            if self.subsets is None:
                if self.block_size is None or not 1 <= self.block_size <= self.m:
                    raise ContractViolation(f"block size must be in 1..{self.m}")
                return
            if not self.subsets:
                raise ContractViolation("distribution support is empty")
            p = (np.full(len(self.subsets), 1.0 / len(self.subsets))
                 if self.subset_probabilities is None
                 else _normalized(self.subset_probabilities))
            if p.size != len(self.subsets):
                raise ContractViolation("one probability per subset is required")
            covered = set()
            for subset, prob in zip(self.subsets, p):
                if len(subset) == 0:
                    raise ContractViolation("subsets must be non-empty")
                if min(subset) < 0 or max(subset) >= self.m:
                    raise ContractViolation(f"subset index out of range 0..{self.m - 1}")
                if prob > 0:
                    covered.update(subset)
            if len(covered) != self.m:
                raise ContractViolation(
                    "block family is not proper: some index never appears"
                )

        elif self.q < 1:
            raise ContractViolation(f"q must be at least 1, got {self.q}")

    @property
    def is_finite(self) -> bool:
        """True si el soporte está listado explícitamente (análisis exacto posible)"""
        if self.kind == SamplerKind.COORDINATE:
            return True
        return self.kind == SamplerKind.BLOCK and self.subsets is not None

    def to_distribution(self) -> DiscreteDistribution:
        """Soporte finito explícito de la especificación"""
        self.validate()
        if self.kind == SamplerKind.COORDINATE:
            return DiscreteDistribution.coordinate(self.probabilities)
        if self.kind == SamplerKind.BLOCK and self.subsets is not None:
            return DiscreteDistribution.blocks(
                self.m, self.subsets, self.subset_probabilities
            )
        raise AnalysisUnavailableError(self.kind.value)

    @classmethod
    def coordinate(cls, probabilities) -> 'SamplerSpec':
        p = np.asarray(probabilities, dtype=np.float64).reshape(-1)
        return cls(kind=SamplerKind.COORDINATE, m=p.size, probabilities=p)

    @classmethod
    def uniform_coordinate(cls, m: int) -> 'SamplerSpec':
        return cls.coordinate(np.full(m, 1.0 / m))

    @classmethod
    def row_norm(cls, A: np.ndarray) -> 'SamplerSpec':
        return cls.coordinate(row_norm_probabilities(A))

    @classmethod
    def from_distribution(cls, dist: DiscreteDistribution) -> 'SamplerSpec':
        """Convierte un soporte de coordenadas o bloques en especificación"""
        subsets = []
        for sketch in dist.sketches:
            if not sketch.is_selection or np.any(sketch.signs != 1):
                raise ContractViolation("only identity-column sketches can be sampled from a support")
            subsets.append(sorted(int(i) for i in sketch.rows))
        return cls(
            kind=SamplerKind.BLOCK,
            m=dist.m,
            subsets=subsets,
            subset_probabilities=dist.probabilities / dist.probabilities.sum()
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kind': self.kind.value,
            'm': self.m,
            'q': self.q,
            'block_size': self.block_size,
            'subsets': len(self.subsets) if self.subsets is not None else None
        }
