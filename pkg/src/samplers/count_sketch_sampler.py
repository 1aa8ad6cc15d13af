"""
Samplers count-sketch y count-min

S se arma con q columnas elegidas uniformemente con reemplazo de
[I, −I] (count-sketch) o de I (count-min), con I la identidad m x m.
"""

import numpy as np

from core.errors import ContractViolation
from models.sketch import SketchMatrix
from samplers.base_sampler import BaseSampler


class CountSketchSampler(BaseSampler):
    """Columnas aleatorias de [I, −I]"""

    def __init__(self, m: int, q: int):
        super().__init__(m)
        if q < 1:
            raise ContractViolation(f"q must be at least 1, got {q}")
        self.q = q

    def draw(self, rng: np.random.Generator) -> SketchMatrix:
        columns = rng.integers(0, 2 * self.m, size=self.q)
        rows = columns % self.m
        signs = np.where(columns < self.m, 1.0, -1.0)
        return SketchMatrix(m=self.m, rows=rows, signs=signs)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(m={self.m}, q={self.q})"


class CountMinSampler(CountSketchSampler):
    """Columnas aleatorias de I"""

    def draw(self, rng: np.random.Generator) -> SketchMatrix:
        rows = rng.integers(0, self.m, size=self.q)
        return SketchMatrix(m=self.m, rows=rows)
