"""
Sampler gaussiano: S de m x q con entradas i.i.d. N(0, 1)
"""

import numpy as np

from core.errors import ContractViolation
from models.sketch import SketchMatrix
from samplers.base_sampler import BaseSampler


class GaussianSampler(BaseSampler):
    """Descenso gaussiano (q = 1) y sus variantes por bloques"""

    def __init__(self, m: int, q: int = 1):
        super().__init__(m)
        if q < 1:
            raise ContractViolation(f"q must be at least 1, got {q}")
        self.q = q

    def draw(self, rng: np.random.Generator) -> SketchMatrix:
        return SketchMatrix(m=self.m, dense=rng.standard_normal((self.m, self.q)))

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(m={self.m}, q={self.q})"
