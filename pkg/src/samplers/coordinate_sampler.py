"""
Sampler de vectores coordenados: S = e_i con probabilidad p_i
"""

import numpy as np

from models.sketch import DiscreteDistribution, SketchMatrix, _normalized
from samplers.base_sampler import BaseSampler


class CoordinateSampler(BaseSampler):
    """
    Kaczmarz aleatorizado (primal) / ascenso por coordenadas (dual)
    """

    def __init__(self, probabilities):
        p = _normalized(probabilities)
        super().__init__(p.size)
        self.probabilities = p
        self._cdf = np.cumsum(p)

    def draw(self, rng: np.random.Generator) -> SketchMatrix:
        index = int(np.searchsorted(self._cdf, rng.random() * self._cdf[-1], side='right'))
        index = min(index, self.m - 1)
        return SketchMatrix.coordinate(self.m, index)

    @property
    def is_finite(self) -> bool:
        return True

    def support(self) -> DiscreteDistribution:
        return DiscreteDistribution.coordinate(self.probabilities)
