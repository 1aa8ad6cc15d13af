"""
Sampler de submatrices de la identidad: S = I_C
"""

from typing import List, Optional, Sequence

import numpy as np

from core.errors import ContractViolation
from models.sketch import DiscreteDistribution, SketchMatrix, _normalized
from samplers.base_sampler import BaseSampler


class BlockSampler(BaseSampler):
    """
    Newton aleatorizado (dual) / Kaczmarz por bloques (primal)

    Con una familia explícita de subconjuntos se elige C con probabilidad p_C.
    Con sólo `block_size` se elige C uniforme entre los subconjuntos de tamaño τ
    sin enumerar la familia.
    """

    def __init__(
        self,
        m: int,
        subsets: Optional[Sequence[Sequence[int]]] = None,
        probabilities: Optional[Sequence[float]] = None,
        block_size: Optional[int] = None
    ):
        super().__init__(m)
        self.block_size = block_size
        self.subsets: Optional[List[np.ndarray]] = None
        self.probabilities = None

        if subsets is None:
            if block_size is None or not 1 <= block_size <= m:
                raise ContractViolation(f"block size must be in 1..{m}")
            return

        if probabilities is None:
            probabilities = np.full(len(subsets), 1.0 / len(subsets))
        self.probabilities = _normalized(probabilities)
        self.subsets = [np.asarray(sorted(subset), dtype=np.intp) for subset in subsets]
        self._cdf = np.cumsum(self.probabilities)

    def draw(self, rng: np.random.Generator) -> SketchMatrix:
        if self.subsets is None:
            rows = np.sort(rng.choice(self.m, size=self.block_size, replace=False))
            return SketchMatrix(m=self.m, rows=rows)

        index = int(np.searchsorted(self._cdf, rng.random() * self._cdf[-1], side='right'))
        index = min(index, len(self.subsets) - 1)
        return SketchMatrix(m=self.m, rows=self.subsets[index])

    @property
    def is_finite(self) -> bool:
        return self.subsets is not None

    def support(self) -> DiscreteDistribution:
        if self.subsets is None:
            return super().support()
        return DiscreteDistribution.blocks(self.m, self.subsets, self.probabilities)
