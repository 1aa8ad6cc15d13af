"""
Clase base abstracta para todos los samplers de sketch
"""

from abc import ABC, abstractmethod
import logging

import numpy as np

from core.errors import AnalysisUnavailableError
from models.sketch import DiscreteDistribution, SketchMatrix


def make_stream(seed: int, stream: int = 0) -> np.random.Generator:
    """
    Crea un flujo aleatorio independiente a partir de (semilla, índice de flujo)

    Args:
        seed: Semilla base
        stream: Índice del flujo lógico (un flujo por hilo de trabajo)

    Returns:
        np.random.Generator: Generador PCG64 determinista
    """
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(stream),))
    return np.random.default_rng(sequence)


class BaseSampler(ABC):
    """
    Clase base abstracta para los samplers de la distribución 𝒟
    """

    def __init__(self, m: int):
        """
        Inicializa el sampler base

        Args:
            m: Número de filas de las matrices S (filas de A)
        """
        self.m = m
        self.logger = logging.getLogger(f'SDAKit.Sampler.{self.__class__.__name__}')

    @abstractmethod
    def draw(self, rng: np.random.Generator) -> SketchMatrix:
        """
        Método abstracto que debe implementar cada sampler

        Returns:
            SketchMatrix: Una realización independiente de S
        """
        pass

    def sample(self, rng: np.random.Generator) -> SketchMatrix:
        """Muestra S ∼ 𝒟 usando el flujo `rng`"""
        return self.draw(rng)

    @property
    def is_finite(self) -> bool:
        """True si el soporte finito está disponible para el análisis exacto"""
        return False

    def support(self) -> DiscreteDistribution:
        """Soporte finito de la distribución"""
        raise AnalysisUnavailableError(self.__class__.__name__)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(m={self.m})"
