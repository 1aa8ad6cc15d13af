"""
SDAKit - Samplers de la distribución de sketch 𝒟
"""

import numpy as np

from models.sketch import SamplerKind, SamplerSpec, SketchMatrix

from samplers.base_sampler import BaseSampler, make_stream
from samplers.coordinate_sampler import CoordinateSampler
from samplers.block_sampler import BlockSampler
from samplers.count_sketch_sampler import CountSketchSampler, CountMinSampler
from samplers.gaussian_sampler import GaussianSampler


def build_sampler(spec: SamplerSpec) -> BaseSampler:
    """
    Construye el sampler correspondiente a una especificación

    Args:
        spec: Especificación validada del sampler

    Returns:
        BaseSampler: Instancia lista para muestrear
    """
    spec.validate()

    if spec.kind == SamplerKind.COORDINATE:
        return CoordinateSampler(spec.probabilities)
    if spec.kind == SamplerKind.BLOCK:
        return BlockSampler(
            spec.m,
            subsets=spec.subsets,
            probabilities=spec.subset_probabilities,
            block_size=spec.block_size
        )
    if spec.kind == SamplerKind.COUNT_SKETCH:
        return CountSketchSampler(spec.m, spec.q)
    if spec.kind == SamplerKind.COUNT_MIN:
        return CountMinSampler(spec.m, spec.q)
    return GaussianSampler(spec.m, spec.q)


def sample(spec: SamplerSpec, rng: np.random.Generator) -> SketchMatrix:
    """Una realización S ∼ 𝒟 para la especificación dada"""
    return build_sampler(spec).sample(rng)


__all__ = [
    'BaseSampler',
    'CoordinateSampler',
    'BlockSampler',
    'CountSketchSampler',
    'CountMinSampler',
    'GaussianSampler',
    'build_sampler',
    'make_stream',
    'sample',
]
