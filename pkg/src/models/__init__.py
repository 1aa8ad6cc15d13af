# src/models/__init__.py

"""
Módulo de modelos de datos para SDAKit

Este módulo contiene las definiciones de los modelos de datos principales:
- ProjectionProblem / SpdMatrix: el problema de mejor aproximación
- SketchMatrix / DiscreteDistribution / SamplerSpec: la distribución de sketches
- SolverState / SolveOptions / SolveReport / RateReport: estado y reportes
- GossipNetwork / GossipReport: redes para consenso promedio
- BenchConfig / BenchResult: benchmarks de convergencia

Cada modelo incluye validación y serialización con to_dict().
"""

from .problem import (
    SpdMatrix,
    ProjectionProblem,
    Decomposition,
    BProjector
)

from .sketch import (
    SketchMatrix,
    DiscreteDistribution,
    SamplerKind,
    SamplerSpec
)

from .reports import (
    SolverState,
    ReferenceSolution,
    SolveOptions,
    TraceRow,
    SolveReport,
    RateReport
)

from .network import (
    GossipNetwork,
    GossipReport
)

from .bench import (
    BenchConfig,
    BenchRow,
    BenchResult
)

# Definir qué se exporta cuando se hace: from models import *
__all__ = [
    # Problem
    'SpdMatrix',
    'ProjectionProblem',
    'Decomposition',
    'BProjector',

    # Sketch
    'SketchMatrix',
    'DiscreteDistribution',
    'SamplerKind',
    'SamplerSpec',

    # Reports
    'SolverState',
    'ReferenceSolution',
    'SolveOptions',
    'TraceRow',
    'SolveReport',
    'RateReport',

    # Network
    'GossipNetwork',
    'GossipReport',

    # Bench
    'BenchConfig',
    'BenchRow',
    'BenchResult',
]

# Versión del módulo
__version__ = '1.0.0'
