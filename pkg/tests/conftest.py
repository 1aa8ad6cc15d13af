# tests/conftest.py

"""
Configuración y fixtures compartidos para todos los tests
"""

import logging
import sys
from pathlib import Path

# Agregar src al path
src_path = Path(__file__).parent.parent / 'src'
sys.path.insert(0, str(src_path))

import numpy as np
import pytest

from models.network import GossipNetwork
from models.problem import ProjectionProblem, SpdMatrix


# ═══════════════════════════════════════════════════════════
# FIXTURES PARA PROBLEMAS
# ═══════════════════════════════════════════════════════════

@pytest.fixture
def rng():
    """Generador determinista"""
    return np.random.default_rng(20240607)


@pytest.fixture
def random_spd():
    """Fábrica de matrices SPD bien condicionadas"""
    def factory(n, seed=0):
        generator = np.random.default_rng(seed)
        M = generator.standard_normal((n, n))
        return M @ M.T + n * np.eye(n)
    return factory


@pytest.fixture
def random_problem(random_spd):
    """
    Fábrica de problemas consistentes de rango dado

    b = A x_true, B = I o SPD aleatoria, c aleatorio
    """
    def factory(m, n, rank=None, seed=0, general_B=False, with_c=False):
        generator = np.random.default_rng(seed)
        rank = min(m, n) if rank is None else rank
        A = generator.standard_normal((m, rank)) @ generator.standard_normal((rank, n))
        x_true = generator.standard_normal(n)
        B = random_spd(n, seed + 1) if general_B else None
        c = generator.standard_normal(n) if with_c else None
        return ProjectionProblem.create(A, b=A @ x_true, B=B, c=c)
    return factory


@pytest.fixture
def identity_problem():
    """A = I_4, b = (1, 2, 3, 4), B = I, c = 0"""
    return ProjectionProblem.create(np.eye(4), b=np.array([1.0, 2.0, 3.0, 4.0]))


@pytest.fixture
def rank_one_problem():
    """A = u v^T (5 x 4) con b = A x para un x fijo"""
    u = np.array([1.0, -2.0, 0.5, 3.0, 1.5])
    v = np.array([2.0, 1.0, -1.0, 0.5])
    A = np.outer(u, v)
    x = np.array([1.0, 1.0, 1.0, 1.0])
    return ProjectionProblem.create(A, b=A @ x)


# ═══════════════════════════════════════════════════════════
# FIXTURES PARA REDES
# ═══════════════════════════════════════════════════════════

@pytest.fixture
def single_edge():
    return GossipNetwork(n=2, edges=[(0, 1)], values=[4.0, 2.0])


@pytest.fixture
def triangle():
    return GossipNetwork(n=3, edges=[(0, 1), (0, 2), (1, 2)], values=[0.0, 3.0, 6.0])


@pytest.fixture
def path3():
    return GossipNetwork(n=3, edges=[(0, 1), (1, 2)], values=[1.0, 2.0, 3.0])


@pytest.fixture
def star3():
    """Estrella con centro 0 y hojas 1, 2"""
    return GossipNetwork(n=3, edges=[(0, 1), (0, 2)], values=[0.0, 2.0, 4.0])


# ═══════════════════════════════════════════════════════════
# FIXTURES PARA ARCHIVOS
# ═══════════════════════════════════════════════════════════

@pytest.fixture
def config_file(tmp_path):
    """Archivo .ini mínimo con algunos valores sobrescritos"""
    path = tmp_path / 'sda.ini'
    path.write_text(
        "[solver]\n"
        "max_iters = 500\n"
        "tol_residual =\n"
        "seed = 7\n"
        "\n"
        "[bench]\n"
        "n = 30\n"
        "ranks = 5,10\n"
        "trials = 2\n"
        "\n"
        "[logging]\n"
        f"file = {tmp_path / 'logs' / 'sdakit.log'}\n"
        f"yaml = {tmp_path / 'missing.yaml'}\n",
        encoding='utf-8'
    )
    return path


# ═══════════════════════════════════════════════════════════
# LOGGING
# ═══════════════════════════════════════════════════════════

@pytest.fixture(autouse=True)
def reset_logging():
    """Quita los handlers que deja la CLI y restaura la propagación"""
    yield
    for name in list(logging.root.manager.loggerDict):
        if name.startswith('SDAKit'):
            logger = logging.getLogger(name)
            for handler in list(logger.handlers):
                logger.removeHandler(handler)
                handler.close()
            logger.propagate = True
            logger.setLevel(logging.NOTSET)


# ═══════════════════════════════════════════════════════════
# CONFIGURACIÓN DE PYTEST
# ═══════════════════════════════════════════════════════════

def pytest_configure(config):
    """Configuración inicial de pytest"""
    config.addinivalue_line(
        "markers", "integration: tests de integración (lentos)"
    )
    config.addinivalue_line(
        "markers", "unit: tests unitarios (rápidos)"
    )
    config.addinivalue_line(
        "markers", "slow: tests que toman mucho tiempo"
    )
