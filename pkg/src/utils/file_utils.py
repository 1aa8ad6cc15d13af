"""
SDAKit - File Utilities
Lectura y escritura de matrices (Matrix Market), vectores, listas de aristas y CSV
"""

import csv
import logging
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.io
import scipy.sparse

from core.errors import ContractViolation


logger = logging.getLogger('SDAKit.IO')

PathLike = Union[str, Path]


def ensure_directory(directory: PathLike, mode: int = 0o755) -> bool:
    """
    Asegura que un directorio existe, creándolo si es necesario

    Args:
        directory: Path del directorio
        mode: Permisos del directorio (Unix/Linux)

    Returns:
        True si el directorio existe o fue creado
    """
    try:
        Path(directory).mkdir(parents=True, exist_ok=True, mode=mode)
        return True
    except OSError as e:
        logger.error(f"No se pudo crear {directory}: {e}")
        return False


def _existing(filepath: PathLike) -> Path:
    path = Path(filepath)
    if not path.is_file():
        raise FileNotFoundError(f"Archivo no encontrado: {path}")
    return path


def _format_cell(value: Any) -> str:
    if value is None:
        return ''
    if isinstance(value, (float, np.floating)):
        return '%.17g' % value
    return str(value)


# ═══════════════════════════════════════════════════════════
# MATRICES Y VECTORES
# ═══════════════════════════════════════════════════════════

def read_matrix(filepath: PathLike) -> np.ndarray:
    """
    Lee una matriz Matrix Market (coordinate o array) como arreglo denso

    Args:
        filepath: Path del archivo .mtx

    Returns:
        np.ndarray: Matriz densa float64
    """
    path = _existing(filepath)
    data = scipy.io.mmread(str(path))
    if scipy.sparse.issparse(data):
        data = data.toarray()
    matrix = np.atleast_2d(np.asarray(data, dtype=np.float64))
    logger.debug(f"Matriz {matrix.shape} leída de {path}")
    return matrix


def write_matrix(filepath: PathLike, matrix: np.ndarray, coordinate: bool = False) -> Path:
    """
    Escribe una matriz en formato Matrix Market

    Args:
        filepath: Path destino (se agrega '.mtx' si falta)
        matrix: Matriz densa
        coordinate: True para formato coordinate (disperso), False para array

    Returns:
        Path: Ruta efectivamente escrita
    """
    path = Path(filepath)
    if path.suffix != '.mtx':
        path = path.with_name(path.name + '.mtx')
    if path.parent and not ensure_directory(path.parent):
        raise OSError(f"No se puede escribir en {path.parent}")

    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    data = scipy.sparse.coo_matrix(matrix) if coordinate else matrix
    scipy.io.mmwrite(str(path), data, precision=17)
    logger.debug(f"Matriz {matrix.shape} escrita en {path}")
    return path


def read_vector(filepath: PathLike) -> np.ndarray:
    """Lee un vector: un número ASCII por línea"""
    path = _existing(filepath)
    return np.loadtxt(path, dtype=np.float64, ndmin=1).reshape(-1)


def write_vector(filepath: PathLike, vector: Sequence[float]) -> Path:
    """Escribe un vector, un número por línea con precisión completa"""
    path = Path(filepath)
    if path.parent and not ensure_directory(path.parent):
        raise OSError(f"No se puede escribir en {path.parent}")
    np.savetxt(path, np.asarray(vector, dtype=np.float64).reshape(-1), fmt='%.17g')
    return path


# ═══════════════════════════════════════════════════════════
# GRAFOS
# ═══════════════════════════════════════════════════════════

def read_edge_list(filepath: PathLike) -> Tuple[int, List[Tuple[int, int]]]:
    """
    Lee una lista de aristas

    Formato: primera línea "n m", luego m líneas "i j" con nodos 1..n.

    Returns:
        Tuple[int, List[Tuple[int, int]]]: (n, aristas con índices desde 0)
    """
    path = _existing(filepath)
    lines = [line.split() for line in path.read_text(encoding='utf-8').splitlines()
             if line.strip() and not line.lstrip().startswith('#')]
    if not lines or len(lines[0]) != 2:
        raise ContractViolation(f"{path}: first line must be 'n m'")

    n, m = (int(token) for token in lines[0])
    body = lines[1:]
    if len(body) != m:
        raise ContractViolation(f"{path}: header announces {m} edges, found {len(body)}")

    edges = []
    for number, tokens in enumerate(body, start=2):
        if len(tokens) != 2:
            raise ContractViolation(f"{path}:{number}: expected 'i j'")
        i, j = int(tokens[0]), int(tokens[1])
        if not (1 <= i <= n and 1 <= j <= n):
            raise ContractViolation(f"{path}:{number}: node out of range 1..{n}")
        edges.append((i - 1, j - 1))
    return n, edges


def write_edge_list(filepath: PathLike, n: int, edges: Iterable[Tuple[int, int]]) -> Path:
    """Escribe una lista de aristas (índices desde 0 en memoria, desde 1 en disco)"""
    edges = list(edges)
    path = Path(filepath)
    if path.parent and not ensure_directory(path.parent):
        raise OSError(f"No se puede escribir en {path.parent}")
    lines = [f"{n} {len(edges)}"] + [f"{i + 1} {j + 1}" for i, j in edges]
    path.write_text('\n'.join(lines) + '\n', encoding='utf-8')
    return path


# ═══════════════════════════════════════════════════════════
# CSV
# ═══════════════════════════════════════════════════════════

def write_csv(
    filepath: PathLike,
    header: Sequence[str],
    rows: Iterable[Sequence[Any]]
) -> Path:
    """
    Escribe un CSV; None se escribe como celda vacía y los float con '%.17g'

    Raises:
        OSError: si la ruta no es escribible
    """
    path = Path(filepath)
    if path.parent and not ensure_directory(path.parent):
        raise OSError(f"No se puede escribir en {path.parent}")

    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_cell(value) for value in row])

    logger.info(f"CSV escrito en {path}")
    return path


def read_csv(filepath: PathLike) -> Tuple[List[str], List[List[Optional[str]]]]:
    """Lee un CSV como (encabezado, filas); las celdas vacías se devuelven como None"""
    path = _existing(filepath)
    with open(path, 'r', encoding='utf-8', newline='') as f:
        reader = csv.reader(f)
        header = next(reader, [])
        rows = [[cell if cell != '' else None for cell in row] for row in reader]
    return header, rows
