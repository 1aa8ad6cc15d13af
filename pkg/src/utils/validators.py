"""
SDAKit - Validators
Validaciones de argumentos de la CLI
"""

import os
from pathlib import Path
from typing import Union


def validate_seed(seed: int) -> bool:
    """
    Valida una semilla (entero no negativo, requerido por SeedSequence)

    Args:
        seed: Semilla a validar

    Returns:
        True si la semilla es válida
    """
    return isinstance(seed, int) and not isinstance(seed, bool) and seed >= 0


def validate_output_path(path: Union[str, Path]) -> bool:
    """
    Valida que se pueda escribir en una ruta de salida

    El directorio padre debe existir y ser escribible, o poder crearse
    bajo un ancestro escribible.

    Args:
        path: Ruta del archivo de salida

    Returns:
        True si la ruta es escribible
    """
    if not path:
        return False

    target = Path(path)
    if target.is_dir():
        return False
    if target.exists():
        return os.access(target, os.W_OK)

    parent = target.parent if str(target.parent) else Path('.')
    while not parent.exists():
        if parent.parent == parent:
            return False
        parent = parent.parent
    return parent.is_dir() and os.access(parent, os.W_OK)
