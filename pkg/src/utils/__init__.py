# src/utils/__init__.py
"""
SDAKit - Utilities Module
Funciones de utilidad compartidas en todo el proyecto
"""

from utils.validators import (
    validate_seed,
    validate_output_path
)

from utils.formatters import (
    format_duration,
    format_scientific,
    format_rate,
    format_iterations,
    format_verdict
)

from utils.file_utils import (
    ensure_directory,
    read_matrix,
    write_matrix,
    read_vector,
    write_vector,
    read_edge_list,
    write_edge_list,
    write_csv,
    read_csv
)

__all__ = [
    # validators
    'validate_seed',
    'validate_output_path',

    # formatters
    'format_duration',
    'format_scientific',
    'format_rate',
    'format_iterations',
    'format_verdict',

    # file_utils
    'ensure_directory',
    'read_matrix',
    'write_matrix',
    'read_vector',
    'write_vector',
    'read_edge_list',
    'write_edge_list',
    'write_csv',
    'read_csv',
]
