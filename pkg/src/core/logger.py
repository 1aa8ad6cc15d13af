"""
Sistema de logging de SDAKit
"""

import logging
import logging.config
import sys
from pathlib import Path
from logging.handlers import RotatingFileHandler

import yaml


def setup_logger(name='SDAKit', level='INFO', log_file='logs/sdakit.log'):
    """
    Configura y retorna un logger con handlers para consola y archivo

    Args:
        name: Nombre del logger
        level: Nivel de logging (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Ruta al archivo de log (None para sólo consola)

    Returns:
        logging.Logger: Logger configurado
    """
    logger = logging.getLogger(name)
    logger.setLevel(getattr(logging, level.upper()))

    # Evitar duplicar handlers si ya existen
    if logger.handlers:
        return logger

    log_format = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    # La salida estándar queda para los resultados de la CLI
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(getattr(logging, level.upper()))
    console_handler.setFormatter(log_format)
    logger.addHandler(console_handler)

    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)

        file_handler = RotatingFileHandler(
            log_file,
            maxBytes=10 * 1024 * 1024,  # 10 MB
            backupCount=5,
            encoding='utf-8'
        )
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(log_format)
        logger.addHandler(file_handler)

    return logger


def configure_from_yaml(path='config/logging.yaml', level='INFO', log_file='logs/sdakit.log'):
    """
    Aplica la configuración de config/logging.yaml con dictConfig

    Si el archivo no existe se usa setup_logger con los valores dados.

    Args:
        path: Ruta al YAML de logging
        level: Nivel para el fallback
        log_file: Archivo de log para el fallback

    Returns:
        logging.Logger: Logger raíz 'SDAKit'
    """
    config_path = Path(path)
    if not config_path.exists():
        return setup_logger('SDAKit', level, log_file)

    with open(config_path, 'r', encoding='utf-8') as f:
        config = yaml.safe_load(f)

    # Crear los directorios de los handlers de archivo
    for handler in config.get('handlers', {}).values():
        filename = handler.get('filename')
        if filename:
            Path(filename).parent.mkdir(parents=True, exist_ok=True)

    logging.config.dictConfig(config)
    logger = logging.getLogger('SDAKit')
    logger.setLevel(getattr(logging, level.upper()))
    return logger
