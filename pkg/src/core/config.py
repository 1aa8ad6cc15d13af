"""
Gestor de configuración de SDAKit
"""

import configparser
from pathlib import Path
import logging
from typing import List, Optional

from models.bench import BenchConfig
from models.reports import SolveOptions


DEFAULTS = {
    'solver': {
        'max_iters': '10000',
        'tol_residual': '',
        'tol_gap': '',
        'gap_check_period': '100',
        'stagnation_tol': '1e-8',
        'seed': '0'
    },
    'bench': {
        'n': '300',
        'ranks': '40,80,160,300',
        'trials': '10',
        'iterations': '100000',
        'record_every': '100',
        'method': 'kaczmarz',
        'probabilities': 'row-norm',
        'workers': '1',
        'target_error': '1e-6',
        'output': 'results/bench.csv'
    },
    'gossip': {
        'rounds': '1000',
        'record_every': '1',
        'model': '1'
    },
    'linalg': {
        'consistency_tol': '1e-8'
    },
    'logging': {
        'level': 'INFO',
        'file': 'logs/sdakit.log',
        'yaml': 'config/logging.yaml'
    }
}


class Config:
    """
    Gestiona la configuración desde archivo .ini sobre valores por defecto
    """

    def __init__(self, config_file: Optional[str] = 'config/sda.ini'):
        """
        Inicializa el gestor de configuración

        Args:
            config_file: Ruta al archivo de configuración (None = sólo valores por defecto)
        """
        self.config_file = Path(config_file) if config_file else None
        self.config = configparser.ConfigParser()
        self.config.read_dict(DEFAULTS)
        self.logger = logging.getLogger('SDAKit.Config')

        if self.config_file is not None:
            self.load()

    def load(self):
        """
        Carga la configuración desde el archivo
        """
        if not self.config_file.exists():
            raise FileNotFoundError(
                f"Archivo de configuración no encontrado: {self.config_file}\n"
                f"Usa 'config/sda.ini' como plantilla u omite --config para los valores por defecto"
            )

        self.config.read(self.config_file, encoding='utf-8')
        self.logger.debug(f"Configuración cargada desde: {self.config_file}")

    def get(self, section, key, fallback=None):
        """
        Obtiene un valor de configuración

        Args:
            section: Sección del archivo ini
            key: Clave a buscar
            fallback: Valor por defecto si no existe

        Returns:
            str: Valor de configuración
        """
        return self.config.get(section, key, fallback=fallback)

    def getint(self, section, key, fallback=0):
        return self.config.getint(section, key, fallback=fallback)

    def getfloat(self, section, key, fallback=None):
        """
        Obtiene un valor real; una clave vacía devuelve el fallback
        """
        value = self.config.get(section, key, fallback='')
        if value is None or value.strip() == '':
            return fallback
        return float(value)

    def getboolean(self, section, key, fallback=False):
        return self.config.getboolean(section, key, fallback=fallback)

    def set(self, section, key, value):
        """
        Establece un valor de configuración

        Args:
            section: Sección del archivo ini
            key: Clave a establecer
            value: Valor a guardar
        """
        if not self.config.has_section(section):
            self.config.add_section(section)

        self.config.set(section, key, '' if value is None else str(value))

    def save(self, path=None):
        """
        Guarda la configuración al archivo
        """
        target = Path(path) if path else self.config_file
        if target is None:
            raise ValueError("No hay archivo de configuración para guardar")

        with open(target, 'w', encoding='utf-8') as f:
            self.config.write(f)

        self.logger.info(f"Configuración guardada en: {target}")

    def validate(self):
        """
        Valida tipos y rangos de los valores configurados

        Returns:
            bool: True si la configuración es válida
        """
        errors = []

        positive_ints = [
            ('solver', 'max_iters'),
            ('solver', 'gap_check_period'),
            ('bench', 'n'),
            ('bench', 'trials'),
            ('bench', 'iterations'),
            ('bench', 'record_every'),
            ('bench', 'workers'),
            ('gossip', 'record_every')
        ]
        for section, key in positive_ints:
            try:
                if self.getint(section, key) < 1:
                    errors.append(f"'{key}' en [{section}] debe ser ≥ 1")
            except ValueError:
                errors.append(f"'{key}' en [{section}] no es un entero")

        positive_floats = [
            ('solver', 'tol_residual'),
            ('solver', 'tol_gap'),
            ('solver', 'stagnation_tol'),
            ('bench', 'target_error'),
            ('linalg', 'consistency_tol')
        ]
        for section, key in positive_floats:
            try:
                value = self.getfloat(section, key)
                if value is not None and not value > 0:
                    errors.append(f"'{key}' en [{section}] debe ser > 0")
            except ValueError:
                errors.append(f"'{key}' en [{section}] no es un número")

        try:
            ranks = self.ranks()
            n = self.getint('bench', 'n')
            if any(not 1 <= r <= n for r in ranks):
                errors.append(f"'ranks' en [bench] debe estar en 1..{n}")
        except ValueError:
            errors.append("'ranks' en [bench] debe ser una lista de enteros")

        if self.get('gossip', 'model') not in ('1', '2'):
            errors.append("'model' en [gossip] debe ser 1 o 2")

        if errors:
            self.logger.error("Errores de configuración:")
            for error in errors:
                self.logger.error(f"  - {error}")
            return False

        return True

    def get_all(self):
        """
        Retorna toda la configuración como diccionario

        Returns:
            dict: Configuración completa
        """
        return {section: dict(self.config.items(section))
                for section in self.config.sections()}

    # ═══════════════════════════════════════════════════════════
    # VISTAS TIPADAS
    # ═══════════════════════════════════════════════════════════

    def ranks(self) -> List[int]:
        return [int(token) for token in self.get('bench', 'ranks').split(',') if token.strip()]

    def solve_options(self) -> SolveOptions:
        """SolveOptions con los valores de [solver]"""
        return SolveOptions(
            max_iters=self.getint('solver', 'max_iters'),
            tol_residual=self.getfloat('solver', 'tol_residual'),
            tol_gap=self.getfloat('solver', 'tol_gap'),
            gap_check_period=self.getint('solver', 'gap_check_period'),
            stagnation_tol=self.getfloat('solver', 'stagnation_tol'),
            seed=self.getint('solver', 'seed')
        )

    def bench_defaults(self) -> BenchConfig:
        """BenchConfig con los valores de [bench]; el rango es el último de 'ranks'"""
        n = self.getint('bench', 'n')
        ranks = self.ranks()
        return BenchConfig(
            n=n,
            rank=ranks[-1] if ranks else n,
            seed=self.getint('solver', 'seed'),
            method=self.get('bench', 'method'),
            probabilities=self.get('bench', 'probabilities'),
            trials=self.getint('bench', 'trials'),
            iterations=self.getint('bench', 'iterations'),
            record_every=self.getint('bench', 'record_every'),
            workers=self.getint('bench', 'workers'),
            target_error=self.getfloat('bench', 'target_error'),
            output=self.get('bench', 'output')
        )
