"""
Jerarquía de excepciones de SDAKit

Cada clase hereda también de una excepción estándar para que el código que ya
captura ValueError / ArithmeticError siga funcionando.
"""


class SDAError(Exception):
    """Error base del proyecto"""


class ContractViolation(SDAError, ValueError):
    """Entradas inválidas: dimensiones, probabilidades, parámetros fuera de rango"""


class NumericalError(SDAError, ArithmeticError):
    """Fallo numérico: matriz nula, no SPD, filas nulas, etc."""


class InconsistentSystemError(SDAError, ArithmeticError):
    """El sistema Ax = b no tiene solución"""

    def __init__(self, residual: float = None):
        self.residual = residual
        message = "inconsistent system"
        if residual is not None:
            message = f"inconsistent system (residual {residual:.3e})"
        super().__init__(message)


class AnalysisUnavailableError(SDAError, ValueError):
    """El análisis exacto sólo existe para distribuciones discretas finitas"""

    def __init__(self, sampler: str = None):
        message = "analysis unavailable for this sampler"
        if sampler:
            message = f"{message}: {sampler}"
        super().__init__(message)
