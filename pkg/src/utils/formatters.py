"""
SDAKit - Formatters
Funciones para formatear tasas, errores y duraciones en la salida de la CLI
"""

from typing import Optional, Union


def format_duration(
    seconds: Union[int, float],
    short: bool = False,
    max_units: int = 2
) -> str:
    """
    Formatea una duración en segundos a formato legible

    Args:
        seconds: Duración en segundos
        short: Si True, usa formato abreviado (1h 2m vs 1 hour 2 minutes)
        max_units: Máximo número de unidades a mostrar

    Returns:
        String formateado
    """
    if seconds < 1:
        seconds = max(seconds, 0)
        return f"{seconds * 1000:.0f}ms" if short else f"{seconds * 1000:.0f} milliseconds"

    seconds = int(seconds)
    units = [
        ('hour', 'h', 3600),
        ('minute', 'm', 60),
        ('second', 's', 1)
    ]

    result = []
    remaining = seconds
    for long_name, short_name, divisor in units:
        value = remaining // divisor
        if value > 0:
            if short:
                result.append(f"{value}{short_name}")
            else:
                plural = 's' if value > 1 else ''
                result.append(f"{value} {long_name}{plural}")
            remaining %= divisor
            if len(result) >= max_units:
                break

    return ' '.join(result)


def format_scientific(value: Optional[float], precision: int = 3) -> str:
    """1.234e-08; '-' para None"""
    if value is None:
        return '-'
    return f"{value:.{precision}e}"


def format_rate(rho: float, precision: int = 6) -> str:
    """
    Formatea ρ, mostrando 1 − ρ cuando ρ está muy cerca de 1

    Returns:
        String formateado (ej: "0.75" o "1 - 3.2e-05")
    """
    if rho < 1 and 1 - rho < 10 ** (-precision + 2):
        return f"1 - {1 - rho:.2e}"
    return f"{rho:.{precision}g}"


def format_iterations(k: Optional[int]) -> str:
    """Estimación de iteraciones; '∞' cuando no hay garantía"""
    return '∞' if k is None else f"{k:,}"


def format_verdict(flag: bool, yes: str = 'sí', no: str = 'no') -> str:
    return f"✅ {yes}" if flag else f"⚠️  {no}"
