"""
SDAKit - Stochastic dual ascent / sketch-and-project para problemas de proyección
"""

__version__ = '1.0.0'
