"""
Utilidades para el kit de datos iniciales asintóticamente planos.

Este paquete contiene configuración, excepciones y funciones auxiliares
compartidas por el resto del proyecto.
"""

from .config import *
from .errors import *
from .helpers import *

__version__ = "1.0.0"
