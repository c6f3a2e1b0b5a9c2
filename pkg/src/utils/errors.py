"""
Jerarquía de excepciones del kit.

Cada excepción lleva un ``code`` estable (kebab-case) que la CLI y los
informes usan para identificar la causa.
"""

from typing import Optional


class ToolkitError(ValueError):
    """
    Error base del kit.

    Args:
        code: Etiqueta estable del error (p. ej. 'invalid-radii')
        message: Mensaje descriptivo
    """

    def __init__(self, code: str, message: str = ""):
        self.code = code
        super().__init__(f"[{code}] {message}" if message else f"[{code}]")


class DomainError(ToolkitError):
    """Carta, radios, resolución o soporte fuera del dominio válido."""


class TensorError(ToolkitError):
    """Valencias incompatibles o no soportadas."""


class MetricError(ToolkitError):
    """Métrica no definida positiva o perturbación demasiado grande."""

    def __init__(self, code: str, message: str = "", worst_node: Optional[tuple] = None):
        self.worst_node = worst_node
        super().__init__(code, message)


class FitError(ToolkitError):
    """Ajustes por mínimos cuadrados degenerados o mal condicionados."""


class SolverError(ToolkitError):
    """Fallos de solvers iterativos (CG, GMRES, Newton)."""

    def __init__(self, code: str, message: str = "", iterations: Optional[int] = None):
        self.iterations = iterations
        super().__init__(code, message)


class DatasetError(ToolkitError):
    """Errores de generación, manifiesto o entrada/salida de datasets."""
