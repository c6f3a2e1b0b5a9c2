"""
Cálculo coordenado sobre campos: derivadas parciales y gradientes.
"""

import logging
from typing import Optional, Sequence

import numpy as np

from fields.analytic import AnalyticSource
from fields.field import Field
from utils.errors import DomainError, TensorError

logger = logging.getLogger(__name__)


def _has_exact_jet(source: AnalyticSource, chart, multi_index) -> bool:
    """True si la fuente conoce exactamente la derivada pedida."""
    if source is None or source.jet is None:
        return False
    point = np.full((chart.n, 1), chart.r_inner + 0.5 * (chart.r_outer - chart.r_inner)) / np.sqrt(chart.n)
    return source.evaluate(point, multi_index) is not None


def derivative(field: Field, axis_multi_index: Sequence[int]) -> Field:
    """
    Derivada parcial coordenada ∂_{i₁…i_k} componente a componente.

    Con backend analítico y jets disponibles el resultado es exacto y
    conserva la fuente; en otro caso se usan diferencias finitas de orden
    ``fd_order`` (hasta segundo orden).

    Args:
        field: Campo de entrada
        axis_multi_index: Lista de ejes (0..n-1)

    Returns:
        Campo con la misma valencia que ``field``
    """
    mi = tuple(int(a) for a in axis_multi_index)
    if any(a < 0 or a >= field.n for a in mi):
        raise DomainError("invalid-dimension", f"eje fuera de rango en {mi}")
    if not mi:
        return field

    if _has_exact_jet(field.source, field.chart, mi):
        return Field.from_source(field.chart, field.source.derived(mi), field.rank)
    if len(mi) > 2:
        raise DomainError("stencil-out-of-domain",
                          f"derivada de orden {len(mi)} no soportada en un campo de malla")
    return Field(field.chart, field.rank, field.grid_derivative(mi))


def gradient(field: Field) -> Field:
    """
    Gradiente coordenado: añade un índice covariante al final.

    Args:
        field: Campo de valencia (cov, contra)

    Returns:
        Campo de valencia (cov + 1, contra)
    """
    rank = (field.rank[0] + 1, field.rank[1])
    n = field.n
    valence = field.valence
    source: Optional[AnalyticSource] = field.source

    if _has_exact_jet(source, field.chart, (0,)):
        def func(x):
            return np.stack([source.evaluate(x, (a,)) for a in range(n)], axis=valence)

        def jet(x, mi):
            parts = [source.evaluate(x, (a,) + tuple(mi)) for a in range(n)]
            if any(part is None for part in parts):
                return None
            return np.stack(parts, axis=valence)

        return Field.from_source(field.chart, AnalyticSource(func, jet), rank)

    return Field(field.chart, rank, field.partials())


def flat_laplacian(field: Field) -> np.ndarray:
    """Δ₀ componente a componente, forma comps + malla."""
    d2 = field.second_partials()
    return np.trace(d2, axis1=field.valence, axis2=field.valence + 1)


def flat_divergence(field: Field) -> np.ndarray:
    """
    Divergencia euclídea ∂_j T^{…j}: contrae el último índice de
    componentes con el índice de derivada.
    """
    if field.valence == 0:
        raise TensorError("incompatible-valence", "la divergencia requiere al menos un índice")
    return np.trace(field.partials(), axis1=field.valence - 1, axis2=field.valence)
