"""
Conjuntos de datos iniciales (g, π) y densidades (μ, J).

Autor: [Tu Nombre]
Fecha: [Fecha]
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, Optional

from fields.chart import Chart, DecayWeight
from fields.field import Field
from utils.config import DEFAULT_DECAY_TYPE
from utils.errors import DomainError, TensorError

logger = logging.getLogger(__name__)


def default_decay_type() -> DecayWeight:
    return DecayWeight(q=DEFAULT_DECAY_TYPE['q'], alpha=DEFAULT_DECAY_TYPE['alpha'],
                       p=DEFAULT_DECAY_TYPE['p'], q0=DEFAULT_DECAY_TYPE['q0'])


@dataclass(frozen=True)
class InitialDataSet:
    """
    Datos iniciales (g, π) sobre una carta exterior.

    ``g`` es un (0,2)-tensor simétrico (valencia (2,0) en la notación
    (cov, contra)) y ``pi`` un (2,0)-tensor simétrico (valencia (0,2)).
    """

    chart: Chart
    g: Field
    pi: Field
    type_params: DecayWeight = field(default_factory=default_decay_type)
    metadata: Dict = field(default_factory=dict)
    _memo: Dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_memo", {})
        if self.g.rank != (2, 0) or not self.g.symmetric:
            raise TensorError("incompatible-valence", f"g debe ser un (0,2)-tensor simétrico, rank={self.g.rank}")
        if self.pi.rank != (0, 2) or not self.pi.symmetric:
            raise TensorError("incompatible-valence", f"π debe ser un (2,0)-tensor simétrico, rank={self.pi.rank}")
        if self.g.chart != self.chart or self.pi.chart != self.chart:
            raise DomainError("invalid-radii", "g y π deben compartir la carta del conjunto de datos")

    @property
    def n(self) -> int:
        return self.chart.n

    def memo(self, key: str, factory):
        """Calcular una sola vez una cantidad derivada de los datos."""
        if key not in self._memo:
            self._memo[key] = factory()
        return self._memo[key]

    def with_fields(self, g: Optional[Field] = None, pi: Optional[Field] = None,
                    **metadata) -> "InitialDataSet":
        """Copia con otros campos (misma carta y tipo de decaimiento)."""
        merged = dict(self.metadata)
        merged.update(metadata)
        return replace(self, g=self.g if g is None else g, pi=self.pi if pi is None else pi,
                       metadata=merged)

    def on_grid(self) -> "InitialDataSet":
        """Copia con ambos campos respaldados solo por la malla."""
        return self.with_fields(self.g.on_grid(), self.pi.on_grid(), backend='grid')

    def describe(self) -> dict:
        return {
            'chart': self.chart.describe(),
            'family': self.metadata.get('family', 'external'),
            'backend': 'analytic' if self.g.is_analytic and self.pi.is_analytic else 'grid'
        }


@dataclass(frozen=True)
class MassCurrent:
    """Densidad de masa μ (escalar) y densidad de corriente J (vector)."""

    mu: Field
    J: Field
