"""
Campos tensoriales sobre una carta exterior.

Un ``Field`` guarda las componentes de un tensor de valencia
(covariante, contravariante) muestreadas en la malla de la carta y,
opcionalmente, una fuente analítica que proporciona valores y derivadas
exactas en puntos arbitrarios.

Disposición de las componentes: primero los índices contravariantes,
luego los covariantes, y al final los n ejes de la malla. Un índice de
derivada nuevo se añade como último índice covariante.

Autor: [Tu Nombre]
Fecha: [Fecha]
"""

import logging
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from fields.analytic import AnalyticSource, combine
from fields.chart import Chart
from fields.stencils import grid_gradient, interpolate
from utils.errors import DomainError, TensorError

logger = logging.getLogger(__name__)

Rank = Tuple[int, int]


class Field:
    """
    Campo tensorial inmutable.

    Args:
        chart: Carta sobre la que vive el campo
        rank: Valencia (covariante, contravariante)
        values: Muestras en la malla, forma (n,)*valencia + chart.shape;
            si es None se muestrean de ``source`` la primera vez que se piden
        symmetric: Campo de valencia total 2 simétrico en sus dos índices
        source: Fuente analítica opcional
    """

    def __init__(self, chart: Chart, rank: Rank = (0, 0), values: Optional[np.ndarray] = None,
                 symmetric: bool = False, source: Optional[AnalyticSource] = None):
        self.chart = chart
        self.rank = (int(rank[0]), int(rank[1]))
        self.symmetric = bool(symmetric)
        self.source = source
        self._values = None
        self._cache: Dict[str, object] = {}
        self._spline_cache: Dict[Tuple, np.ndarray] = {}

        if self.symmetric and self.valence != 2:
            raise TensorError("incompatible-valence",
                              f"solo los campos de valencia total 2 pueden ser simétricos, rank={self.rank}")
        if values is None and source is None:
            raise TensorError("incompatible-valence", "un campo necesita muestras o una fuente analítica")
        if values is not None:
            self._values = self._prepare(np.asarray(values, dtype=float))

    # ------------------------------------------------------------------
    # Forma
    # ------------------------------------------------------------------
    @property
    def n(self) -> int:
        return self.chart.n

    @property
    def valence(self) -> int:
        return self.rank[0] + self.rank[1]

    @property
    def comp_shape(self) -> Tuple[int, ...]:
        return (self.n,) * self.valence

    @property
    def is_analytic(self) -> bool:
        return self.source is not None

    def _prepare(self, values: np.ndarray) -> np.ndarray:
        expected = self.comp_shape + self.chart.shape
        if values.shape != expected:
            raise TensorError("incompatible-valence",
                              f"forma {values.shape} no coincide con la esperada {expected}")
        if self.symmetric:
            values = 0.5 * (values + np.swapaxes(values, 0, 1))
        values = np.ascontiguousarray(values)
        values.setflags(write=False)
        return values

    @property
    def values(self) -> np.ndarray:
        """Muestras en la malla (solo lectura)."""
        if self._values is None:
            sampled = self.source.evaluate(self.chart.eval_points)
            sampled = np.broadcast_to(sampled, self.comp_shape + self.chart.shape)
            self._values = self._prepare(np.array(sampled, dtype=float))
        return self._values

    def memo(self, key: str, factory: Callable[[], object]):
        """Calcular una sola vez una cantidad derivada del campo."""
        slot = 'memo:' + key
        if slot not in self._cache:
            self._cache[slot] = factory()
        return self._cache[slot]

    # ------------------------------------------------------------------
    # Derivadas parciales en la malla
    # ------------------------------------------------------------------
    def _exact_on_grid(self, multi_indices: Sequence[Tuple[int, ...]]) -> Optional[np.ndarray]:
        if self.source is None or self.source.jet is None:
            return None
        parts = []
        for mi in multi_indices:
            part = self.source.evaluate(self.chart.eval_points, mi)
            if part is None:
                return None
            parts.append(np.broadcast_to(part, self.comp_shape + self.chart.shape))
        return np.stack(parts, axis=self.valence)

    def partials(self) -> np.ndarray:
        """Primeras derivadas parciales, forma comps + (n,) + malla."""
        if 'd1' not in self._cache:
            exact = self._exact_on_grid([(a,) for a in range(self.n)])
            if exact is None:
                exact = grid_gradient(self.values, self.n, self.chart.spacing, self.chart.fd_order)
            exact.setflags(write=False)
            self._cache['d1'] = exact
        return self._cache['d1']

    def second_partials(self) -> np.ndarray:
        """Segundas derivadas parciales, forma comps + (n, n) + malla."""
        if 'd2' not in self._cache:
            n = self.n
            exact = None
            if self.source is not None and self.source.jet is not None:
                rows = self._exact_on_grid([(a, b) for a in range(n) for b in range(n)])
                if rows is not None:
                    exact = rows.reshape(self.comp_shape + (n, n) + self.chart.shape)
            if exact is None:
                exact = grid_gradient(self.partials(), n, self.chart.spacing, self.chart.fd_order)
            exact.setflags(write=False)
            self._cache['d2'] = exact
        return self._cache['d2']

    def grid_derivative(self, multi_index: Sequence[int]) -> np.ndarray:
        """Componentes de ∂_{multi_index} en la malla."""
        mi = tuple(multi_index)
        if len(mi) == 0:
            return self.values
        if len(mi) == 1:
            return self.partials()[(slice(None),) * self.valence + (mi[0],)]
        if len(mi) == 2:
            return self.second_partials()[(slice(None),) * self.valence + mi]
        exact = self._exact_on_grid([tuple(sorted(mi))])
        if exact is None:
            raise DomainError("stencil-out-of-domain",
                              f"derivadas de orden {len(mi)} solo disponibles con backend analítico")
        return exact[(slice(None),) * self.valence + (0,)]

    # ------------------------------------------------------------------
    # Evaluación en puntos arbitrarios
    # ------------------------------------------------------------------
    def at(self, points: np.ndarray, multi_index: Sequence[int] = ()) -> np.ndarray:
        """
        Evaluar el campo (o una derivada parcial) en puntos arbitrarios.

        Args:
            points: Puntos, forma (n, M)
            multi_index: Ejes de derivación

        Returns:
            Array comps + (M,)
        """
        points = np.asarray(points, dtype=float)
        if self.source is not None:
            exact = self.source.evaluate(points, multi_index)
            if exact is not None:
                return np.broadcast_to(exact, self.comp_shape + points.shape[1:])

        if np.any(np.abs(points) > self.chart.r_outer + 1e-12):
            raise DomainError("stencil-out-of-domain", "punto fuera de la caja de la carta")
        data = self.grid_derivative(multi_index)
        key = ('d',) + tuple(sorted(multi_index))
        return interpolate(data, self.n, self.chart.r_outer, self.chart.spacing,
                           self.chart.fd_order, points, cache=self._spline_cache, cache_key=key)

    # ------------------------------------------------------------------
    # Constructores y variantes
    # ------------------------------------------------------------------
    @classmethod
    def from_source(cls, chart: Chart, source: AnalyticSource, rank: Rank = (0, 0),
                    symmetric: bool = False) -> "Field":
        return cls(chart, rank, None, symmetric, source)

    @classmethod
    def from_function(cls, chart: Chart, func: Callable[[np.ndarray], np.ndarray],
                      rank: Rank = (0, 0), symmetric: bool = False,
                      jet: Optional[Callable] = None) -> "Field":
        """
        Campo analítico a partir de una función de puntos.

        Args:
            chart: Carta
            func: x (n, ...) -> componentes
            rank: Valencia
            symmetric: Simetría de índices
            jet: Derivadas exactas opcionales (x, multi_index) -> componentes
        """
        return cls(chart, rank, None, symmetric, AnalyticSource(func, jet))

    @classmethod
    def constant(cls, chart: Chart, components, rank: Rank = (0, 0),
                 symmetric: bool = False) -> "Field":
        """Campo de componentes constantes (derivadas exactas nulas)."""
        comps = np.asarray(components, dtype=float)

        def func(x):
            return np.broadcast_to(comps.reshape(comps.shape + (1,) * (x.ndim - 1)),
                                   comps.shape + x.shape[1:])

        def jet(x, mi):
            return np.zeros(comps.shape + x.shape[1:])

        return cls(chart, rank, None, symmetric, AnalyticSource(func, jet))

    @classmethod
    def zeros(cls, chart: Chart, rank: Rank = (0, 0), symmetric: bool = False) -> "Field":
        return cls.constant(chart, np.zeros((chart.n,) * (rank[0] + rank[1])), rank, symmetric)

    @classmethod
    def euclidean(cls, chart: Chart) -> "Field":
        """Métrica de fondo δ."""
        return cls.constant(chart, np.eye(chart.n), (2, 0), symmetric=True)

    def with_values(self, values: np.ndarray, rank: Optional[Rank] = None,
                    symmetric: Optional[bool] = None) -> "Field":
        """Campo de malla en la misma carta (sin fuente analítica)."""
        rank = self.rank if rank is None else rank
        symmetric = self.symmetric if symmetric is None else symmetric
        return Field(self.chart, rank, values, symmetric)

    def on_grid(self) -> "Field":
        """Copia respaldada solo por las muestras de malla."""
        return Field(self.chart, self.rank, self.values, self.symmetric)

    def component(self, index: Tuple[int, ...]) -> "Field":
        """Componente escalar ``index`` como campo de malla."""
        return Field(self.chart, (0, 0), self.values[tuple(index)])

    # ------------------------------------------------------------------
    # Aritmética
    # ------------------------------------------------------------------
    def _check_compatible(self, other: "Field") -> None:
        if other.chart != self.chart:
            raise DomainError("invalid-radii", "los campos viven en cartas distintas")
        if other.rank != self.rank:
            raise TensorError("incompatible-valence", f"valencias {self.rank} y {other.rank}")

    def _linear(self, other: "Field", coefficient: float) -> "Field":
        self._check_compatible(other)
        symmetric = self.symmetric and other.symmetric
        if self.source is not None and other.source is not None:
            return Field(self.chart, self.rank, None, symmetric,
                         combine([self.source, other.source], [1.0, coefficient]))
        return Field(self.chart, self.rank, self.values + coefficient * other.values, symmetric)

    def __add__(self, other: "Field") -> "Field":
        return self._linear(other, 1.0)

    def __sub__(self, other: "Field") -> "Field":
        return self._linear(other, -1.0)

    def __mul__(self, scalar: float) -> "Field":
        scalar = float(scalar)
        if self.source is not None:
            return Field(self.chart, self.rank, None, self.symmetric, combine([self.source], [scalar]))
        return Field(self.chart, self.rank, scalar * self.values, self.symmetric)

    __rmul__ = __mul__

    def __neg__(self) -> "Field":
        return self * -1.0

    # ------------------------------------------------------------------
    # Reducciones
    # ------------------------------------------------------------------
    def pointwise_norm(self) -> np.ndarray:
        """Norma euclídea de las componentes en cada nodo."""
        return pointwise_norm(self.values, self.valence)

    def max_abs(self, mask: Optional[np.ndarray] = None) -> float:
        norm = self.pointwise_norm()
        if mask is not None:
            norm = norm[mask]
        return float(norm.max()) if norm.size else 0.0

    def __repr__(self) -> str:
        backend = 'analytic' if self.is_analytic else 'grid'
        return f"Field(rank={self.rank}, n={self.n}, symmetric={self.symmetric}, backend={backend})"


def pointwise_norm(values: np.ndarray, comp_axes: int) -> np.ndarray:
    """Norma euclídea sobre los ``comp_axes`` primeros ejes."""
    if comp_axes == 0:
        return np.abs(values)
    return np.sqrt(np.sum(values ** 2, axis=tuple(range(comp_axes))))
