"""
Carta exterior ℝⁿ∖B discretizada y tipos de decaimiento.

Este módulo contiene la carta de coordenadas (malla cartesiana uniforme
sobre la caja [-r_outer, r_outer]ⁿ que cubre el anillo
r_inner ≤ |x| ≤ r_outer) y el registro de pesos de decaimiento
(p, q, q0, α) usado por las normas ponderadas.

Autor: [Tu Nombre]
Fecha: [Fecha]
"""

import logging
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Optional, Tuple

import numpy as np

from utils.config import CORE_FRACTION, FD_ORDER, Q1_CAP, SUPPORTED_FD_ORDERS
from utils.errors import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Chart:
    """
    Carta exterior con malla tensorial uniforme.

    Los nodos dentro de la bola |x| < r_inner son nodos fantasma: los
    generadores analíticos los rellenan con la extensión natural de los
    datos (con el radio recortado a ``core_radius`` cerca del origen)
    para que los estarcidos de diferencias finitas tengan datos.
    """

    n: int
    r_inner: float
    r_outer: float
    nodes_per_axis: int
    fd_order: int = FD_ORDER

    @property
    def spacing(self) -> float:
        return 2.0 * self.r_outer / (self.nodes_per_axis - 1)

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.nodes_per_axis,) * self.n

    @property
    def half_width(self) -> int:
        """Semiancho del estarcido central de primera derivada."""
        return self.fd_order // 2

    @property
    def core_radius(self) -> float:
        return CORE_FRACTION * self.r_inner

    @property
    def node_volume(self) -> float:
        return self.spacing ** self.n

    @cached_property
    def axis(self) -> np.ndarray:
        return np.linspace(-self.r_outer, self.r_outer, self.nodes_per_axis)

    @cached_property
    def coords(self) -> np.ndarray:
        """Coordenadas de los nodos, forma (n, N, ..., N)."""
        return np.stack(np.meshgrid(*([self.axis] * self.n), indexing='ij'))

    @cached_property
    def radius(self) -> np.ndarray:
        return np.sqrt(np.sum(self.coords ** 2, axis=0))

    @cached_property
    def normals(self) -> np.ndarray:
        """Normal unitaria ν = x/|x| (el origen recibe e₁)."""
        r = self.radius
        safe = np.where(r > 0, r, 1.0)
        nu = self.coords / safe
        origin = r == 0
        if np.any(origin):
            nu[0][origin] = 1.0
        return nu

    @cached_property
    def eval_points(self) -> np.ndarray:
        """
        Puntos donde se evalúan las fuentes analíticas.

        Los nodos con |x| < core_radius se proyectan radialmente sobre la
        esfera |x| = core_radius, lo que evita la singularidad del origen.
        """
        r = self.radius
        scale = np.where(r < self.core_radius, self.core_radius / np.where(r > 0, r, 1.0), 1.0)
        points = self.coords * scale
        origin = r == 0
        if np.any(origin):
            points[0][origin] = self.core_radius
        return points

    def reach(self, depth: int) -> float:
        """Alcance radial de ``depth`` derivadas compuestas."""
        return depth * self.half_width * self.spacing

    def annulus_mask(self, depth: int = 0, r_min: Optional[float] = None,
                     r_max: Optional[float] = None) -> np.ndarray:
        """
        Nodos del anillo donde ``depth`` derivadas compuestas son fiables.

        Args:
            depth: Número de derivadas compuestas aplicadas a los datos
            r_min: Radio mínimo adicional
            r_max: Radio máximo adicional

        Returns:
            Máscara booleana con la forma de la malla
        """
        inner = self.r_inner
        if depth > 0:
            inner = max(inner, self.core_radius + self.reach(depth) * np.sqrt(self.n))
        outer = self.r_outer - self.reach(depth)
        if r_min is not None:
            inner = max(inner, r_min)
        if r_max is not None:
            outer = min(outer, r_max)
        return (self.radius >= inner) & (self.radius <= outer)

    def safe_radii(self, depth: int = 1) -> Tuple[float, float]:
        """Intervalo radial (abierto) donde caben esferas con ``depth`` derivadas."""
        inner = max(self.r_inner, self.core_radius + self.reach(depth) * np.sqrt(self.n))
        return inner, self.r_outer - self.reach(depth + 1)

    def refined(self) -> "Chart":
        """Carta con paso h/2 que comparte todos los nodos de la actual."""
        return replace(self, nodes_per_axis=2 * self.nodes_per_axis - 1)

    def index_of(self, point) -> Tuple[int, ...]:
        """Índice del nodo más cercano a ``point``."""
        point = np.asarray(point, dtype=float)
        idx = np.rint((point + self.r_outer) / self.spacing).astype(int)
        idx = np.clip(idx, 0, self.nodes_per_axis - 1)
        return tuple(int(i) for i in idx)

    def describe(self) -> dict:
        return {
            'n': self.n,
            'r_inner': self.r_inner,
            'r_outer': self.r_outer,
            'nodes_per_axis': self.nodes_per_axis,
            'fd_order': self.fd_order,
            'spacing': self.spacing
        }


def make_chart(n: int, r_inner: float, r_outer: float, nodes_per_axis: int,
               fd_order: int = FD_ORDER) -> Chart:
    """
    Construir y validar una carta exterior.

    Args:
        n: Dimensión espacial (≥ 3)
        r_inner: Radio interior (≥ 1)
        r_outer: Radio exterior (> r_inner)
        nodes_per_axis: Nodos por eje (≥ 2·fd_order + 1)
        fd_order: Orden de las diferencias finitas (2 o 4)

    Returns:
        Carta validada
    """
    if int(n) != n or n < 3:
        raise DomainError("invalid-dimension", f"n debe ser un entero ≥ 3, recibido {n}")
    if not (1.0 <= r_inner < r_outer):
        raise DomainError("invalid-radii",
                          f"se requiere 1 ≤ r_inner < r_outer, recibido ({r_inner}, {r_outer})")
    if fd_order not in SUPPORTED_FD_ORDERS:
        raise DomainError("insufficient-resolution", f"orden de diferencias no soportado: {fd_order}")
    if nodes_per_axis < 2 * fd_order + 1:
        raise DomainError("insufficient-resolution",
                          f"se requieren al menos {2 * fd_order + 1} nodos por eje, recibido {nodes_per_axis}")

    chart = Chart(int(n), float(r_inner), float(r_outer), int(nodes_per_axis), int(fd_order))
    logger.debug(f"Carta creada: {chart.describe()}")
    return chart


@dataclass(frozen=True)
class DecayWeight:
    """
    Peso de decaimiento para normas ponderadas y tipo de planitud asintótica.

    ``alpha`` None desactiva la seminorma de Hölder; ``p`` None impide el
    modo Sobolev.
    """

    q: float
    k: int = 0
    alpha: Optional[float] = None
    p: Optional[float] = None
    q0: Optional[float] = None
    q1: Optional[float] = None

    def with_derivatives(self, k: int) -> "DecayWeight":
        return replace(self, k=k)


def default_q1(q: float, q0: float, n: int) -> float:
    """q₁ = min(q₀, 2 + 2q − n, Q1_CAP)."""
    return min(q0, 2.0 + 2.0 * q - n, Q1_CAP)


def validate_decay_type(weight: DecayWeight, n: int) -> DecayWeight:
    """
    Validar un tipo (p, q, q0, α) y completar q₁.

    Args:
        weight: Registro con p, q, q0 y alpha definidos
        n: Dimensión

    Returns:
        Registro con q₁ calculado
    """
    problems = []
    if weight.p is None or weight.p <= n:
        problems.append(f"p={weight.p} debe ser > n={n}")
    if not ((n - 2) / 2 < weight.q < n - 2):
        problems.append(f"q={weight.q} debe estar en (({n}-2)/2, {n}-2)")
    if weight.alpha is None or not (0 < weight.alpha < 1):
        problems.append(f"alpha={weight.alpha} debe estar en (0, 1)")
    elif weight.q + weight.alpha <= n - 2:
        problems.append("se requiere q + alpha > n - 2")
    if weight.q0 is None or weight.q0 <= 0:
        problems.append(f"q0={weight.q0} debe ser > 0")
    if problems:
        raise DomainError("invalid-decay-type", "; ".join(problems))

    q1 = weight.q1 if weight.q1 is not None else default_q1(weight.q, weight.q0, n)
    if not (0 < q1 < 1) or n + q1 > min(n + weight.q0, 2 + 2 * weight.q) + 1e-12:
        raise DomainError("invalid-decay-type", f"q1={q1} incompatible con (q, q0)")
    return replace(weight, q1=q1)
