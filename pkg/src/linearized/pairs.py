"""
Direcciones (h, w) y pares lapso-desplazamiento (f, X).
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from fields.chart import Chart, DecayWeight
from fields.field import Field
from fields.norms import weighted_norm
from fields.profiles import compact_bump, tensor_profile
from utils.config import BUMP_SEED, MIN_BUMP_SPACINGS
from utils.errors import DomainError, TensorError

logger = logging.getLogger(__name__)

# Dos derivadas compuestas: el adjunto es de segundo orden
SUPPORT_MARGIN_DEPTH = 2


@dataclass(frozen=True)
class SymPair:
    """
    Dirección de deformación: h es un (0,2)-tensor simétrico (rank (2,0))
    y w un (2,0)-tensor simétrico (rank (0,2)).
    """

    h: Field
    w: Field

    def __post_init__(self):
        if self.h.rank != (2, 0) or not self.h.symmetric:
            raise TensorError("incompatible-valence", f"h debe ser un (0,2)-tensor simétrico, rank={self.h.rank}")
        if self.w.rank != (0, 2) or not self.w.symmetric:
            raise TensorError("incompatible-valence", f"w debe ser un (2,0)-tensor simétrico, rank={self.w.rank}")
        if self.h.chart != self.w.chart:
            raise DomainError("invalid-radii", "h y w deben compartir la carta")

    @property
    def chart(self) -> Chart:
        return self.h.chart

    @classmethod
    def zeros(cls, chart: Chart) -> "SymPair":
        return cls(Field.zeros(chart, (2, 0), symmetric=True), Field.zeros(chart, (0, 2), symmetric=True))

    def __add__(self, other: "SymPair") -> "SymPair":
        return SymPair(self.h + other.h, self.w + other.w)

    def __mul__(self, scalar: float) -> "SymPair":
        return SymPair(self.h * scalar, self.w * scalar)

    __rmul__ = __mul__

    def support(self) -> np.ndarray:
        """Nodos donde h o w no se anulan."""
        return (self.h.pointwise_norm() + self.w.pointwise_norm()) > 0

    def max_abs(self, mask: Optional[np.ndarray] = None) -> float:
        return max(self.h.max_abs(mask), self.w.max_abs(mask))


@dataclass(frozen=True)
class LapseShiftPair:
    """
    Par lapso-desplazamiento (f, X) con asíntota opcional (a, b).

    Args:
        f: Escalar
        X: Campo vectorial (rank (0,1))
        asymptote: (a, b) con a escalar y b vector de ℝⁿ, o None
    """

    f: Field
    X: Field
    asymptote: Optional[Tuple[float, Tuple[float, ...]]] = None

    def __post_init__(self):
        if self.f.rank != (0, 0):
            raise TensorError("incompatible-valence", f"f debe ser escalar, rank={self.f.rank}")
        if self.X.rank != (0, 1):
            raise TensorError("incompatible-valence", f"X debe ser un vector, rank={self.X.rank}")
        if self.f.chart != self.X.chart:
            raise DomainError("invalid-radii", "f y X deben compartir la carta")
        if self.asymptote is not None:
            a, b = self.asymptote
            b = tuple(float(c) for c in b)
            if len(b) != self.f.n:
                raise TensorError("incompatible-valence", f"b debe tener {self.f.n} componentes")
            object.__setattr__(self, "asymptote", (float(a), b))

    @property
    def chart(self) -> Chart:
        return self.f.chart

    @classmethod
    def translation(cls, chart: Chart, a: float, b) -> "LapseShiftPair":
        """Par constante (a, b), asintótico a sí mismo."""
        b = np.asarray(b, dtype=float)
        return cls(Field.constant(chart, a), Field.constant(chart, b, (0, 1)), (a, tuple(b)))

    def __add__(self, other: "LapseShiftPair") -> "LapseShiftPair":
        return LapseShiftPair(self.f + other.f, self.X + other.X)

    def __mul__(self, scalar: float) -> "LapseShiftPair":
        return LapseShiftPair(self.f * scalar, self.X * scalar)

    __rmul__ = __mul__

    def decay_norms(self, rate: float) -> Tuple[float, float]:
        """
        Normas C⁰_{−rate} de (f − a, X − b).

        Args:
            rate: Tasa de decaimiento q

        Returns:
            (norma de f − a, norma de X − b)
        """
        if self.asymptote is None:
            raise TensorError("incompatible-valence", "el par no declara asíntota (a, b)")
        a, b = self.asymptote
        weight = DecayWeight(q=rate)
        df = self.f - Field.constant(self.chart, a)
        dX = self.X - Field.constant(self.chart, np.asarray(b), (0, 1))
        norms = weighted_norm(df, weight), weighted_norm(dX, weight)
        logger.debug(f"Decaimiento hacia (a, b) con tasa {rate}: {norms}")
        return norms


def support_band(chart: Chart) -> Tuple[float, float]:
    """
    Intervalo radial donde puede vivir el soporte de una dirección compacta.

    Raises:
        DomainError: ``insufficient-resolution`` si el margen de estarcido
            deja la banda vacía
    """
    margin = chart.reach(SUPPORT_MARGIN_DEPTH)
    inner, outer = chart.r_inner + margin, chart.r_outer - margin
    if inner >= outer:
        raise DomainError("insufficient-resolution",
                          f"el margen de estarcido {margin:.3f} vacía la banda [{inner:.3f}, {outer:.3f}]; "
                          f"aumente nodes_per_axis")
    return inner, outer


def min_bump_width(chart: Chart) -> float:
    """Radio mínimo para que un chichón contenga nodos de la malla."""
    return MIN_BUMP_SPACINGS * chart.spacing


def default_bump_width(chart: Chart) -> float:
    """Un cuarto de la banda segura, nunca por debajo de ``min_bump_width``."""
    inner, outer = support_band(chart)
    return max(0.25 * (outer - inner), min_bump_width(chart))


def check_bump_width(chart: Chart, width: float) -> None:
    if width < min_bump_width(chart):
        raise DomainError("insufficient-resolution",
                          f"chichón de radio {width:.3f} por debajo de {MIN_BUMP_SPACINGS:g} pasos "
                          f"de malla (h = {chart.spacing:.3f})")


def bump_direction(chart: Chart, center, width: float, h_tensor, w_tensor) -> SymPair:
    """Dirección (A·φ, B·φ) con φ un chichón de soporte B(center, width)."""
    profile = compact_bump(center, width)
    return SymPair(Field.from_source(chart, tensor_profile(profile, h_tensor), (2, 0), symmetric=True),
                   Field.from_source(chart, tensor_profile(profile, w_tensor), (0, 2), symmetric=True))


def seeded_directions(chart: Chart, count: int, seed: int = BUMP_SEED,
                      width: Optional[float] = None) -> List[SymPair]:
    """
    Lote sembrado de direcciones de soporte compacto dentro de la banda segura.

    Args:
        chart: Carta
        count: Número de direcciones
        seed: Semilla del generador
        width: Radio de los chichones; por defecto ``default_bump_width``

    Returns:
        Lista de SymPair

    Raises:
        DomainError: ``insufficient-resolution`` si el radio no abarca
            ``MIN_BUMP_SPACINGS`` pasos de malla o la banda no admite el radio
            por defecto; ``support-touches-boundary`` si un radio explícito
            no cabe en la banda
    """
    inner, outer = support_band(chart)
    if width is None:
        width = default_bump_width(chart)
        if outer - inner <= 2.0 * width:
            raise DomainError("insufficient-resolution",
                              f"la banda [{inner:.3f}, {outer:.3f}] no admite chichones de {MIN_BUMP_SPACINGS:g} "
                              f"pasos de malla (h = {chart.spacing:.3f})")
    else:
        width = float(width)
        check_bump_width(chart, width)
        if outer - inner <= 2.0 * width:
            raise DomainError("support-touches-boundary",
                              f"la banda [{inner:.3f}, {outer:.3f}] no admite chichones de radio {width:.3f}")
    rng = np.random.default_rng(seed)
    n = chart.n
    directions = []
    for _ in range(count):
        unit = rng.standard_normal(n)
        unit /= np.linalg.norm(unit)
        center = rng.uniform(inner + width, outer - width) * unit
        A = rng.standard_normal((n, n))
        B = rng.standard_normal((n, n))
        directions.append(bump_direction(chart, center, width, 0.5 * (A + A.T), 0.5 * (B + B.T)))
    logger.debug(f"{count} direcciones sembradas (semilla {seed}, radio {width:.3f})")
    return directions
