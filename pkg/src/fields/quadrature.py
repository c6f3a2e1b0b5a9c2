"""
Cuadratura sobre esferas coordenadas |x| = r.

Para n = 3 se usa la regla de producto Gauss–Legendre en cos θ por una
regla uniforme en φ, exacta para armónicos esféricos de grado alto. Para
n > 3 solo hay Monte Carlo sembrado (backend analítico), que además
devuelve el error estándar.

Autor: [Tu Nombre]
Fecha: [Fecha]
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Tuple

import numpy as np
from scipy import special

from fields.field import Field
from utils.config import MONTE_CARLO_SAMPLES, MONTE_CARLO_SEED, QUAD_ORDER
from utils.errors import DomainError, TensorError

logger = logging.getLogger(__name__)

PointFunction = Callable[[np.ndarray], np.ndarray]


def unit_sphere_area(n: int) -> float:
    """ω_{n−1} = 2π^{n/2}/Γ(n/2), área de la esfera unidad de ℝⁿ."""
    return float(2.0 * np.pi ** (n / 2.0) / special.gamma(n / 2.0))


@dataclass(frozen=True)
class SphereRule:
    """
    Regla de cuadratura sobre la esfera unidad.

    ``stochastic`` indica una regla de Monte Carlo (pesos iguales).
    """

    directions: np.ndarray
    weights: np.ndarray
    stochastic: bool = False

    def scaled(self, radius: float) -> Tuple[np.ndarray, np.ndarray]:
        """Puntos y pesos sobre la esfera de radio ``radius``."""
        n = self.directions.shape[0]
        return radius * self.directions, self.weights * radius ** (n - 1)


@lru_cache(maxsize=32)
def sphere_rule(n: int, quad_order: int = QUAD_ORDER,
                samples: int = MONTE_CARLO_SAMPLES, seed: int = MONTE_CARLO_SEED) -> SphereRule:
    """
    Regla determinista para n = 3 o Monte Carlo sembrado para n > 3.

    Args:
        n: Dimensión
        quad_order: Nodos polares de Gauss–Legendre (azimutales: 2·quad_order)
        samples: Muestras de Monte Carlo
        seed: Semilla de Monte Carlo

    Returns:
        Regla sobre la esfera unidad
    """
    if n == 3:
        cos_theta, w_theta = special.roots_legendre(quad_order)
        n_phi = 2 * quad_order
        phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
        sin_theta = np.sqrt(1.0 - cos_theta ** 2)
        ct, ph = np.meshgrid(cos_theta, phi, indexing='ij')
        st, _ = np.meshgrid(sin_theta, phi, indexing='ij')
        directions = np.stack([st * np.cos(ph), st * np.sin(ph), ct]).reshape(3, -1)
        weights = np.repeat(w_theta, n_phi) * (2.0 * np.pi / n_phi)
        return SphereRule(directions, weights)

    rng = np.random.default_rng(seed)
    gaussian = rng.standard_normal((n, samples))
    directions = gaussian / np.linalg.norm(gaussian, axis=0)
    weights = np.full(samples, unit_sphere_area(n) / samples)
    logger.debug(f"Regla de Monte Carlo para n={n} con {samples} muestras")
    return SphereRule(directions, weights, stochastic=True)


def integrate_on_sphere(func: PointFunction, n: int, radius: float,
                        quad_order: int = QUAD_ORDER) -> Tuple[float, float]:
    """
    Integrar una función de puntos escalar sobre |x| = radius.

    Args:
        func: x (n, M) -> valores (M,)
        n: Dimensión
        radius: Radio de la esfera
        quad_order: Orden de la regla

    Returns:
        (valor, error estándar); el error es 0 para la regla determinista
    """
    rule = sphere_rule(n, quad_order)
    points, weights = rule.scaled(radius)
    values = np.asarray(func(points), dtype=float)
    value = float(np.dot(weights, values))
    if not rule.stochastic:
        return value, 0.0
    stderr = float(weights.sum() * values.std(ddof=1) / np.sqrt(values.size))
    return value, stderr


def _check_radius(field: Field, radius: float) -> None:
    chart = field.chart
    if not (chart.r_inner < radius < chart.r_outer):
        raise DomainError("radius-out-of-chart",
                          f"radio {radius} fuera de ({chart.r_inner}, {chart.r_outer})")
    if chart.n != 3 and not field.is_analytic:
        raise DomainError("unsupported-dimension",
                          f"la cuadratura de malla solo existe para n=3 (n={chart.n})")


def sphere_flux_estimate(field: Field, radius: float,
                         quad_order: int = QUAD_ORDER) -> Tuple[float, float]:
    """
    Flujo ∫_{|x|=r} F_j ν^j dH^{n−1} con su error estándar.

    Args:
        field: Campo de valencia (1,0) o (0,1)
        radius: Radio de la esfera
        quad_order: Orden de la regla polar

    Returns:
        (flujo, error estándar)
    """
    if field.valence != 1:
        raise TensorError("incompatible-valence",
                          f"el flujo requiere un campo vectorial o covectorial, rank={field.rank}")
    _check_radius(field, radius)

    def normal_component(points):
        return np.einsum('jm,jm->m', field.at(points), points / radius)

    return integrate_on_sphere(normal_component, field.n, radius, quad_order)


def sphere_flux(covector_field: Field, radius: float, quad_order: int = QUAD_ORDER) -> float:
    """Flujo de un campo (co)vectorial a través de |x| = radius."""
    return sphere_flux_estimate(covector_field, radius, quad_order)[0]


def sphere_integral(field: Field, radius: float, quad_order: int = QUAD_ORDER) -> float:
    """Integral de un campo escalar sobre |x| = radius."""
    if field.valence != 0:
        raise TensorError("incompatible-valence", f"se esperaba un escalar, rank={field.rank}")
    _check_radius(field, radius)
    return integrate_on_sphere(field.at, field.n, radius, quad_order)[0]


def sphere_average(field: Field, radius: float, quad_order: int = QUAD_ORDER) -> float:
    """Media de un campo escalar sobre |x| = radius."""
    area = unit_sphere_area(field.n) * radius ** (field.n - 1)
    return sphere_integral(field, radius, quad_order) / area
