"""
Operador de restricciones Φ(g, π) = (2μ, J) y operador modificado
Φ̄_{(g,π)}(γ, τ) = Φ(γ, τ) + (0, ½ γ·(div_g π)).

Autor: [Tu Nombre]
Fecha: [Fecha]
"""

import logging
from typing import Tuple, Union

import numpy as np

from constraints.data_set import InitialDataSet, MassCurrent
from fields.field import Field
from geometry.curvature import christoffel_symbols, curvature_package
from geometry.derivatives import covariant_values
from geometry.tensors import inverse_metric, norm_squared, trace_values
from utils.errors import TensorError

logger = logging.getLogger(__name__)

VARIANTS = ('plain', 'modified')
Target = Union[InitialDataSet, Tuple[Field, Field]]


def momentum_convert(data: Field, g: Field, direction: str = 'k_to_pi') -> Field:
    """
    Convertir entre la segunda forma fundamental k y el tensor de momento π.

    Args:
        data: Tensor simétrico contravariante (k o π)
        g: Métrica
        direction: 'k_to_pi' (π = k − (tr_g k) g⁻¹) o 'pi_to_k' (k = π − (tr_g π) g⁻¹/(n−1))

    Returns:
        Tensor convertido
    """
    if data.rank != (0, 2):
        raise TensorError("incompatible-valence", f"se esperaba un (2,0)-tensor, rank={data.rank}")
    ginv = inverse_metric(g)
    trace = trace_values(data.values, data.rank, g.values, ginv)
    if direction == 'k_to_pi':
        values = data.values - trace * ginv
    elif direction == 'pi_to_k':
        values = data.values - trace * ginv / (g.n - 1)
    else:
        raise TensorError("incompatible-valence", f"dirección desconocida: {direction}")
    return Field(g.chart, (0, 2), values, symmetric=True)


def current_values(g: Field, pi: Field) -> np.ndarray:
    """J^i = ∇_j π^{ij}."""
    nabla = covariant_values(pi.values, pi.partials(), (0, 2), christoffel_symbols(g))
    return np.einsum('ijj...->i...', nabla)


def mass_values(g: Field, pi: Field) -> np.ndarray:
    """μ = ½(R_g + (tr_g π)²/(n−1) − |π|²_g)."""
    n = g.n
    ginv = inverse_metric(g)
    scalar = curvature_package(g).scalar.values
    trace = trace_values(pi.values, (0, 2), g.values, ginv)
    return 0.5 * (scalar + trace ** 2 / (n - 1) - norm_squared(pi.values, (0, 2), g.values, ginv))


def mass_current(ids: InitialDataSet) -> MassCurrent:
    """
    Densidades de masa y corriente de un conjunto de datos.

    Args:
        ids: Conjunto de datos iniciales

    Returns:
        MassCurrent con μ y J como campos de malla
    """
    def compute():
        mu = Field(ids.chart, (0, 0), mass_values(ids.g, ids.pi))
        J = Field(ids.chart, (0, 1), current_values(ids.g, ids.pi))
        return MassCurrent(mu, J)
    return ids.memo('mass_current', compute)


def _unpack(target: Target) -> Tuple[Field, Field]:
    if isinstance(target, InitialDataSet):
        return target.g, target.pi
    gamma, tau = target
    return gamma, tau


def modified_correction(ids: InitialDataSet, gamma: Field) -> np.ndarray:
    """½ (γ·J)^i = ½ g^{ij} γ_{jk} J^k con g y J de la base."""
    J = mass_current(ids).J.values
    return 0.5 * np.einsum('ij...,jk...,k...->i...', inverse_metric(ids.g), gamma.values, J, optimize=True)


def constraint_map(ids: InitialDataSet, target: Target = None, variant: str = 'plain') -> Tuple[Field, Field]:
    """
    Evaluar el operador de restricciones en (γ, τ).

    Args:
        ids: Datos base (g, π); en la variante 'plain' solo aportan la carta
        target: (γ, τ) o InitialDataSet; por defecto los propios datos base
        variant: 'plain' o 'modified'

    Returns:
        (primera ranura escalar 2μ, segunda ranura vectorial)
    """
    if variant not in VARIANTS:
        raise TensorError("incompatible-valence", f"variante desconocida: {variant}")
    gamma, tau = (ids.g, ids.pi) if target is None else _unpack(target)

    if gamma is ids.g and tau is ids.pi:
        densities = mass_current(ids)
        first, second = 2.0 * densities.mu.values, densities.J.values
    else:
        first, second = 2.0 * mass_values(gamma, tau), current_values(gamma, tau)

    if variant == 'modified':
        second = second + modified_correction(ids, gamma)

    return Field(ids.chart, (0, 0), first), Field(ids.chart, (0, 1), second)
