"""
Estimadores discretos de normas ponderadas e integrales de volumen.

Las normas de Hölder y Sobolev ponderadas se estiman sobre los nodos del
anillo; son cotas inferiores de la norma continua que convergen al
refinar la malla.
"""

import logging
from typing import Optional

import numpy as np

from fields.chart import DecayWeight
from fields.field import Field, pointwise_norm
from utils.errors import DomainError

logger = logging.getLogger(__name__)

MAX_GRID_DERIVATIVES = 2


def _derivative_stack(field: Field, k: int):
    """Lista [(j, |∇^j f| nodal, ∇^j f)] para j = 0..k."""
    if k > MAX_GRID_DERIVATIVES:
        raise DomainError("insufficient-derivatives",
                          f"k={k} supera las {MAX_GRID_DERIVATIVES} derivadas disponibles")
    arrays = [field.values, field.partials(), field.second_partials()][:k + 1]
    return [(j, pointwise_norm(a, field.valence + j), a) for j, a in enumerate(arrays)]


def _holder_seminorm(chart, data: np.ndarray, comp_axes: int, rate: float,
                     alpha: float, mask: np.ndarray) -> float:
    """
    sup |x|^{rate+α} |D(x) − D(y)| / |x−y|^α sobre pares de nodos alineados
    con los ejes y separados 0 < |x − y| ≤ |x|/2.
    """
    h = chart.spacing
    size = chart.nodes_per_axis
    radius = chart.radius
    best = 0.0
    max_shift = int(chart.r_outer / (2.0 * h))
    comp = (slice(None),) * comp_axes

    for axis in range(chart.n):
        for s in range(1, min(max_shift, size - 1) + 1):
            lo = [slice(None)] * chart.n
            hi = [slice(None)] * chart.n
            lo[axis] = slice(0, size - s)
            hi[axis] = slice(s, size)
            lo, hi = tuple(lo), tuple(hi)
            for a, b in ((lo, hi), (hi, lo)):
                r = radius[a]
                valid = mask[a] & mask[b] & (s * h <= 0.5 * r)
                if not np.any(valid):
                    continue
                diff = pointwise_norm(data[comp + a] - data[comp + b], comp_axes)
                ratio = r ** (rate + alpha) * diff / (s * h) ** alpha
                best = max(best, float(ratio[valid].max()))
    return best


def weighted_norm(field: Field, weight: DecayWeight, mode: str = 'holder') -> float:
    """
    Norma ponderada C^{k,α}_{−q} (modo 'holder') o W^{k,p}_{−q} (modo 'sobolev').

    Args:
        field: Campo a medir
        weight: Peso (q, k, α, p)
        mode: 'holder' o 'sobolev'

    Returns:
        Estimación discreta (cota inferior) de la norma
    """
    chart = field.chart
    stack = _derivative_stack(field, weight.k)

    if mode == 'holder':
        total = 0.0
        for j, norm, _ in stack:
            mask = chart.annulus_mask(j)
            if np.any(mask):
                total += float(np.max(chart.radius[mask] ** (j + weight.q) * norm[mask]))
        if weight.alpha is not None:
            k, _, data = stack[-1]
            total += _holder_seminorm(chart, data, field.valence + k, k + weight.q,
                                      weight.alpha, chart.annulus_mask(k))
        return total

    if mode == 'sobolev':
        if weight.p is None:
            raise DomainError("invalid-decay-type", "el modo sobolev necesita el exponente p")
        p = float(weight.p)
        total = 0.0
        for j, norm, _ in stack:
            mask = chart.annulus_mask(j)
            r = chart.radius[mask]
            total += float(np.sum((r ** (j + weight.q) * norm[mask]) ** p * r ** (-chart.n)))
        return (total * chart.node_volume) ** (1.0 / p)

    raise DomainError("invalid-mode", f"modo de norma desconocido: {mode}")


def weighted_sup(values: np.ndarray, chart, rate: float, comp_axes: int = 0,
                 mask: Optional[np.ndarray] = None) -> float:
    """sup_nodos |x|^rate · |values| (norma C⁰ ponderada)."""
    mask = chart.annulus_mask(0) if mask is None else mask
    norm = pointwise_norm(values, comp_axes)
    if not np.any(mask):
        return 0.0
    return float(np.max(chart.radius[mask] ** rate * norm[mask]))


def volume_integral(values: np.ndarray, chart, mask: Optional[np.ndarray] = None,
                    density: Optional[np.ndarray] = None) -> float:
    """
    Integral de volumen por suma nodal Σ f·ρ·hⁿ.

    Args:
        values: Integrando escalar en la malla
        chart: Carta
        mask: Nodos incluidos (por defecto el anillo r_inner ≤ |x| ≤ r_outer)
        density: Densidad de volumen (p. ej. √det g); 1 por defecto

    Returns:
        Valor de la integral
    """
    mask = chart.annulus_mask(0) if mask is None else mask
    integrand = values if density is None else values * density
    return float(np.sum(integrand[mask]) * chart.node_volume)

