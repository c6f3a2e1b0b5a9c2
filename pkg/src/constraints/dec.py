"""
Condición de energía dominante (DEC): márgenes nodales, veredictos y el
álgebra de transporte de la corriente bajo el operador modificado.

Los veredictos fallidos no son excepciones: se devuelven como datos.

Autor: [Tu Nombre]
Fecha: [Fecha]
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from constraints.data_set import InitialDataSet
from constraints.operators import constraint_map, mass_current
from fields.field import Field
from geometry.tensors import inverse_metric, norm_squared
from utils.config import DEC_TOLERANCE_FACTOR, H_NORM_LIMIT, MACHINE_TOLERANCE
from utils.errors import MetricError, TensorError

logger = logging.getLogger(__name__)

# La curvatura usa dos derivadas compuestas de g
CURVATURE_DEPTH = 2


def default_tolerance(chart) -> float:
    """Tolerancia de veredicto DEC: DEC_TOLERANCE_FACTOR · h^fd_order."""
    return DEC_TOLERANCE_FACTOR * chart.spacing ** chart.fd_order


def current_norm(g: Field, J: np.ndarray) -> np.ndarray:
    """|J|_g nodal."""
    return np.sqrt(np.maximum(norm_squared(J, (0, 1), g.values, inverse_metric(g)), 0.0))


def dec_margin(ids: InitialDataSet) -> Field:
    """
    Margen DEC nodal μ − |J|_g.

    Args:
        ids: Conjunto de datos iniciales

    Returns:
        Campo escalar con el margen
    """
    densities = mass_current(ids)
    margin = densities.mu.values - current_norm(ids.g, densities.J.values)
    return Field(ids.chart, (0, 0), margin)


@dataclass(frozen=True)
class DecVerdict:
    """Reducción booleana de un margen nodal con el nodo peor."""

    passed: bool
    min_margin: float
    tolerance: float
    worst_node: Tuple[int, ...]
    worst_point: Tuple[float, ...]
    worst_radius: float

    def to_dict(self) -> dict:
        return {
            'passed': self.passed,
            'min_margin': self.min_margin,
            'tolerance': self.tolerance,
            'worst_node': list(self.worst_node),
            'worst_point': list(self.worst_point),
            'worst_radius': self.worst_radius
        }


def dec_verdict(margin: Field, tolerance: Optional[float] = None,
                mask: Optional[np.ndarray] = None) -> DecVerdict:
    """
    Veredicto DEC: min(margen) ≥ −tolerancia sobre los nodos fiables.

    Args:
        margin: Margen nodal (μ − |J| u otra desigualdad)
        tolerance: Tolerancia; por defecto 10·h^fd_order
        mask: Nodos considerados; por defecto el anillo fiable para curvatura

    Returns:
        DecVerdict
    """
    chart = margin.chart
    tolerance = default_tolerance(chart) if tolerance is None else float(tolerance)
    mask = chart.annulus_mask(CURVATURE_DEPTH) if mask is None else mask
    values = np.where(mask, margin.values, np.inf)
    worst = np.unravel_index(int(np.argmin(values)), values.shape)
    min_margin = float(values[worst])
    point = tuple(float(c) for c in chart.coords[(slice(None),) + worst])
    verdict = DecVerdict(bool(min_margin >= -tolerance), min_margin, tolerance,
                         tuple(int(i) for i in worst), point, float(chart.radius[worst]))
    if not verdict.passed:
        logger.warning(f"DEC violada: margen {min_margin:.3e} en x={point}")
    return verdict


class DecTransport(NamedTuple):
    """Resultado del álgebra de transporte de la corriente."""

    normsq: Field
    bound_ok: bool
    direct: Field
    max_gap: float


def _h_norm(g: Field, h: Field) -> np.ndarray:
    return np.sqrt(np.maximum(norm_squared(h.values, (2, 0), g.values, inverse_metric(g)), 0.0))


def dec_transport_check(g: Field, J: Field, h: Field) -> DecTransport:
    """
    |J̄|²_γ para γ = g + h y J̄ = J − ½ h·J, por la cadena algebraica y
    por la definición directa γ_{ij} J̄^i J̄^j.

    Args:
        g: Métrica base
        J: Corriente (vector)
        h: Perturbación simétrica (0,2) con |h|_g < 3

    Returns:
        DecTransport(normsq de la cadena, cota |J̄|²_γ ≤ |J|²_g, valor directo, máxima discrepancia)
    """
    if J.rank != (0, 1) or h.rank != (2, 0):
        raise TensorError("incompatible-valence", f"valencias J={J.rank}, h={h.rank}")
    h_norm = _h_norm(g, h)
    if np.any(h_norm >= H_NORM_LIMIT):
        worst = np.unravel_index(int(np.argmax(h_norm)), h_norm.shape)
        logger.error(f"|h|_g = {h_norm[worst]:.3f} ≥ {H_NORM_LIMIT} en el nodo {worst}")
        raise MetricError("h-too-large", f"|h|_g = {h_norm[worst]:.3f} ≥ {H_NORM_LIMIT}",
                          worst_node=tuple(int(i) for i in worst))

    ginv = inverse_metric(g)
    gv, hv, Jv = g.values, h.values, J.values
    hJ = np.einsum('ij...,jk...,k...->i...', ginv, hv, Jv, optimize=True)
    j_sq = np.einsum('ij...,i...,j...->...', gv, Jv, Jv, optimize=True)
    hj_sq = np.einsum('ij...,i...,j...->...', gv, hJ, hJ, optimize=True)
    h_hj = np.einsum('ij...,i...,j...->...', hv, hJ, hJ, optimize=True)
    chain = j_sq - 0.75 * hj_sq + 0.25 * h_hj

    J_bar = Jv - 0.5 * hJ
    direct = np.einsum('ij...,i...,j...->...', gv + hv, J_bar, J_bar, optimize=True)

    scale = np.maximum(1.0, j_sq)
    bound_ok = bool(np.all(chain <= j_sq + MACHINE_TOLERANCE * scale))
    gap = float(np.max(np.abs(chain - direct) / scale)) if chain.size else 0.0
    chart = g.chart
    return DecTransport(Field(chart, (0, 0), chain), bound_ok, Field(chart, (0, 0), direct), gap)


@dataclass(frozen=True)
class DecPreservation:
    """
    Forma discreta de la preservación DEC bajo el operador modificado.

    Se verifica nodalmente margen(γ,τ) − margen(g,π) ≥ −C·ε con
    ε = ½|δ₁| + |δ₂|_γ, donde (δ₁, δ₂) es el residuo del operador
    modificado, y C = 1 por la cadena algebraica de transporte.
    """

    passed: bool
    constant: float
    residual_sup: float
    min_slack: float
    h_norm_max: float


def dec_preservation_check(base: InitialDataSet, deformed: InitialDataSet,
                           mask: Optional[np.ndarray] = None,
                           tolerance: float = 1e-9) -> DecPreservation:
    """
    Comprobar la preservación DEC entre la base y unos datos deformados.

    Args:
        base: Datos (g, π)
        deformed: Datos (γ, τ) en la misma carta
        mask: Nodos considerados
        tolerance: Holgura de redondeo relativa

    Returns:
        DecPreservation
    """
    chart = base.chart
    mask = chart.annulus_mask(CURVATURE_DEPTH) if mask is None else mask
    h = deformed.g - base.g
    h_norm = _h_norm(base.g, h)
    if np.any(h_norm[mask] >= H_NORM_LIMIT):
        raise MetricError("h-too-large", f"|γ − g|_g máximo {float(h_norm[mask].max()):.3f}")

    first_def, second_def = constraint_map(base, deformed, 'modified')
    first_base, second_base = constraint_map(base, None, 'modified')
    delta1 = first_def.values - first_base.values
    delta2 = second_def.values - second_base.values
    eps = 0.5 * np.abs(delta1) + current_norm(deformed.g, delta2)

    slack = dec_margin(deformed).values - dec_margin(base).values + eps
    scale = 1.0 + np.abs(dec_margin(base).values)
    min_slack = float(np.min((slack / scale)[mask]))
    result = DecPreservation(bool(min_slack >= -tolerance), 1.0, float(eps[mask].max()),
                             min_slack, float(h_norm[mask].max()))
    logger.info(f"Preservación DEC: holgura mínima {min_slack:.3e}, ε = {result.residual_sup:.3e}")
    return result
