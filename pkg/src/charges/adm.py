"""
Energía-momento ADM por integrales de flujo y comprobaciones cruzadas
(energía vía Ricci y flujo β).

Autor: [Tu Nombre]
Fecha: [Fecha]
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from charges.extrapolation import FluxEstimate, estimate_flux
from constraints.data_set import InitialDataSet
from fields.chart import Chart
from fields.field import Field
from fields.quadrature import sphere_flux, unit_sphere_area
from geometry.curvature import curvature_package
from utils.config import DEFAULT_RADII_FRACTIONS, MIN_RADII
from utils.errors import DomainError, FitError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ADMCharges:
    """Energía E, momento P, sus errores de extrapolación y los radios usados."""

    E: float
    P: Tuple[float, ...]
    E_err: float
    P_err: float
    radii_used: Tuple[float, ...]
    energy_series: Tuple[float, ...] = field(default=())
    momentum_series: Tuple[Tuple[float, ...], ...] = field(default=())

    @property
    def momentum_norm(self) -> float:
        return float(np.linalg.norm(self.P))

    def to_dict(self) -> dict:
        return {
            'E': self.E,
            'P': list(self.P),
            'E_err': self.E_err,
            'P_err': self.P_err,
            'radii_used': list(self.radii_used),
            'energy_series': list(self.energy_series),
            'momentum_series': [list(p) for p in self.momentum_series]
        }


def default_radii(chart: Chart) -> List[float]:
    """Radios r_outer·{1/8, 3/16, 1/4, 3/8, 1/2} que caen dentro del anillo."""
    return [chart.r_outer * f for f in DEFAULT_RADII_FRACTIONS if chart.r_inner < chart.r_outer * f]


def resolve_radii(chart: Chart, radii: Optional[Sequence[float]]) -> List[float]:
    """Radios ordenados, al menos MIN_RADII, todos dentro de (r_inner, r_outer)."""
    radii = sorted(float(r) for r in (default_radii(chart) if radii is None else radii))
    if len(radii) < MIN_RADII:
        raise FitError("too-few-radii", f"se requieren al menos {MIN_RADII} radios, recibidos {len(radii)}")
    outside = [r for r in radii if not (chart.r_inner < r < chart.r_outer)]
    if outside:
        raise DomainError("radii-out-of-chart",
                          f"radios {outside} fuera de ({chart.r_inner}, {chart.r_outer})")
    return radii


def _check_backend(ids: InitialDataSet) -> None:
    if ids.n != 3 and not (ids.g.is_analytic and ids.pi.is_analytic):
        raise DomainError("unsupported-dimension",
                          f"las cargas con backend de malla solo existen para n=3 (n={ids.n})")


def pointwise_covector(chart: Chart, func: Callable[[np.ndarray], np.ndarray],
                       rank: Tuple[int, int] = (1, 0)) -> Field:
    """Campo analítico sin jets, evaluado bajo demanda en puntos."""
    return Field.from_function(chart, func, rank)


def energy_integrand(g: Field) -> Field:
    """Covector U_j = g_{ij,i} − g_{ii,j}."""
    def func(x):
        dg = np.stack([g.at(x, (a,)) for a in range(g.n)], axis=2)
        return np.einsum('iji...->j...', dg) - np.einsum('iij...->j...', dg)
    return pointwise_covector(g.chart, func)


def momentum_rows(pi: Field) -> List[Field]:
    """Filas π_{i·} como vectores (los índices se bajan con δ)."""
    return [pointwise_covector(pi.chart, lambda x, i=i: pi.at(x)[i], (0, 1)) for i in range(pi.n)]


def adm_charges(ids: InitialDataSet, radii: Optional[Sequence[float]] = None,
                model_rate: Optional[float] = None) -> ADMCharges:
    """
    Calcular la energía-momento ADM.

    E = (1/(2(n−1)ω_{n−1})) lim ∫ (g_{ij,i} − g_{ii,j}) ν^j,
    P_i = (1/((n−1)ω_{n−1})) lim ∫ π_{ij} ν^j.

    Args:
        ids: Datos iniciales
        radii: Radios de evaluación (≥ 3); por defecto r_outer·{1/8, 3/16, 1/4, 3/8, 1/2}
        model_rate: Exponente del modelo de extrapolación; por defecto n − 2

    Returns:
        ADMCharges
    """
    chart = ids.chart
    n = ids.n
    radii = resolve_radii(chart, radii)
    _check_backend(ids)
    rate = float(n - 2) if model_rate is None else model_rate
    omega = unit_sphere_area(n)

    U = energy_integrand(ids.g)
    rows = momentum_rows(ids.pi)
    energy_series = [sphere_flux(U, r) / (2.0 * (n - 1) * omega) for r in radii]
    momentum_series = [[sphere_flux(row, r) / ((n - 1) * omega) for row in rows] for r in radii]

    energy = estimate_flux(radii, energy_series, rate)
    components = [estimate_flux(radii, [p[i] for p in momentum_series], rate) for i in range(n)]
    charges = ADMCharges(
        E=energy.limit,
        P=tuple(c.limit for c in components),
        E_err=energy.error,
        P_err=float(max(c.error for c in components)),
        radii_used=tuple(radii),
        energy_series=tuple(energy_series),
        momentum_series=tuple(tuple(p) for p in momentum_series)
    )
    logger.info(f"Cargas ADM: E = {charges.E:.6e} ± {charges.E_err:.1e}, "
                f"|P| = {charges.momentum_norm:.6e} ± {charges.P_err:.1e}")
    return charges


def ricci_energy_flux(ids: InitialDataSet, radii: Optional[Sequence[float]] = None,
                      model_rate: Optional[float] = None) -> FluxEstimate:
    """
    Energía vía curvatura: E = −(1/((n−1)(n−2)ω_{n−1})) lim ∫ R_{ij} x^i ν^j.

    Args:
        ids: Datos iniciales
        radii: Radios de evaluación
        model_rate: Exponente del modelo; por defecto n − 2

    Returns:
        FluxEstimate con el límite extrapolado
    """
    chart = ids.chart
    n = ids.n
    radii = resolve_radii(chart, radii)
    if n != 3:
        raise DomainError("unsupported-dimension", "la curvatura es de malla: solo n=3")
    ricci = curvature_package(ids.g).ricci

    def func(x):
        return -np.einsum('ij...,i...->j...', ricci.at(x), x)

    integrand = pointwise_covector(chart, func)
    scale = (n - 1) * (n - 2) * unit_sphere_area(n)
    series = [sphere_flux(integrand, r) / scale for r in radii]
    rate = float(n - 2) if model_rate is None else model_rate
    estimate = estimate_flux(radii, series, rate)
    logger.info(f"Energía vía Ricci: {estimate.limit:.6e} ± {estimate.error:.1e}")
    return estimate


def beta_flux(ids: InitialDataSet, radii: Optional[Sequence[float]] = None,
              model_rate: Optional[float] = None) -> FluxEstimate:
    """
    β = (1/((n−2)ω_{n−1})) lim ∫ (g_{ij,j} − g_{jj,i}) ν^i, igual a 2(n−1)E/(n−2).

    Args:
        ids: Datos iniciales
        radii: Radios de evaluación
        model_rate: Exponente del modelo; por defecto n − 2

    Returns:
        FluxEstimate
    """
    chart = ids.chart
    n = ids.n
    radii = resolve_radii(chart, radii)
    _check_backend(ids)
    g = ids.g

    def func(x):
        dg = np.stack([g.at(x, (a,)) for a in range(n)], axis=2)
        return np.einsum('ijj...->i...', dg) - np.einsum('jji...->i...', dg)

    integrand = pointwise_covector(chart, func)
    series = [sphere_flux(integrand, r) / ((n - 2) * unit_sphere_area(n)) for r in radii]
    rate = float(n - 2) if model_rate is None else model_rate
    return estimate_flux(radii, series, rate)
