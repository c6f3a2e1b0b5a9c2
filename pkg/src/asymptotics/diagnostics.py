"""
Diagnósticos asintóticos: ecuaciones asintóticas de un KID, identidad de
Ricci de los potenciales auxiliares y combinación de rigidez div′Y.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from asymptotics.poisson import AuxPotentials, fit_window, q1_of
from constraints.data_set import InitialDataSet
from fields.calculus import flat_laplacian
from fields.field import Field
from fields.norms import weighted_sup
from geometry.curvature import curvature_package
from linearized.pairs import LapseShiftPair
from utils.errors import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeightedResidual:
    """Residuo nodal con su norma C⁰ ponderada."""

    residual: Field
    rate: float
    norm: float

    def to_dict(self) -> dict:
        return {'rate': self.rate, 'norm': self.norm}


def _exterior_mask(ids: InitialDataSet, window: Optional[Tuple[float, float]]) -> np.ndarray:
    radii = fit_window(ids.chart, window)
    return ids.chart.annulus_mask(2, r_min=radii[0], r_max=radii[-1])


def ricci_identity_defect(ids: InitialDataSet, aux: AuxPotentials,
                          window: Optional[Tuple[float, float]] = None) -> WeightedResidual:
    """
    Δ₀(V_{i,j} + V_{j,i} + g_{ij}) + 2R_{ij}, que debe ser O(|x|^{−2−2q}).

    Args:
        ids: Datos iniciales
        aux: Potenciales auxiliares de ``ids``
        window: Ventana radial donde se mide la norma

    Returns:
        WeightedResidual con tasa 2 + 2q
    """
    chart = ids.chart
    dV = aux.V.partials()
    combination = dV + np.swapaxes(dV, 0, 1) + ids.g.values
    laplacian = flat_laplacian(Field(chart, (2, 0), combination, symmetric=True))
    ricci = curvature_package(ids.g).ricci.values
    residual = Field(chart, (2, 0), laplacian + 2.0 * ricci, symmetric=True)

    rate = 2.0 + 2.0 * ids.type_params.q
    norm = weighted_sup(residual.values, chart, rate, 2, _exterior_mask(ids, window))
    logger.info(f"Identidad de Ricci: |x|^{rate:.2f}·defecto ≤ {norm:.3e}")
    return WeightedResidual(residual, rate, norm)


@dataclass(frozen=True)
class AsymptoticKidEquations:
    """Residuos de las ecuaciones asintóticas del lapso y del desplazamiento."""

    lapse: WeightedResidual
    shift: WeightedResidual

    def to_dict(self) -> dict:
        return {'lapse': self.lapse.to_dict(), 'shift': self.shift.to_dict()}


def asymptotic_kid_equations(ids: InitialDataSet, pair: LapseShiftPair, a: float, b,
                             window: Optional[Tuple[float, float]] = None) -> AsymptoticKidEquations:
    """
    Residuos −(Δ₀f)δ_ij + f_{,ij} − aR_ij + ½b_kπ_{ij,k} (tasa n + q₁) y
    X^i_{,j} + X^j_{,i} + g_{ij,k}b_k − (4/(n−1))a tr₀π δ_ij + 4aπ_ij (tasa 1 + 2q).

    Args:
        ids: Datos iniciales
        pair: Par (f, X)
        a: Asíntota del lapso
        b: Asíntota del desplazamiento
        window: Ventana radial donde se miden las normas

    Returns:
        AsymptoticKidEquations
    """
    chart = ids.chart
    n = ids.n
    b = np.asarray(b, dtype=float)
    eye = np.eye(n).reshape((n, n) + (1,) * n)
    mask = _exterior_mask(ids, window)

    hess_f = pair.f.second_partials()
    lap_f = np.trace(hess_f)
    ricci = curvature_package(ids.g).ricci.values
    d_pi = np.einsum('k,ijk...->ij...', b, ids.pi.partials())
    lapse = -lap_f * eye + hess_f - a * ricci + 0.5 * d_pi

    dX = pair.X.partials()
    tr_pi = np.einsum('ii...->...', ids.pi.values)
    d_g = np.einsum('k,ijk...->ij...', b, ids.g.partials())
    shift = dX + np.swapaxes(dX, 0, 1) + d_g - 4.0 / (n - 1) * a * tr_pi * eye + 4.0 * a * ids.pi.values

    lapse_rate = n + q1_of(ids)
    shift_rate = 1.0 + 2.0 * ids.type_params.q
    result = AsymptoticKidEquations(
        WeightedResidual(Field(chart, (2, 0), lapse, symmetric=True), lapse_rate,
                         weighted_sup(lapse, chart, lapse_rate, 2, mask)),
        WeightedResidual(Field(chart, (2, 0), shift, symmetric=True), shift_rate,
                         weighted_sup(shift, chart, shift_rate, 2, mask))
    )
    logger.info(f"Ecuaciones asintóticas del KID: {result.to_dict()}")
    return result


@dataclass(frozen=True)
class RigidityCheck:
    """Defecto relativo de div′Y frente a su forma cerrada en una losa."""

    defect: float
    absolute: float
    scale: float
    slab: Tuple[float, float]

    def to_dict(self) -> dict:
        return {'defect': self.defect, 'absolute': self.absolute, 'scale': self.scale, 'slab': list(self.slab)}


def rigidity_target(chart, E: float) -> np.ndarray:
    """
    Forma cerrada de x_Ax_BΔ′ω_AB − ρ²Δ′ω_AA/(n−1) cuando
    Δ′ω_AB = (2(n−1)/(n−2))E ∂_A∂_B|x|^{2−n}: 2n(n−2)Eρ⁴|x|^{−n−2}.
    """
    n = chart.n
    r = np.where(chart.radius > 0, chart.radius, 1.0)
    rho_sq = np.sum(chart.coords[:n - 1] ** 2, axis=0)
    return 2.0 * n * (n - 2) * E * rho_sq ** 2 * r ** (-n - 2)


def rigidity_divY_check(omega: Field, E: float, slab: Tuple[float, float]) -> RigidityCheck:
    """
    Construir Y_B = x_Ax_Cω_{AC,B} − ρ²ω_{AA,B}/(n−1) − 2x_Aω_{AB} + 2x_Bω_{AA}/(n−1)
    y comparar div′Y con su forma cerrada.

    Args:
        omega: (0,2)-tensor; solo se usa el bloque de los n−1 primeros ejes
        E: Energía
        slab: Ventana (z_lo, z_hi) en la última coordenada

    Returns:
        RigidityCheck con sup |div′Y − objetivo| relativo a la escala del campo
    """
    chart = omega.chart
    n = chart.n
    m = n - 1
    if omega.valence != 2:
        raise DomainError("invalid-dimension", f"ω debe ser un 2-tensor, rank={omega.rank}")
    z_lo, z_hi = slab
    z = chart.coords[n - 1]
    mask = chart.annulus_mask(2) & (z >= z_lo) & (z <= z_hi)
    if not np.any(mask):
        raise DomainError("radii-out-of-chart", f"la losa {slab} no contiene nodos seguros")

    x = chart.coords[:m]
    w = omega.values[:m, :m]
    dw = omega.partials()[:m, :m, :m]
    rho_sq = np.sum(x ** 2, axis=0)
    trace = np.einsum('aa...->...', w)
    d_trace = np.einsum('aab...->b...', dw)

    Y = (np.einsum('a...,c...,acb...->b...', x, x, dw, optimize=True)
         - rho_sq * d_trace / m
         - 2.0 * np.einsum('a...,ab...->b...', x, w)
         + 2.0 * x * trace / m)
    padded = np.concatenate([Y, np.zeros((1,) + chart.shape)])
    div_Y = np.einsum('bb...->...', Field(chart, (1, 0), padded).partials()[:m, :m])

    target = rigidity_target(chart, E)
    absolute = float(np.max(np.abs(div_Y - target)[mask]))
    second = np.abs(omega.second_partials()[:m, :m, :m, :m]).reshape((-1,) + chart.shape).max(axis=0)
    scale = max(float(np.max(np.abs(target)[mask])), float(np.max((rho_sq * second)[mask])))
    defect = absolute / scale if scale > 0 else 0.0
    logger.debug(f"Rigidez div′Y: defecto relativo {defect:.3e} (escala {scale:.3e})")
    return RigidityCheck(defect, absolute, scale, (float(z_lo), float(z_hi)))
