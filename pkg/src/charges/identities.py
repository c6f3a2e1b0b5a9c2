"""
Identidades de flujo sobre esferas coordenadas.

Para un 2-tensor T, (T_{ij} − T_{ji})ν_i es tangente a la esfera, así que
∫(T_{ij,j} − T_{ji,j})ν_i = 0. Para un escalar f se comprueban
∫(Δ₀f)ν_j = ∫f_{,ij}ν_i y ∫(x·ν)Δ₀f = ∫(f_{,ij}x_j + (n−1)f_{,i})ν_i.
"""

import logging
from dataclasses import dataclass
from typing import Dict

import numpy as np

from fields.field import Field
from fields.quadrature import integrate_on_sphere, sphere_flux_estimate
from utils.config import QUAD_ORDER
from utils.errors import DomainError, TensorError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FluxIdentityReport:
    """Defectos de las identidades de flujo en un radio."""

    mode: str
    radius: float
    defects: Dict[str, float]

    @property
    def max_defect(self) -> float:
        return max((abs(v) for v in self.defects.values()), default=0.0)

    def to_dict(self) -> dict:
        return {'mode': self.mode, 'radius': self.radius, 'defects': dict(self.defects),
                'max_defect': self.max_defect}


def _first_partials(field: Field, x: np.ndarray) -> np.ndarray:
    return np.stack([field.at(x, (a,)) for a in range(field.n)], axis=field.valence)


def _second_partials(field: Field, x: np.ndarray) -> np.ndarray:
    n = field.n
    rows = [np.stack([field.at(x, (a, b)) for b in range(n)]) for a in range(n)]
    return np.stack(rows)


def _tensor_defects(T: Field, radius: float, quad_order: int) -> Dict[str, float]:
    def func(x):
        dT = _first_partials(T, x)
        return np.einsum('ijj...->i...', dT) - np.einsum('jij...->i...', dT)

    integrand = Field.from_function(T.chart, func, (1, 0))
    value, _ = sphere_flux_estimate(integrand, radius, quad_order)
    return {'antisymmetric_divergence': value}


def _scalar_defects(f: Field, radius: float, quad_order: int) -> Dict[str, float]:
    n = f.n
    defects = {}
    for j in range(n):
        def laplacian_side(x, j=j):
            d2 = _second_partials(f, x)
            return np.trace(d2) * x[j] / radius

        def hessian_side(x, j=j):
            d2 = _second_partials(f, x)
            return np.einsum('i...,i...->...', d2[:, j], x) / radius

        lhs, _ = integrate_on_sphere(laplacian_side, n, radius, quad_order)
        rhs, _ = integrate_on_sphere(hessian_side, n, radius, quad_order)
        defects[f'laplacian_normal_{j}'] = lhs - rhs

    def radial_laplacian(x):
        return radius * np.trace(_second_partials(f, x))

    def radial_hessian(x):
        d2 = _second_partials(f, x)
        d1 = _first_partials(f, x)
        nu = x / radius
        return (np.einsum('ij...,j...,i...->...', d2, x, nu) + (n - 1) * np.einsum('i...,i...->...', d1, nu))

    lhs, _ = integrate_on_sphere(radial_laplacian, n, radius, quad_order)
    rhs, _ = integrate_on_sphere(radial_hessian, n, radius, quad_order)
    defects['radial_laplacian'] = lhs - rhs
    return defects


def flux_identity_suite(field: Field, radius: float, quad_order: int = QUAD_ORDER) -> FluxIdentityReport:
    """
    Evaluar las identidades de flujo de un 2-tensor o de un escalar.

    Args:
        field: 2-tensor (modo 'tensor') o escalar (modo 'scalar')
        radius: Radio de la esfera
        quad_order: Orden de la regla de cuadratura

    Returns:
        FluxIdentityReport con los defectos (deberían anularse)
    """
    chart = field.chart
    if not (chart.r_inner < radius < chart.r_outer):
        raise DomainError("radius-out-of-chart", f"radio {radius} fuera de ({chart.r_inner}, {chart.r_outer})")

    if field.valence == 2:
        report = FluxIdentityReport('tensor', float(radius), _tensor_defects(field, radius, quad_order))
    elif field.valence == 0:
        report = FluxIdentityReport('scalar', float(radius), _scalar_defects(field, radius, quad_order))
    else:
        raise TensorError("incompatible-valence", f"se esperaba un 2-tensor o un escalar, rank={field.rank}")
    logger.debug(f"Identidades de flujo ({report.mode}, r={radius}): defecto máximo {report.max_defect:.3e}")
    return report
