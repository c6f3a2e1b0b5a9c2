"""
Símbolos de Christoffel y curvatura de una métrica.

Las derivadas de los Christoffel se obtienen por la regla del producto a
partir de ∂g y ∂∂g: exactas con backend analítico, de orden fd_order
con backend de malla.

Convención de Riemann: el campo almacenado R^ℓ_{ijk} satisface
R_{jk} = R^ℓ_{ℓjk} y la fórmula de Ricci
X_{a;bc} − X_{a;cb} = R^ℓ_{bca} X_ℓ.

Autor: [Tu Nombre]
Fecha: [Fecha]
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from fields.field import Field
from geometry.tensors import inverse_metric, inverse_partials

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CurvaturePackage:
    """Christoffel, Ricci, curvatura escalar y (opcionalmente) Riemann."""

    christoffel: Field
    ricci: Field
    scalar: Field
    riemann: Optional[Field] = None

    def describe(self) -> dict:
        mask = self.scalar.chart.annulus_mask(2)
        return {
            'max_abs_scalar': self.scalar.max_abs(mask),
            'max_abs_ricci': self.ricci.max_abs(mask),
            'has_riemann': self.riemann is not None
        }


def _first_kind_partials(g: Field) -> np.ndarray:
    """∂_a Γ_{l,ij} con Γ_{l,ij} = ½(∂_i g_{lj} + ∂_j g_{li} − ∂_l g_{ij}); forma [l,i,j,a]."""
    ddg = g.second_partials()
    return 0.5 * (np.einsum('ljia...->lija...', ddg) + np.einsum('lija...->lija...', ddg)
                  - np.einsum('ijla...->lija...', ddg))


def christoffel_symbols(g: Field) -> np.ndarray:
    """Γ^k_{ij} nodal, forma [k,i,j] + malla (memorizado en el campo)."""
    def compute():
        dg = g.partials()
        first = 0.5 * (np.einsum('lji...->lij...', dg) + np.einsum('lij...->lij...', dg)
                       - np.einsum('ijl...->lij...', dg))
        gamma = np.einsum('kl...,lij...->kij...', inverse_metric(g), first, optimize=True)
        gamma.setflags(write=False)
        return gamma
    return g.memo('christoffel', compute)


def christoffel_partials(g: Field) -> np.ndarray:
    """∂_a Γ^k_{ij}, forma [k,i,j,a] + malla (memorizado en el campo)."""
    def compute():
        dg = g.partials()
        first = 0.5 * (np.einsum('lji...->lij...', dg) + np.einsum('lij...->lij...', dg)
                       - np.einsum('ijl...->lij...', dg))
        d_gamma = (np.einsum('kla...,lij...->kija...', inverse_partials(g), first, optimize=True)
                   + np.einsum('kl...,lija...->kija...', inverse_metric(g), _first_kind_partials(g),
                               optimize=True))
        d_gamma.setflags(write=False)
        return d_gamma
    return g.memo('christoffel_partials', compute)


def _ricci_values(gamma: np.ndarray, d_gamma: np.ndarray) -> np.ndarray:
    """R_{ρν} = ∂_μΓ^μ_{νρ} − ∂_νΓ^μ_{μρ} + Γ^μ_{μσ}Γ^σ_{νρ} − Γ^μ_{νσ}Γ^σ_{μρ}."""
    ricci = (np.einsum('mnrm...->rn...', d_gamma)
             - np.einsum('mmrn...->rn...', d_gamma)
             + np.einsum('mms...,snr...->rn...', gamma, gamma, optimize=True)
             - np.einsum('mns...,smr...->rn...', gamma, gamma, optimize=True))
    return 0.5 * (ricci + np.swapaxes(ricci, 0, 1))


def _riemann_values(gamma: np.ndarray, d_gamma: np.ndarray) -> np.ndarray:
    """Riemann R^ℓ_{ijk} en la convención documentada en el módulo."""
    # R^ℓ_{ρμν} = ∂_μΓ^ℓ_{νρ} − ∂_νΓ^ℓ_{μρ} + Γ^ℓ_{μσ}Γ^σ_{νρ} − Γ^ℓ_{νσ}Γ^σ_{μρ}
    mtw = (np.einsum('lvrm...->lrmv...', d_gamma)
           - np.einsum('lmrv...->lrmv...', d_gamma)
           + np.einsum('lms...,svr...->lrmv...', gamma, gamma, optimize=True)
           - np.einsum('lvs...,smr...->lrmv...', gamma, gamma, optimize=True))
    # almacenado[ℓ, a, b, c] = R^ℓ_{c a b}
    return np.einsum('lcab...->labc...', mtw)


def curvature_package(g: Field, want_riemann: bool = False) -> CurvaturePackage:
    """
    Calcular Γ, Ric, R_g y, si se pide, Riemann.

    Args:
        g: Métrica definida positiva (valencia (2,0))
        want_riemann: Calcular también el tensor de Riemann

    Returns:
        CurvaturePackage
    """
    def compute_core():
        gamma = christoffel_symbols(g)
        d_gamma = christoffel_partials(g)
        ricci = _ricci_values(gamma, d_gamma)
        scalar = np.einsum('ij...,ij...->...', inverse_metric(g), ricci)
        logger.debug(f"Curvatura calculada en una malla {g.chart.shape}")
        return (Field(g.chart, (2, 1), gamma), Field(g.chart, (2, 0), ricci, symmetric=True),
                Field(g.chart, (0, 0), scalar))

    christoffel, ricci, scalar = g.memo('curvature', compute_core)
    riemann = None
    if want_riemann:
        riemann = g.memo('riemann', lambda: Field(
            g.chart, (3, 1), _riemann_values(christoffel_symbols(g), christoffel_partials(g))))
    return CurvaturePackage(christoffel, ricci, scalar, riemann)


def first_bianchi_defect(riemann: Field) -> np.ndarray:
    """|R^ℓ_{ijk} + R^ℓ_{jki} + R^ℓ_{kij}| nodal."""
    values = riemann.values
    cyclic = (values + np.einsum('ljki...->lijk...', values) + np.einsum('lkij...->lijk...', values))
    return np.sqrt(np.sum(cyclic ** 2, axis=(0, 1, 2, 3)))


def bianchi_defect(g: Field) -> Field:
    """
    Segunda identidad de Bianchi contraída: div_g Ric − ½ dR_g.

    Args:
        g: Métrica

    Returns:
        Covector (1,0) con el defecto nodal
    """
    from geometry.derivatives import covariant_derivative

    package = curvature_package(g)
    nabla_ricci = covariant_derivative(package.ricci, g).values
    div_ricci = np.einsum('ijk...,jk...->i...', nabla_ricci, inverse_metric(g), optimize=True)
    defect = div_ricci - 0.5 * package.scalar.partials()
    return Field(g.chart, (1, 0), defect)
