"""
Verificación del adjunto por integración por partes, residuos del
sistema de Killing (KID) en forma Hessiana y elíptica, y comprobación
de KID asintóticamente vacío.

Autor: [Tu Nombre]
Fecha: [Fecha]
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from constraints.data_set import InitialDataSet
from fields.field import Field
from fields.norms import volume_integral, weighted_sup
from geometry.derivatives import covariant_values, grid_covariant, hessian_values, lie_momentum_values
from geometry.tensors import lower_all
from linearized.operators import LinearizationContext, check_variant, linearization_context
from linearized.pairs import LapseShiftPair, SymPair, support_band
from utils.errors import DomainError

logger = logging.getLogger(__name__)

KID_DEPTH = 2
GROWTH_FACTOR = 2.0


def _check_support(direction: SymPair) -> None:
    chart = direction.chart
    support = direction.support()
    if not np.any(support):
        return
    radii = chart.radius[support]
    inner, outer = support_band(chart)
    if radii.min() < inner or radii.max() > outer:
        logger.error(f"Soporte de la dirección en r ∈ [{radii.min():.3f}, {radii.max():.3f}], "
                     f"se requiere [{inner:.3f}, {outer:.3f}]")
        raise DomainError("support-touches-boundary",
                          f"el soporte debe quedar en [{inner:.3f}, {outer:.3f}]")


def pairing_defect(base: InitialDataSet, pair: LapseShiftPair, direction: SymPair,
                   variant: str = 'modified', context: Optional[LinearizationContext] = None) -> float:
    """
    ∫⟨DΦ̄(h,w), (f,X)⟩ dμ_g − ∫⟨(h,w), DΦ̄*(f,X)⟩ dμ_g sobre la carta.

    Args:
        base: Punto base
        pair: Par (f, X)
        direction: Dirección (h, w) de soporte compacto dentro del anillo
        variant: 'plain' o 'modified'
        context: Contexto precalculado opcional

    Returns:
        Defecto de la identidad de dualidad
    """
    check_variant(variant)
    _check_support(direction)
    if not np.any(direction.support()):
        return 0.0

    context = linearization_context(base) if context is None else context
    forward = context.constraint_pairing(context.linearize(direction, variant), pair)
    backward = context.direction_pairing(direction, context.adjoint(pair, variant))
    defect = volume_integral(forward - backward, base.chart, density=context.volume)
    logger.debug(f"Defecto de dualidad ({variant}): {defect:.3e}")
    return defect


class KidResiduals(NamedTuple):
    """Residuos de las dos ecuaciones Hessianas y del sistema elíptico."""

    hessian_f: Field
    hessian_X: Field
    trace: Tuple[Field, Field]

    def sup_norms(self, mask: Optional[np.ndarray] = None) -> dict:
        mask = self.hessian_f.chart.annulus_mask(KID_DEPTH) if mask is None else mask
        return {
            'hessian_f': self.hessian_f.max_abs(mask),
            'hessian_X': self.hessian_X.max_abs(mask),
            'trace_f': self.trace[0].max_abs(mask),
            'trace_X': self.trace[1].max_abs(mask)
        }


def kid_residuals(base: InitialDataSet, pair: LapseShiftPair, rhs: Optional[SymPair] = None,
                  context: Optional[LinearizationContext] = None) -> KidResiduals:
    """
    Residuos del sistema DΦ̄*(f, X) = (h, w) reescrito en forma Hessiana
    (para f y para X) y en forma elíptica (trazas).

    Args:
        base: Punto base
        pair: Par (f, X)
        rhs: Valor pretendido (h, w) del adjunto modificado; 0 por defecto
        context: Contexto precalculado opcional

    Returns:
        KidResiduals
    """
    ctx = linearization_context(base) if context is None else context
    chart, n, metric = base.chart, base.n, base.g
    rhs = SymPair.zeros(chart) if rhs is None else rhs
    g, ginv = ctx.g, ctx.ginv
    f, X = pair.f, pair.X
    fv = f.values
    h = rhs.h.values
    w_low = lower_all(rhs.w.values, (0, 2), g)
    tr_h = np.einsum('ij...,ij...->...', ginv, h, optimize=True)

    # Derivadas de X: X_{i;j} y X_{i;jk}
    nabla_X = covariant_values(X.values, X.partials(), (0, 1), ctx.gamma)
    div_X = np.einsum('kk...->...', nabla_X)
    dX_low = lower_all(nabla_X, (1, 1), g)
    ddX_low = grid_covariant(dX_low, (2, 0), metric)
    X_low = lower_all(X.values, (0, 1), g)

    pi_dX = np.einsum('km...,km...->...', ctx.pi, dX_low, optimize=True)
    X_J = np.einsum('i...,i...->...', X_low, ctx.J, optimize=True)
    lie_pi = lie_momentum_values(base.pi, X)
    lie_pi_low = lower_all(lie_pi, (0, 2), g)
    tr_lie = np.einsum('ij...,ij...->...', g, lie_pi, optimize=True)

    potential = (ctx.scalar - 2.0 / (n - 1) * ctx.tr_pi ** 2 + 2.0 * ctx.pi_sq) / (n - 1)
    traced_shift = (tr_lie + div_X * ctx.tr_pi - n * pi_dX - (n + 1) * X_J) / (2.0 * (n - 1))

    # Ecuación Hessiana para f
    hess = hessian_values(f, metric)
    pi_square = np.einsum('ik...,kj...->ij...', ctx.pi_low, ctx.pi_mixed, optimize=True)
    zeroth = -ctx.ricci + 2.0 / (n - 1) * ctx.tr_pi * ctx.pi_low - 2.0 * pi_square + potential * g
    shift = 0.5 * (lie_pi_low + div_X * ctx.pi_low - pi_dX * g - X_J * g)
    hessian_f = (hess + zeroth * fv + shift - 0.5 * ctx.symmetrized(X_low) - traced_shift * g
                 - (h - tr_h * g / (n - 1)))

    # Ecuación Hessiana para X
    R = ctx.riemann
    commutators = (np.einsum('lkji...,l...->ijk...', R, X_low, optimize=True)
                   + np.einsum('likj...,l...->ijk...', R, X_low, optimize=True)
                   + np.einsum('lijk...,l...->ijk...', R, X_low, optimize=True))
    dSf = grid_covariant(ctx.momentum_part() * fv, (2, 0), metric)
    dw = grid_covariant(w_low, (2, 0), metric)
    source = dSf + np.einsum('kij...->ijk...', dSf) - np.einsum('jki...->ijk...', dSf)
    lhs = -dw - np.einsum('kij...->ijk...', dw) + np.einsum('jki...->ijk...', dw)
    hessian_X = ddX_low + 0.5 * commutators - source - lhs

    # Sistema elíptico
    laplacian_f = np.einsum('ij...,ij...->...', ginv, hess, optimize=True)
    trace_f = laplacian_f + potential * fv - traced_shift + tr_h / (n - 1)

    laplacian_X = np.einsum('jk...,ijk...->i...', ginv, ddX_low, optimize=True)
    ricci_X = np.einsum('ij...,j...->i...', ctx.ricci, X.values, optimize=True)
    d_f_tr = Field(chart, (0, 0), fv * ctx.tr_pi).partials()
    div_f_pi = lower_all(np.einsum('abb...->a...', grid_covariant(fv * ctx.pi, (0, 2), metric)), (0, 1), g)
    w_up = rhs.w.values
    div_w = lower_all(np.einsum('abb...->a...', covariant_values(w_up, rhs.w.partials(), (0, 2), ctx.gamma)),
                      (0, 1), g)
    d_tr_w = Field(chart, (0, 0), np.einsum('ab...,ab...->...', g, w_up, optimize=True)).partials()
    trace_X = (laplacian_X + ricci_X - 2.0 / (n - 1) * d_f_tr + 4.0 * div_f_pi
               - (-2.0 * div_w + d_tr_w))

    residuals = KidResiduals(Field(chart, (2, 0), hessian_f), Field(chart, (3, 0), hessian_X),
                             (Field(chart, (0, 0), trace_f), Field(chart, (1, 0), trace_X)))
    logger.debug(f"Residuos KID: {residuals.sup_norms()}")
    return residuals


@dataclass(frozen=True)
class AsymptoticKidCheck:
    """Normas ponderadas de DΦ*(f, X) en la región exterior."""

    first_norm: float
    second_norm: float
    first_rate: float
    second_rate: float
    first_growth: float
    second_growth: float
    passed: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _shell_growth(values: np.ndarray, chart, rate: float, comp_axes: int, inner_mask: np.ndarray,
                  outer_mask: np.ndarray) -> float:
    inner = weighted_sup(values, chart, rate, comp_axes, inner_mask)
    outer = weighted_sup(values, chart, rate, comp_axes, outer_mask)
    if outer <= 1e-12 * max(1.0, inner):
        return 0.0
    return outer / inner if inner > 0 else np.inf


def asymptotic_kid_check(base: InitialDataSet, pair: LapseShiftPair, variant: str = 'plain',
                         context: Optional[LinearizationContext] = None) -> AsymptoticKidCheck:
    """
    Comprobar que DΦ*(f, X) ∈ C⁰_{−n−q₀} × C⁰_{−1−2q} en la región exterior.

    En una carta finita las normas siempre son finitas; el veredicto exige
    que la norma ponderada sobre la corteza exterior no crezca más de
    GROWTH_FACTOR veces respecto de la corteza intermedia.

    Args:
        base: Punto base con tipo (p, q, q₀, α)
        pair: Par (f, X) definido en la región exterior
        variant: 'plain' o 'modified'
        context: Contexto precalculado opcional

    Returns:
        AsymptoticKidCheck
    """
    context = linearization_context(base) if context is None else context
    chart = base.chart
    weight = base.type_params
    q0 = weight.q0 if weight.q0 is not None else weight.q
    first_rate, second_rate = base.n + q0, 1.0 + 2.0 * weight.q

    first, second = context.adjoint(pair, variant)
    mask = chart.annulus_mask(KID_DEPTH)
    r_lo, r_hi = chart.safe_radii(KID_DEPTH)
    split = r_lo + 0.5 * (r_hi - r_lo)
    inner_mask = mask & (chart.radius < split)
    outer_mask = mask & (chart.radius >= split)

    first_growth = _shell_growth(first, chart, first_rate, 2, inner_mask, outer_mask)
    second_growth = _shell_growth(second, chart, second_rate, 2, inner_mask, outer_mask)
    result = AsymptoticKidCheck(
        weighted_sup(first, chart, first_rate, 2, mask), weighted_sup(second, chart, second_rate, 2, mask),
        first_rate, second_rate, first_growth, second_growth,
        bool(first_growth <= GROWTH_FACTOR and second_growth <= GROWTH_FACTOR))
    if not result.passed:
        logger.warning(f"DΦ*(f, X) no decae a las tasas ({first_rate}, {second_rate}): "
                       f"crecimiento ({first_growth:.2f}, {second_growth:.2f})")
    return result
