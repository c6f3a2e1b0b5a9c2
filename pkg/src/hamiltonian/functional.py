"""
Hamiltoniano de Regge–Teitelboim modificado.

H(γ, τ) = (n−1)ω_{n−1}[2aE(γ,τ) + b·P(γ,τ)] − ∫ Φ̄_{(g,π)}(γ,τ)·(f₀,X₀) dμ_g
se evalúa en su forma volumétrica, con las integrales de superficie ADM
reescritas por el teorema de la divergencia, sobre ventanas radiales
suaves extrapoladas a r → ∞.

Autor: [Tu Nombre]
Fecha: [Fecha]
"""

import logging
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from charges.adm import ADMCharges, adm_charges
from charges.extrapolation import estimate_flux
from constraints.data_set import InitialDataSet
from constraints.operators import constraint_map
from fields.chart import Chart
from fields.field import Field
from fields.norms import volume_integral
from fields.profiles import radial_ramp, smooth_step, tensor_profile
from fields.quadrature import integrate_on_sphere, unit_sphere_area
from geometry.derivatives import covariant_values
from linearized.operators import linearization_context
from linearized.pairs import LapseShiftPair, SymPair, seeded_directions
from utils.config import (BUMP_SEED, DIRECTIONAL_STEP, HAMILTONIAN_WINDOW_FRACTIONS, HAMILTONIAN_WINDOW_HALF_WIDTH,
                          STATIONARITY_DIRECTIONS)
from utils.errors import DomainError, TensorError

logger = logging.getLogger(__name__)

Target = Union[InitialDataSet, Tuple[Field, Field]]


def reference_pair(a: float, b: Sequence[float], chart: Chart, transition_radius: float) -> LapseShiftPair:
    """
    Par de referencia (f₀, X₀): nulo en r_inner y exactamente (a, b) para |x| ≥ transition_radius.

    Args:
        a: Valor asintótico del lapso
        b: Valor asintótico del desplazamiento
        chart: Carta
        transition_radius: Radio a partir del cual el par es constante

    Returns:
        LapseShiftPair con asíntota (a, b)
    """
    if not (chart.r_inner < transition_radius < chart.r_outer):
        raise DomainError("invalid-transition-radius",
                          f"se requiere {chart.r_inner} < {transition_radius} < {chart.r_outer}")
    b = np.asarray(b, dtype=float)
    if b.shape != (chart.n,):
        raise TensorError("incompatible-valence", f"b debe tener {chart.n} componentes")
    ramp = radial_ramp(chart.r_inner, transition_radius, n=chart.n)
    f0 = Field.from_source(chart, tensor_profile(ramp, np.asarray(float(a))))
    X0 = Field.from_source(chart, tensor_profile(ramp, b), (0, 1))
    return LapseShiftPair(f0, X0, (float(a), tuple(b)))


def reference_pair_from_charges(charges: ADMCharges, chart: Chart, transition_radius: float) -> LapseShiftPair:
    """Par de referencia asintótico a (E, −2P)."""
    return reference_pair(charges.E, -2.0 * np.asarray(charges.P), chart, transition_radius)


@dataclass(frozen=True)
class HamiltonianSpec:
    """Datos base, par de referencia (f₀, X₀) y radio de transición."""

    base: InitialDataSet
    reference: LapseShiftPair
    transition_radius: float

    def __post_init__(self):
        if self.reference.asymptote is None:
            raise TensorError("incompatible-valence", "el par de referencia debe declarar su asíntota (a, b)")
        if self.reference.chart != self.base.chart:
            raise DomainError("invalid-radii", "el par de referencia vive en otra carta")

    @classmethod
    def build(cls, base: InitialDataSet, a: float, b: Sequence[float],
              transition_radius: float) -> "HamiltonianSpec":
        return cls(base, reference_pair(a, b, base.chart, transition_radius), transition_radius)

    @property
    def a(self) -> float:
        return self.reference.asymptote[0]

    @property
    def b(self) -> Tuple[float, ...]:
        return self.reference.asymptote[1]


@dataclass(frozen=True)
class HamiltonianValue:
    """Valor extrapolado de H con sus diagnósticos."""

    value: float
    error: float
    inner_correction: float
    radii: Tuple[float, ...]
    series: Tuple[float, ...]
    outer_sensitivity: float

    def to_dict(self) -> dict:
        return {
            'value': self.value,
            'error': self.error,
            'inner_correction': self.inner_correction,
            'radii': list(self.radii),
            'series': list(self.series),
            'outer_sensitivity': self.outer_sensitivity
        }


def _unpack(target: Target) -> Tuple[Field, Field]:
    if isinstance(target, InitialDataSet):
        return target.g, target.pi
    gamma, tau = target
    return gamma, tau


def _background_covector(gamma: np.ndarray) -> np.ndarray:
    """V_i = (div_δ γ − d tr_δ γ)_i = γ_{ij,j} − γ_{jj,i} a partir de ∂γ [i, j, a]."""
    return np.einsum('ijj...->i...', gamma) - np.einsum('jji...->i...', gamma)


def window_weights(chart: Chart, radius: float, half_width: float = HAMILTONIAN_WINDOW_HALF_WIDTH) -> np.ndarray:
    """Ventana suave: 1 para |x| ≤ R − w y 0 para |x| ≥ R + w."""
    return 1.0 - smooth_step((chart.radius - (radius - half_width)) / (2.0 * half_width))


def hamiltonian_density(spec: HamiltonianSpec, target: Target) -> np.ndarray:
    """
    Integrando nodal de la forma volumétrica de H (sin la medida √det g).

    [(div_g V, div_g τ) − Φ̄(γ,τ)]·(f₀,X₀) + (V, τ)·(∇f₀, ∇X₀), con V = div_δ γ − d tr_δ γ.
    """
    base = spec.base
    ctx = linearization_context(base)
    gamma, tau = _unpack(target)
    f0, X0 = spec.reference.f, spec.reference.X

    V = _background_covector(gamma.partials())
    # ∂V con los mismos jets de γ que usa Φ̄
    d2_gamma = gamma.second_partials()
    dV = np.einsum('ijja...->ia...', d2_gamma) - np.einsum('jjia...->ia...', d2_gamma)
    nabla_V = covariant_values(V, dV, (1, 0), ctx.gamma)
    div_V = np.einsum('ia...,ia...->...', ctx.ginv, nabla_V, optimize=True)
    div_tau = np.einsum('ijj...->i...', covariant_values(tau.values, tau.partials(), (0, 2), ctx.gamma))
    first, second = constraint_map(base, (gamma, tau), 'modified')

    scalar_part = (div_V - first.values) * f0.values
    vector_part = np.einsum('ij...,i...,j...->...', ctx.g, div_tau - second.values, X0.values, optimize=True)
    grad_f0 = np.einsum('i...,ij...,j...->...', V, ctx.ginv, f0.partials(), optimize=True)
    nabla_X0 = covariant_values(X0.values, X0.partials(), (0, 1), ctx.gamma)
    grad_X0 = np.einsum('ij...,ia...,aj...->...', tau.values, ctx.g, nabla_X0, optimize=True)
    return scalar_part + vector_part + grad_f0 + grad_X0


def inner_boundary_flux(spec: HamiltonianSpec, target: Target) -> float:
    """∫_{|x|=r_inner} (f₀V_i + τ_{ij}X₀^j) ν^i: término que deja el anillo."""
    gamma, tau = _unpack(target)
    f0, X0 = spec.reference.f, spec.reference.X
    chart = spec.base.chart
    radius = chart.r_inner

    def flux(x):
        dgamma = np.stack([gamma.at(x, (a,)) for a in range(chart.n)], axis=2)
        nu = x / radius
        V = _background_covector(dgamma)
        return (f0.at(x) * np.einsum('i...,i...->...', V, nu)
                + np.einsum('ij...,j...,i...->...', tau.at(x), X0.at(x), nu))

    return integrate_on_sphere(flux, chart.n, radius)[0]


def hamiltonian_value(spec: HamiltonianSpec, target: Target,
                      window_fractions: Sequence[float] = HAMILTONIAN_WINDOW_FRACTIONS) -> HamiltonianValue:
    """
    Evaluar H(γ, τ) en forma volumétrica.

    Args:
        spec: Especificación del Hamiltoniano
        target: (γ, τ) o InitialDataSet sobre la misma carta
        window_fractions: Radios de las ventanas, en fracciones de r_outer

    Returns:
        HamiltonianValue
    """
    base = spec.base
    chart = base.chart
    ctx = linearization_context(base)
    density = hamiltonian_density(spec, target)
    correction = inner_boundary_flux(spec, target)
    mask = chart.annulus_mask(0)

    radii = [chart.r_outer * f for f in window_fractions]
    series = [volume_integral(density * window_weights(chart, R), chart, mask, ctx.volume) + correction
              for R in radii]
    estimate = estimate_flux(radii, series, float(base.n - 2))
    result = HamiltonianValue(estimate.limit, estimate.error, correction, estimate.radii, estimate.values,
                              abs(series[-1] - estimate.limit))
    logger.info(f"H = {result.value:.6e} ± {result.error:.1e} (corrección interior {correction:.2e})")
    return result


class HamiltonianSurface(NamedTuple):
    """Forma de superficie de H y sus dos sumandos."""

    value: float
    adm_term: float
    constraint_term: float


def hamiltonian_surface_form(spec: HamiltonianSpec, target: Target,
                             radii: Optional[Sequence[float]] = None) -> HamiltonianSurface:
    """
    Forma de superficie (n−1)ω_{n−1}[2aE + b·P] − ∫Φ̄(γ,τ)·(f₀,X₀) dμ_g.

    Args:
        spec: Especificación del Hamiltoniano
        target: (γ, τ) o InitialDataSet
        radii: Radios para las cargas ADM del objetivo

    Returns:
        HamiltonianSurface
    """
    base = spec.base
    chart = base.chart
    n = base.n
    gamma, tau = _unpack(target)
    target_ids = base.with_fields(gamma, tau)
    charges = adm_charges(target_ids, radii)
    adm_term = (n - 1) * unit_sphere_area(n) * (2.0 * spec.a * charges.E + float(np.dot(spec.b, charges.P)))

    ctx = linearization_context(base)
    first, second = constraint_map(base, (gamma, tau), 'modified')
    pairing = ctx.constraint_pairing((first.values, second.values), spec.reference)
    constraint_term = volume_integral(pairing, chart, chart.annulus_mask(2), ctx.volume)
    return HamiltonianSurface(adm_term - constraint_term, adm_term, constraint_term)


def hamiltonian_gradient_pairing(spec: HamiltonianSpec, direction: SymPair) -> float:
    """
    DH(h, w) = −∫ (h, w)·(DΦ̄)*(f₀, X₀) dμ_g.

    Args:
        spec: Especificación del Hamiltoniano
        direction: Dirección (h, w)

    Returns:
        Valor de la derivada
    """
    base = spec.base
    ctx = linearization_context(base)
    adjoint_values = ctx.adjoint(spec.reference, 'modified')
    pairing = ctx.direction_pairing(direction, adjoint_values)
    return -volume_integral(pairing, base.chart, base.chart.annulus_mask(0), ctx.volume)


def finite_difference_gradient(spec: HamiltonianSpec, direction: SymPair, step: float = DIRECTIONAL_STEP,
                               window_fractions: Sequence[float] = HAMILTONIAN_WINDOW_FRACTIONS) -> float:
    """
    Derivada direccional de H por diferencias centradas con extrapolación de Richardson.

    Args:
        spec: Especificación del Hamiltoniano
        direction: Dirección (h, w)
        step: Paso t
        window_fractions: Radios de las ventanas de H, en fracciones de r_outer

    Returns:
        (4·D(t/2) − D(t))/3 con D(t) = (H(+t) − H(−t))/(2t)
    """
    base = spec.base

    def central(t):
        plus = (base.g + direction.h * t, base.pi + direction.w * t)
        minus = (base.g - direction.h * t, base.pi - direction.w * t)
        return (hamiltonian_value(spec, plus, window_fractions).value
                - hamiltonian_value(spec, minus, window_fractions).value) / (2.0 * t)

    return (4.0 * central(0.5 * step) - central(step)) / 3.0


def stationarity_residual(spec: HamiltonianSpec, multiplier: LapseShiftPair,
                          directions: Optional[List[SymPair]] = None,
                          count: int = STATIONARITY_DIRECTIONS, seed: int = BUMP_SEED) -> float:
    """
    Residuo débil de −(DΦ̄)*(f₀,X₀) = (DΦ̄)*(f₁,X₁) sobre un lote de direcciones.

    Args:
        spec: Especificación del Hamiltoniano
        multiplier: Candidato a multiplicador (f₁, X₁)
        directions: Direcciones de soporte compacto; por defecto un lote sembrado
        count: Tamaño del lote sembrado
        seed: Semilla del lote sembrado

    Returns:
        max_i |DH(h_i,w_i) + ∫(f₁,X₁)·DΦ̄(h_i,w_i) dμ_g| / ‖(h_i,w_i)‖
    """
    base = spec.base
    ctx = linearization_context(base)
    if directions is None:
        directions = seeded_directions(base.chart, count, seed)
    mask = base.chart.annulus_mask(0)
    worst = 0.0
    for direction in directions:
        forward = ctx.constraint_pairing(ctx.linearize(direction, 'modified'), multiplier)
        residual = hamiltonian_gradient_pairing(spec, direction) + volume_integral(forward, base.chart, mask,
                                                                                   ctx.volume)
        scale = direction.max_abs()
        if scale > 0:
            worst = max(worst, abs(residual) / scale)
    logger.info(f"Residuo de estacionariedad sobre {len(directions)} direcciones: {worst:.3e}")
    return worst
