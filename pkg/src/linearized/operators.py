"""
Linealización DΦ del operador de restricciones, linealización modificada
DΦ̄ y sus adjuntos formales respecto del producto L² de g.

Autor: [Tu Nombre]
Fecha: [Fecha]
"""

import logging
from functools import cached_property
from typing import Tuple

import numpy as np

from constraints.data_set import InitialDataSet
from constraints.operators import VARIANTS, mass_current
from fields.field import Field
from geometry.curvature import christoffel_symbols, curvature_package
from geometry.derivatives import (covariant_values, grid_covariant, hessian_values, killing_values,
                                  lie_momentum_values)
from geometry.tensors import inverse_metric, lower_all, norm_squared, raise_all, sqrt_det, trace_values
from linearized.pairs import LapseShiftPair, SymPair
from utils.errors import TensorError

logger = logging.getLogger(__name__)


def check_variant(variant: str) -> None:
    if variant not in VARIANTS:
        raise TensorError("incompatible-valence", f"variante desconocida: {variant}")


class LinearizationContext:
    """
    Cantidades del punto base (g, π) compartidas por todas las direcciones.

    Precalcula g⁻¹, Γ, Ric, R_g, π con índices bajados y mixtos, tr π,
    |π|², J y √det g, de modo que evaluar DΦ̄ o su adjunto para muchas
    direcciones (p. ej. dentro de Newton) no repite la curvatura.

    Args:
        base: Datos iniciales del punto base
    """

    def __init__(self, base: InitialDataSet):
        self.base = base
        self.chart = base.chart
        self.n = base.n
        self.metric = base.g

        g = base.g
        self.g = g.values
        self.ginv = inverse_metric(g)
        self.gamma = christoffel_symbols(g)
        package = curvature_package(g)
        self.ricci = package.ricci.values
        self.scalar = package.scalar.values

        self.pi = base.pi.values
        self.pi_low = lower_all(self.pi, (0, 2), self.g)
        # π^i_ℓ = π^{im} g_{mℓ}
        self.pi_mixed = np.einsum('im...,ml...->il...', self.pi, self.g, optimize=True)
        self.tr_pi = trace_values(self.pi, (0, 2), self.g, self.ginv)
        self.pi_sq = norm_squared(self.pi, (0, 2), self.g, self.ginv)

        self.J = mass_current(base).J.values
        self.J_low = lower_all(self.J, (0, 1), self.g)
        self.volume = sqrt_det(g)
        logger.info(f"Contexto de linealización preparado en una malla {self.chart.shape}")

    @cached_property
    def riemann(self) -> np.ndarray:
        """R^ℓ_{abc} almacenado como [ℓ, a, b, c]."""
        return curvature_package(self.metric, want_riemann=True).riemann.values

    # ------------------------------------------------------------------
    # Ayudas
    # ------------------------------------------------------------------
    def scalar_field(self, values: np.ndarray) -> Field:
        return Field(self.chart, (0, 0), values)

    def momentum_part(self) -> np.ndarray:
        """S_{ij} = (2/(n−1)) tr π g_{ij} − 2π_{ij}."""
        return 2.0 / (self.n - 1) * self.tr_pi * self.g - 2.0 * self.pi_low

    def symmetrized(self, X_low: np.ndarray) -> np.ndarray:
        """(X ⊙ J)_{ij} = ½(X_i J_j + X_j J_i)."""
        outer = np.einsum('i...,j...->ij...', X_low, self.J_low, optimize=True)
        return 0.5 * (outer + np.swapaxes(outer, 0, 1))

    # ------------------------------------------------------------------
    # DΦ y DΦ̄
    # ------------------------------------------------------------------
    def lichnerowicz(self, h: Field) -> Tuple[np.ndarray, Field, np.ndarray]:
        """
        L_g h = −Δ_g(tr_g h) + div_g div_g h − h^{ij}R_{ij}.

        Returns:
            (L_g h, tr_g h como campo, ∇h con el índice de derivada al final)
        """
        tr_h = self.scalar_field(np.einsum('ij...,ij...->...', self.ginv, h.values, optimize=True))
        laplacian = np.einsum('ij...,ij...->...', self.ginv, hessian_values(tr_h, self.metric), optimize=True)

        nabla_h = covariant_values(h.values, h.partials(), (2, 0), self.gamma)
        div_h = np.einsum('jk...,ijk...->i...', self.ginv, nabla_h, optimize=True)
        nabla_div = grid_covariant(div_h, (1, 0), self.metric)
        div_div = np.einsum('ia...,ia...->...', self.ginv, nabla_div, optimize=True)

        h_up = raise_all(h.values, (2, 0), self.ginv)
        curvature = np.einsum('ij...,ij...->...', h_up, self.ricci, optimize=True)
        return -laplacian + div_div - curvature, tr_h, nabla_h

    def linearize(self, direction: SymPair, variant: str = 'plain') -> Tuple[np.ndarray, np.ndarray]:
        """
        DΦ(h, w) (y DΦ̄ si variant='modified') como arrays (escalar, vector).

        Args:
            direction: (h, w)
            variant: 'plain' o 'modified'
        """
        check_variant(variant)
        n = self.n
        h, w = direction.h.values, direction.w.values
        lich, tr_h, nabla_h = self.lichnerowicz(direction.h)

        quadratic = np.einsum('ij...,il...,jl...->...', h, self.pi_mixed, self.pi, optimize=True)
        mixed = np.einsum('jk...,km...,mj...->...', self.pi_mixed, w, self.g, optimize=True)
        h_pi = np.einsum('ij...,ij...->...', h, self.pi, optimize=True)
        tr_w = np.einsum('ij...,ij...->...', self.g, w, optimize=True)
        first = lich - 2.0 * quadratic - 2.0 * mixed + 2.0 / (n - 1) * self.tr_pi * (h_pi + tr_w)

        nabla_w = covariant_values(w, direction.w.partials(), (0, 2), self.gamma)
        div_w = np.einsum('ijj...->i...', nabla_w)
        transport = np.einsum('jk...,jkl...,li...->i...', self.pi, nabla_h, self.ginv, optimize=True)
        twist = np.einsum('jk...,im...,mjk...->i...', self.pi, self.ginv, nabla_h, optimize=True)
        trace_grad = np.einsum('ij...,j...->i...', self.pi, tr_h.partials(), optimize=True)
        second = div_w - 0.5 * transport + twist + 0.5 * trace_grad

        if variant == 'modified':
            second = second + self.modified_shift(direction.h)
        return first, second

    def modified_shift(self, h: Field) -> np.ndarray:
        """½ (h·J)^i = ½ g^{ij} h_{jk} J^k."""
        return 0.5 * np.einsum('ij...,jk...,k...->i...', self.ginv, h.values, self.J, optimize=True)

    # ------------------------------------------------------------------
    # Adjuntos
    # ------------------------------------------------------------------
    def adjoint(self, pair: LapseShiftPair, variant: str = 'plain') -> Tuple[np.ndarray, np.ndarray]:
        """
        DΦ*(f, X) (o DΦ̄* si variant='modified') como arrays ((0,2), (2,0)).

        La primera ranura es L*_g f + (2/(n−1) trπ π − 2π∘π) f
        + ½(L_Xπ + (div X)π − (X_{k;m}π^{km})g − g(X,J)g) − X⊙J; la
        variante modificada suma ½X⊙J.
        """
        check_variant(variant)
        n = self.n
        f, X = pair.f, pair.X
        fv = f.values

        hess = hessian_values(f, self.metric)
        laplacian = np.einsum('ij...,ij...->...', self.ginv, hess, optimize=True)
        l_star = -laplacian * self.g + hess - fv * self.ricci
        pi_square = np.einsum('ik...,kj...->ij...', self.pi_low, self.pi_mixed, optimize=True)
        potential = (2.0 / (n - 1) * self.tr_pi * self.pi_low - 2.0 * pi_square) * fv

        nabla_X = covariant_values(X.values, X.partials(), (0, 1), self.gamma)
        div_X = np.einsum('kk...->...', nabla_X)
        X_low = lower_all(X.values, (0, 1), self.g)
        # π^{km} X_{k;m}
        pi_dX = np.einsum('km...,ka...,am...->...', self.pi, self.g, nabla_X, optimize=True)
        X_J = np.einsum('i...,i...->...', X.values, self.J_low, optimize=True)
        lie_pi = lower_all(lie_momentum_values(self.base.pi, X), (0, 2), self.g)
        shift = 0.5 * (lie_pi + div_X * self.pi_low - pi_dX * self.g - X_J * self.g)

        correction = 1.0 if variant == 'plain' else 0.5
        first = l_star + potential + shift - correction * self.symmetrized(X_low)

        lie_g = raise_all(killing_values(X, self.metric), (2, 0), self.ginv)
        second = -0.5 * lie_g + (2.0 / (n - 1) * self.tr_pi * self.ginv - 2.0 * self.pi) * fv
        return first, second

    # ------------------------------------------------------------------
    # Productos L²
    # ------------------------------------------------------------------
    def constraint_pairing(self, values: Tuple[np.ndarray, np.ndarray], pair: LapseShiftPair) -> np.ndarray:
        """Densidad ⟨(a, v), (f, X)⟩ = a·f + g_{ij} v^i X^j."""
        scalar, vector = values
        return scalar * pair.f.values + np.einsum('ij...,i...,j...->...', self.g, vector, pair.X.values,
                                                  optimize=True)

    def direction_pairing(self, direction: SymPair, values: Tuple[np.ndarray, np.ndarray]) -> np.ndarray:
        """Densidad ⟨(h, w), (A, B)⟩ = h_{ij}A_{kl}g^{ik}g^{jl} + w^{ij}B^{kl}g_{ik}g_{jl}."""
        A, B = values
        first = np.einsum('ij...,kl...,ik...,jl...->...', direction.h.values, A, self.ginv, self.ginv,
                          optimize=True)
        second = np.einsum('ij...,kl...,ik...,jl...->...', direction.w.values, B, self.g, self.g,
                           optimize=True)
        return first + second


def linearization_context(base: InitialDataSet) -> LinearizationContext:
    """Contexto de linealización memorizado en los datos base."""
    return base.memo('linearization_context', lambda: LinearizationContext(base))


def linearize(base: InitialDataSet, direction: SymPair, variant: str = 'plain',
              context: LinearizationContext = None) -> Tuple[Field, Field]:
    """
    Linealización del operador de restricciones en (g, π).

    Args:
        base: Punto base
        direction: Dirección (h, w)
        variant: 'plain' (DΦ) o 'modified' (DΦ̄ = DΦ + (0, ½h·J))
        context: Contexto precalculado opcional

    Returns:
        (primera ranura escalar, segunda ranura vectorial)
    """
    context = linearization_context(base) if context is None else context
    first, second = context.linearize(direction, variant)
    return Field(base.chart, (0, 0), first), Field(base.chart, (0, 1), second)


def adjoint(base: InitialDataSet, pair: LapseShiftPair, variant: str = 'plain',
            context: LinearizationContext = None) -> SymPair:
    """
    Adjunto formal DΦ*(f, X) o DΦ̄*(f, X).

    Args:
        base: Punto base
        pair: Par lapso-desplazamiento
        variant: 'plain' o 'modified'
        context: Contexto precalculado opcional

    Returns:
        SymPair con la ranura (0,2) y la ranura (2,0)
    """
    context = linearization_context(base) if context is None else context
    first, second = context.adjoint(pair, variant)
    return SymPair(Field(base.chart, (2, 0), first, symmetric=True),
                   Field(base.chart, (0, 2), second, symmetric=True))
