"""
Derivadas covariantes, derivadas de Lie y operador de Killing conforme.
"""

import logging
from typing import Tuple

import numpy as np

from fields.field import Field
from geometry.curvature import christoffel_symbols
from geometry.tensors import contract_slot, divergence_values, inverse_metric, lower_all, raise_all
from utils.errors import TensorError

logger = logging.getLogger(__name__)

MAX_SLOTS = 2


def covariant_values(values: np.ndarray, partials: np.ndarray, rank: Tuple[int, int],
                     gamma: np.ndarray) -> np.ndarray:
    """
    ∇T a partir de T y ∂T; el índice de derivada queda al final.

    Args:
        values: Componentes de T
        partials: ∂T (índice de derivada al final de las componentes)
        rank: Valencia (cov, contra) de T
        gamma: Γ^k_{ij}

    Returns:
        Componentes de ∇T
    """
    cov, contra = rank
    valence = cov + contra
    result = np.array(partials, dtype=float, copy=True)
    deriv = valence
    fresh = valence + 1
    out_idx = list(range(valence + 1)) + [Ellipsis]

    for slot in range(valence):
        tensor_idx = list(range(valence))
        tensor_idx[slot] = fresh
        if slot < contra:
            # + Γ^{T_slot}_{a s} T^{..s..}
            result += np.einsum(gamma, [slot, deriv, fresh, Ellipsis], values, tensor_idx + [Ellipsis],
                                out_idx, optimize=True)
        else:
            # − Γ^s_{T_slot a} T_{..s..}
            result -= np.einsum(gamma, [fresh, slot, deriv, Ellipsis], values, tensor_idx + [Ellipsis],
                                out_idx, optimize=True)
    return result


def covariant_derivative(T: Field, g: Field) -> Field:
    """
    Derivada covariante de Levi-Civita.

    Args:
        T: Campo de valencia ≤ (2, 2)
        g: Métrica

    Returns:
        Campo con un índice covariante más (el último)
    """
    cov, contra = T.rank
    if cov > MAX_SLOTS or contra > MAX_SLOTS:
        raise TensorError("unsupported-valence", f"valencia {T.rank} fuera de (2,2)")
    gamma = christoffel_symbols(g)
    values = covariant_values(T.values, T.partials(), T.rank, gamma)
    return Field(T.chart, (cov + 1, contra), values)


def killing_values(X: Field, g: Field) -> np.ndarray:
    """(L_X g)_{ij} = X_{i;j} + X_{j;i}."""
    nabla = covariant_values(X.values, X.partials(), (0, 1), christoffel_symbols(g))
    lowered = contract_slot(nabla, g.values, 0, 2)
    return lowered + np.swapaxes(lowered, 0, 1)


def lie_momentum_values(pi: Field, X: Field) -> np.ndarray:
    """(L_X π)^{ij} = X^k ∂_k π^{ij} − π^{kj} ∂_k X^i − π^{ik} ∂_k X^j."""
    dpi = pi.partials()
    dX = X.partials()
    transport = np.einsum('k...,ijk...->ij...', X.values, dpi, optimize=True)
    stretch = np.einsum('kj...,ik...->ij...', pi.values, dX, optimize=True)
    return transport - stretch - np.swapaxes(stretch, 0, 1)


def lie_derivatives(g: Field, pi: Field, X: Field) -> Tuple[Field, Field]:
    """
    Derivadas de Lie de la métrica y del tensor de momento a lo largo de X.

    Args:
        g: Métrica
        pi: Tensor de momento (0,2)
        X: Campo vectorial (0,1)

    Returns:
        (L_X g, L_X π)
    """
    if X.rank != (0, 1):
        raise TensorError("incompatible-valence", f"X debe ser un vector, rank={X.rank}")
    lie_g = Field(g.chart, (2, 0), killing_values(X, g), symmetric=True)
    lie_pi = Field(g.chart, (0, 2), lie_momentum_values(pi, X), symmetric=True)
    return lie_g, lie_pi


def divergence_of_vector(X: Field, g: Field) -> np.ndarray:
    nabla = covariant_values(X.values, X.partials(), (0, 1), christoffel_symbols(g))
    return divergence_values(nabla, (0, 1), inverse_metric(g))


def conformal_killing_values(Y: Field, g: Field) -> np.ndarray:
    """(L_Y g − (div_g Y) g) con los índices subidos por g."""
    ginv = inverse_metric(g)
    raised = raise_all(killing_values(Y, g), (2, 0), ginv)
    return raised - divergence_of_vector(Y, g) * ginv


def conformal_killing_op(g: Field, Y: Field) -> Field:
    """
    Operador de Killing conforme 𝓛_g Y = L_Y g − (div_g Y) g en forma (2,0).

    Args:
        g: Métrica
        Y: Campo vectorial

    Returns:
        Tensor simétrico contravariante
    """
    if Y.rank != (0, 1):
        raise TensorError("incompatible-valence", f"Y debe ser un vector, rank={Y.rank}")
    return Field(g.chart, (0, 2), conformal_killing_values(Y, g), symmetric=True)


def lower_vector(X: Field, g: Field) -> np.ndarray:
    """X_i = g_{ij} X^j."""
    return lower_all(X.values, (0, 1), g.values)


def grid_covariant(values: np.ndarray, rank: Tuple[int, int], g: Field) -> np.ndarray:
    """∇T para componentes de malla (∂T por diferencias finitas)."""
    partials = Field(g.chart, rank, values).partials()
    return covariant_values(values, partials, rank, christoffel_symbols(g))


def hessian_values(f: Field, g: Field) -> np.ndarray:
    """Hess_g f = ∂_i∂_j f − Γ^k_{ij} ∂_k f."""
    return f.second_partials() - np.einsum('kij...,k...->ij...', christoffel_symbols(g), f.partials(),
                                           optimize=True)


def laplacian_values(f: Field, g: Field) -> np.ndarray:
    """Δ_g f = g^{ij} (Hess_g f)_{ij}."""
    return np.einsum('ij...,ij...->...', inverse_metric(g), hessian_values(f, g), optimize=True)
