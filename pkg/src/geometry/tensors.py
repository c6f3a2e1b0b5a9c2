"""
Álgebra puntual con la métrica: inversa, determinante, subir y bajar
índices, trazas, normas y divergencias.

Las funciones de bajo nivel trabajan sobre arrays (componentes delante,
ejes de malla al final) y usan ``np.einsum`` con listas de índices.
"""

import logging
from typing import Optional, Tuple

import numpy as np

from fields.field import Field
from utils.errors import MetricError, TensorError

logger = logging.getLogger(__name__)

MODES = ('raise', 'lower', 'trace', 'divergence', 'inner')


# ----------------------------------------------------------------------
# Inversa y densidad de volumen
# ----------------------------------------------------------------------
def _node_matrices(values: np.ndarray) -> np.ndarray:
    return np.moveaxis(values, (0, 1), (-2, -1))


def check_positive_definite(g: Field, mask: Optional[np.ndarray] = None) -> None:
    """
    Comprobar que la métrica es definida positiva en todos los nodos.

    Raises:
        MetricError: 'metric-not-positive-definite' con el nodo peor
    """
    eigen = np.linalg.eigvalsh(_node_matrices(g.values))[..., 0]
    if mask is not None:
        eigen = np.where(mask, eigen, np.inf)
    worst = np.unravel_index(int(np.argmin(eigen)), eigen.shape)
    if eigen[worst] <= 0:
        point = tuple(float(c) for c in g.chart.coords[(slice(None),) + worst])
        logger.error(f"Métrica no definida positiva en el nodo {worst} (x={point})")
        raise MetricError("metric-not-positive-definite",
                          f"autovalor mínimo {eigen[worst]:.3e} en x={point}", worst_node=worst)


def inverse_metric(g: Field) -> np.ndarray:
    """g^{ij} nodal (memorizado en el campo)."""
    def compute():
        check_positive_definite(g)
        inv = np.moveaxis(np.linalg.inv(_node_matrices(g.values)), (-2, -1), (0, 1))
        inv = 0.5 * (inv + np.swapaxes(inv, 0, 1))
        inv.setflags(write=False)
        return inv
    return g.memo('inverse', compute)


def sqrt_det(g: Field) -> np.ndarray:
    """√det g nodal: densidad de la medida dμ_g."""
    def compute():
        check_positive_definite(g)
        return np.sqrt(np.linalg.det(_node_matrices(g.values)))
    return g.memo('sqrt_det', compute)


def inverse_partials(g: Field) -> np.ndarray:
    """∂_a g^{ij} = −g^{ik} ∂_a g_{kl} g^{lj}, forma (n, n, n) + malla."""
    def compute():
        inv = inverse_metric(g)
        return -np.einsum('ik...,kla...,lj...->ija...', inv, g.partials(), inv, optimize=True)
    return g.memo('inverse_partials', compute)


# ----------------------------------------------------------------------
# Operaciones con arrays
# ----------------------------------------------------------------------
def contract_slot(values: np.ndarray, matrix: np.ndarray, slot: int, comp_axes: int) -> np.ndarray:
    """T'[.. i ..] = M[i, j] T[.. j ..] sobre el índice ``slot``."""
    tensor_idx = list(range(comp_axes))
    out_idx = list(tensor_idx)
    fresh = comp_axes
    tensor_idx[slot] = fresh
    return np.einsum(matrix, [slot, fresh, Ellipsis], values, tensor_idx + [Ellipsis],
                     out_idx + [Ellipsis], optimize=True)


def raise_all(values: np.ndarray, rank: Tuple[int, int], ginv: np.ndarray) -> np.ndarray:
    """Sube todos los índices covariantes (posiciones contra..contra+cov-1)."""
    cov, contra = rank
    for slot in range(contra, contra + cov):
        values = contract_slot(values, ginv, slot, cov + contra)
    return values


def lower_all(values: np.ndarray, rank: Tuple[int, int], g: np.ndarray) -> np.ndarray:
    """Baja todos los índices contravariantes (posiciones 0..contra-1)."""
    cov, contra = rank
    for slot in range(contra):
        values = contract_slot(values, g, slot, cov + contra)
    return values


def full_contraction(a: np.ndarray, b: np.ndarray, rank_a: Tuple[int, int],
                     rank_b: Tuple[int, int], g: np.ndarray, ginv: np.ndarray) -> np.ndarray:
    """
    Producto interior g(A, B) nodal de dos tensores de la misma valencia
    total, ajustando índices con g y g⁻¹ cuando las posiciones difieren.
    """
    valence = sum(rank_a)
    if valence != sum(rank_b):
        raise TensorError("incompatible-valence", f"valencias {rank_a} y {rank_b}")
    a_low = lower_all(a, rank_a, g)
    b_up = raise_all(b, rank_b, ginv)
    axes = tuple(range(valence))
    return np.sum(a_low * b_up, axis=axes) if valence else a_low * b_up


def norm_squared(values: np.ndarray, rank: Tuple[int, int], g: np.ndarray, ginv: np.ndarray) -> np.ndarray:
    return full_contraction(values, values, rank, rank, g, ginv)


def trace_values(values: np.ndarray, rank: Tuple[int, int], g: np.ndarray, ginv: np.ndarray) -> np.ndarray:
    """Traza métrica de un tensor de valencia total 2."""
    if rank == (2, 0):
        return np.einsum('ij...,ij...->...', ginv, values)
    if rank == (0, 2):
        return np.einsum('ij...,ij...->...', g, values)
    if rank == (1, 1):
        return np.einsum('ii...->...', values)
    raise TensorError("incompatible-valence", f"la traza requiere valencia total 2, rank={rank}")


def divergence_values(nabla: np.ndarray, rank: Tuple[int, int], ginv: np.ndarray) -> np.ndarray:
    """
    Divergencia a partir de ∇T (índice de derivada al final): contrae el
    último índice del tensor con la derivada, subiéndolo si es covariante.
    """
    cov, contra = rank
    valence = cov + contra
    if valence == 0:
        raise TensorError("incompatible-valence", "la divergencia de un escalar no está definida")
    if cov == 0:
        return np.trace(nabla, axis1=valence - 1, axis2=valence)
    return np.einsum(nabla, list(range(valence - 1)) + [valence, valence + 1, Ellipsis],
                     ginv, [valence, valence + 1, Ellipsis],
                     list(range(valence - 1)) + [Ellipsis], optimize=True)


# ----------------------------------------------------------------------
# Operación pública
# ----------------------------------------------------------------------
def metric_algebra(g: Field, T: Field, mode: str, other: Optional[Field] = None) -> Field:
    """
    Álgebra puntual con la métrica.

    Args:
        g: Métrica (valencia (2,0))
        T: Campo de entrada
        mode: 'raise' | 'lower' | 'trace' | 'divergence' | 'inner'
        other: Segundo campo para 'inner' (si falta se devuelve |T|_g)

    Returns:
        Campo resultante (escalar para 'trace' e 'inner')
    """
    if mode not in MODES:
        raise TensorError("incompatible-valence", f"modo desconocido: {mode}")
    if g.rank != (2, 0):
        raise TensorError("incompatible-valence", f"la métrica debe tener valencia (2,0), rank={g.rank}")

    cov, contra = T.rank
    ginv = inverse_metric(g)

    if mode == 'raise':
        if cov == 0:
            raise TensorError("incompatible-valence", "no hay índices covariantes que subir")
        return T.with_values(raise_all(T.values, T.rank, ginv), rank=(0, cov + contra))

    if mode == 'lower':
        if contra == 0:
            raise TensorError("incompatible-valence", "no hay índices contravariantes que bajar")
        return T.with_values(lower_all(T.values, T.rank, g.values), rank=(cov + contra, 0))

    if mode == 'trace':
        return T.with_values(trace_values(T.values, T.rank, g.values, ginv), rank=(0, 0), symmetric=False)

    if mode == 'divergence':
        from geometry.derivatives import covariant_derivative
        nabla = covariant_derivative(T, g)
        div = divergence_values(nabla.values, T.rank, ginv)
        if cov == 0:
            new_rank = (0, contra - 1)
        else:
            new_rank = (cov - 1, contra)
        return T.with_values(div, rank=new_rank, symmetric=False)

    if other is None:
        value = np.sqrt(np.maximum(norm_squared(T.values, T.rank, g.values, ginv), 0.0))
    else:
        value = full_contraction(T.values, other.values, T.rank, other.rank, g.values, ginv)
    return T.with_values(value, rank=(0, 0), symmetric=False)
