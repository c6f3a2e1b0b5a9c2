"""
Estarcidos de diferencias finitas e interpolación sobre la malla.

Funciones a nivel de arrays: los índices de componentes van delante y los
n ejes de la malla al final.
"""

from typing import Dict, Tuple

import numpy as np
from scipy import ndimage

# Coeficientes (desplazamiento, peso) de la primera derivada
CENTRAL = {
    2: ((-1, -0.5), (1, 0.5)),
    4: ((-2, 1 / 12), (-1, -2 / 3), (1, 2 / 3), (2, -1 / 12)),
}

# Estarcidos laterales para los primeros nodos de cada borde; la clave es
# la distancia al borde
ONE_SIDED = {
    2: {0: ((0, -1.5), (1, 2.0), (2, -0.5))},
    4: {
        0: ((0, -25 / 12), (1, 4.0), (2, -3.0), (3, 4 / 3), (4, -0.25)),
        1: ((-1, -0.25), (0, -5 / 6), (1, 1.5), (2, -0.5), (3, 1 / 12)),
    },
}


def partial_along(values: np.ndarray, axis: int, h: float, order: int) -> np.ndarray:
    """
    Primera derivada a lo largo de un eje del array.

    Args:
        values: Array de muestras
        axis: Eje del array a derivar
        h: Paso de malla
        order: Orden de precisión (2 o 4)

    Returns:
        Array con la misma forma
    """
    data = np.moveaxis(values, axis, 0)
    size = data.shape[0]
    p = order // 2
    out = np.zeros_like(data, dtype=float)

    for offset, weight in CENTRAL[order]:
        out[p:size - p] += weight * data[p + offset:size - p + offset]

    for distance, stencil in ONE_SIDED[order].items():
        left = distance
        right = size - 1 - distance
        out[left] = sum(weight * data[left + offset] for offset, weight in stencil)
        out[right] = -sum(weight * data[right - offset] for offset, weight in stencil)

    return np.moveaxis(out, 0, axis) / h


def grid_partial(values: np.ndarray, n: int, grid_axis: int, h: float, order: int) -> np.ndarray:
    """Derivada respecto a la coordenada ``grid_axis`` (0..n-1)."""
    return partial_along(values, values.ndim - n + grid_axis, h, order)


def grid_gradient(values: np.ndarray, n: int, h: float, order: int) -> np.ndarray:
    """
    Gradiente coordenado; el índice de derivada se añade como último
    índice de componente (justo antes de los ejes de malla).
    """
    parts = [grid_partial(values, n, a, h, order) for a in range(n)]
    return np.stack(parts, axis=values.ndim - n)


def spline_order(fd_order: int) -> int:
    """Orden del spline de interpolación consistente con fd_order."""
    return 3 if fd_order >= 4 else 1


def interpolate(values: np.ndarray, n: int, r_outer: float, h: float, fd_order: int,
                points: np.ndarray, cache: Dict[Tuple, np.ndarray] = None,
                cache_key: Tuple = ()) -> np.ndarray:
    """
    Interpolar componentes de malla en puntos arbitrarios.

    Args:
        values: Array (componentes..., N, ..., N)
        n: Dimensión
        r_outer: Semilado de la caja
        h: Paso de malla
        fd_order: Orden de diferencias (fija el orden del spline)
        points: Puntos, forma (n, M)
        cache: Diccionario opcional para reutilizar coeficientes del spline
        cache_key: Prefijo de clave dentro de ``cache``

    Returns:
        Array (componentes..., M)
    """
    comp_shape = values.shape[:values.ndim - n]
    flat = values.reshape((-1,) + values.shape[values.ndim - n:])
    index_coords = (np.asarray(points, dtype=float) + r_outer) / h
    order = spline_order(fd_order)
    result = np.empty((flat.shape[0], index_coords.shape[1]))

    for c in range(flat.shape[0]):
        if order > 1:
            key = tuple(cache_key) + (c,)
            coeffs = None if cache is None else cache.get(key)
            if coeffs is None:
                coeffs = ndimage.spline_filter(flat[c], order=order, mode='nearest')
                if cache is not None:
                    cache[key] = coeffs
            result[c] = ndimage.map_coordinates(coeffs, index_coords, order=order,
                                                mode='nearest', prefilter=False)
        else:
            result[c] = ndimage.map_coordinates(flat[c], index_coords, order=1, mode='nearest')

    return result.reshape(comp_shape + (index_coords.shape[1],))
