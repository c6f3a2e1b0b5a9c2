"""
Problemas de Poisson planos auxiliares Δ₀φ = tr₀π y Δ₀V_i = ½g_{jj,i} − g_{ij,j}.

Se resuelven sobre los nodos del anillo con Dirichlet nulo en r_inner y
la condición de Robin ∂_r u + (n−2)u/r = 0 en r_outer, que elimina la
constante y deja pasar |x|^{2−n}.

Autor: [Tu Nombre]
Fecha: [Fecha]
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as sp_la

from constraints.data_set import InitialDataSet
from fields.chart import Chart, default_q1
from fields.calculus import flat_divergence
from fields.field import Field
from fields.quadrature import sphere_average
from utils.config import CG_MAX_ITER, CG_RTOL, FIT_SPHERES, FIT_WINDOW_FRACTIONS
from utils.errors import DomainError, FitError, SolverError

logger = logging.getLogger(__name__)

# Capas de estarcido excluidas al medir residuos
RESIDUAL_LAYERS = 2


class FlatPoissonOperator:
    """
    Laplaciano plano de 2n+1 puntos sobre los nodos r_inner ≤ |x| ≤ r_outer.

    Las incógnitas son los nodos del anillo. Un vecino con |y| < r_inner
    vale 0; un vecino con |y| > r_outer (o fuera de la caja) vale 0 con
    ``outer="dirichlet"`` y u(x)·(|x|/|y|)^{n−2} con ``outer="robin"``.
    La matriz −L es simétrica y definida positiva.

    Args:
        chart: Carta exterior
        outer: Condición exterior, "robin" o "dirichlet"
    """

    def __init__(self, chart: Chart, outer: str = "robin"):
        if outer not in ("robin", "dirichlet"):
            raise DomainError("invalid-mode", f"condición exterior desconocida: {outer}")
        self.chart = chart
        self.outer = outer
        self.mask = chart.annulus_mask(0)
        self.size = int(np.count_nonzero(self.mask))
        self.index = np.full(chart.shape, -1, dtype=np.int64)
        self.index[self.mask] = np.arange(self.size)
        self.matrix = self._assemble()
        logger.info(f"Operador de Poisson plano ({outer}) ensamblado: {self.size} incógnitas")

    def _assemble(self) -> sp.csr_matrix:
        chart = self.chart
        n, h, N = chart.n, chart.spacing, chart.nodes_per_axis
        nodes = np.argwhere(self.mask)
        rows = self.index[tuple(nodes.T)]
        radius = chart.radius[self.mask]
        points = chart.coords[(slice(None),) + tuple(nodes.T)]

        diagonal = np.full(self.size, -2.0 * n / h ** 2)
        row_list, col_list, data_list = [], [], []
        for axis in range(n):
            for step in (-1, 1):
                neighbor = nodes.copy()
                neighbor[:, axis] += step
                in_box = (neighbor[:, axis] >= 0) & (neighbor[:, axis] < N)
                shifted = points.copy()
                shifted[axis] += step * h
                r_neighbor = np.sqrt(np.sum(shifted ** 2, axis=0))

                clipped = np.clip(neighbor, 0, N - 1)
                neighbor_index = self.index[tuple(clipped.T)]
                interior = in_box & (neighbor_index >= 0)
                row_list.append(rows[interior])
                col_list.append(neighbor_index[interior])
                data_list.append(np.full(np.count_nonzero(interior), 1.0 / h ** 2))

                ghost = ~interior & (r_neighbor > chart.r_inner) & (self.outer == "robin")
                diagonal[ghost] += (radius[ghost] / r_neighbor[ghost]) ** (n - 2) / h ** 2

        row_list.append(np.arange(self.size))
        col_list.append(np.arange(self.size))
        data_list.append(diagonal)
        return sp.csr_matrix((np.concatenate(data_list), (np.concatenate(row_list), np.concatenate(col_list))),
                             shape=(self.size, self.size))

    @cached_property
    def _preconditioner(self) -> sp.dia_matrix:
        return sp.diags(-1.0 / self.matrix.diagonal())

    def apply(self, values: np.ndarray) -> np.ndarray:
        """L u en los nodos del anillo (0 fuera)."""
        out = np.zeros(self.chart.shape)
        out[self.mask] = self.matrix @ values[self.mask]
        return out

    def solve(self, source: np.ndarray, rtol: float = CG_RTOL, max_iter: int = CG_MAX_ITER) -> np.ndarray:
        """
        Resolver L u = source por gradiente conjugado sobre −L.

        Args:
            source: Término fuente en la malla
            rtol: Tolerancia relativa
            max_iter: Tope de iteraciones

        Returns:
            Solución en la malla (0 fuera del anillo)
        """
        rhs = -source[self.mask]
        out = np.zeros(self.chart.shape)
        if not np.any(rhs):
            return out
        iterations = []
        solution, info = sp_la.cg(-self.matrix, rhs, rtol=rtol, maxiter=max_iter, M=self._preconditioner,
                                  callback=lambda _: iterations.append(1))
        if info != 0:
            logger.error(f"CG no convergió (info={info}) tras {len(iterations)} iteraciones")
            raise SolverError("solver-not-converged", f"CG sin convergencia (info={info})",
                              iterations=len(iterations))
        logger.debug(f"CG convergió en {len(iterations)} iteraciones")
        out[self.mask] = solution
        return out

    def residual(self, solution: np.ndarray, source: np.ndarray) -> float:
        """sup |L u − source| / sup |source| lejos de las fronteras."""
        chart = self.chart
        margin = RESIDUAL_LAYERS * chart.spacing
        inner = chart.annulus_mask(0, r_min=chart.r_inner + margin, r_max=chart.r_outer - margin)
        scale = float(np.max(np.abs(source[inner]))) if np.any(inner) else 0.0
        if scale == 0.0:
            return 0.0
        return float(np.max(np.abs(self.apply(solution)[inner] - source[inner]))) / scale


def poisson_operator(chart: Chart, outer: str = "robin") -> FlatPoissonOperator:
    return FlatPoissonOperator(chart, outer)


def _check_decay(chart: Chart, source: np.ndarray, label: str) -> None:
    """La fuente no puede crecer de la capa intermedia a la exterior."""
    magnitude = np.abs(source).reshape((-1,) + chart.shape).max(axis=0)
    middle = chart.annulus_mask(0, r_min=0.375 * chart.r_outer, r_max=0.5 * chart.r_outer)
    outer = chart.annulus_mask(0, r_min=0.75 * chart.r_outer)
    if not (np.any(middle) and np.any(outer)):
        return
    middle_max = float(np.max(magnitude[middle]))
    outer_max = float(np.max(magnitude[outer]))
    if outer_max > 1e-14 and outer_max > middle_max * (1.0 + 1e-6):
        raise SolverError("source-nondecaying",
                          f"la fuente de {label} no decae: {middle_max:.3e} → {outer_max:.3e}")


def trace_source(ids: InitialDataSet) -> np.ndarray:
    """tr₀π = π^{ii}."""
    return np.einsum('ii...->...', ids.pi.values)


def shift_sources(ids: InitialDataSet) -> np.ndarray:
    """½g_{jj,i} − g_{ij,j}, forma (n,) + malla."""
    dg = ids.g.partials()
    return 0.5 * np.einsum('jji...->i...', dg) - np.einsum('ijj...->i...', dg)


def q1_of(ids: InitialDataSet) -> float:
    weight = ids.type_params
    if weight.q1 is not None:
        return weight.q1
    q0 = weight.q0 if weight.q0 is not None else weight.q
    return default_q1(weight.q, q0, ids.n)


def fit_window(chart: Chart, window: Optional[Tuple[float, float]] = None,
               count: int = FIT_SPHERES) -> List[float]:
    """
    Radios de ajuste equiespaciados dentro de la ventana.

    Args:
        chart: Carta
        window: (r_lo, r_hi); por defecto FIT_WINDOW_FRACTIONS·r_outer recortado a la zona segura
        count: Número de esferas

    Returns:
        Lista de radios
    """
    inner, outer = chart.safe_radii(2)
    if window is None:
        lo, hi = (f * chart.r_outer for f in FIT_WINDOW_FRACTIONS)
        lo, hi = max(lo, inner), min(hi, outer)
    else:
        lo, hi = (float(r) for r in window)
        if lo < inner or hi > outer:
            raise DomainError("radii-out-of-chart",
                              f"ventana ({lo}, {hi}) fuera de la zona segura ({inner:.3f}, {outer:.3f})")
    if count < 3 or hi <= lo:
        raise FitError("window-too-small", f"ventana ({lo:.3f}, {hi:.3f}) con {count} esferas")
    return list(np.linspace(lo, hi, count))


def fit_radial(radii: Sequence[float], values: Sequence[float], exponents: Sequence[float]) -> np.ndarray:
    """
    Mínimos cuadrados de values(r) ≈ Σ c_k r^{e_k}.

    Args:
        radii: Radios
        values: Valores (medias esféricas)
        exponents: Exponentes de la base

    Returns:
        Coeficientes c_k
    """
    r = np.asarray(radii, dtype=float)
    if len(r) < len(exponents):
        raise FitError("window-too-small", f"{len(r)} esferas para {len(exponents)} coeficientes")
    basis = np.stack([r ** e for e in exponents], axis=1)
    scale = np.max(np.abs(basis), axis=0)
    coefficients, _, rank, _ = np.linalg.lstsq(basis / scale, np.asarray(values, dtype=float), rcond=None)
    if rank < len(exponents):
        raise FitError("ill-conditioned-fit", f"rango {rank} < {len(exponents)} con exponentes {exponents}")
    return coefficients / scale


@dataclass(frozen=True)
class AuxPotentials:
    """
    Potenciales auxiliares φ y V_i con el coeficiente β de div₀V.

    ``V`` es un campo de malla de valencia (1,0) cuyas componentes son los V_i.
    """

    phi: Field
    V: Field
    beta: float
    residuals: Dict[str, float]

    @property
    def components(self) -> List[Field]:
        return [self.V.component((i,)) for i in range(self.V.n)]


def beta_series(ids: InitialDataSet, V: Field, radii: Sequence[float]) -> List[float]:
    """Medias esféricas de div₀V − ½(n − g_ii) en los radios dados."""
    n = ids.n
    g_trace = np.einsum('ii...->...', ids.g.values)
    residual = Field(ids.chart, (0, 0), flat_divergence(V) - 0.5 * (n - g_trace))
    return [sphere_average(residual, r) for r in radii]


def solve_aux_poisson(ids: InitialDataSet, window: Optional[Tuple[float, float]] = None) -> AuxPotentials:
    """
    Resolver los problemas de Poisson auxiliares y extraer β.

    Args:
        ids: Datos iniciales
        window: Ventana radial del ajuste de β

    Returns:
        AuxPotentials
    """
    chart = ids.chart
    n = ids.n
    operator = ids.memo('flat_poisson_operator', lambda: poisson_operator(chart))

    phi_source = trace_source(ids)
    V_sources = shift_sources(ids)
    _check_decay(chart, phi_source, "φ")
    _check_decay(chart, V_sources, "V")

    phi = operator.solve(phi_source)
    V = np.stack([operator.solve(V_sources[i]) for i in range(n)])
    residuals = {'phi': operator.residual(phi, phi_source)}
    for i in range(n):
        residuals[f'V_{i}'] = operator.residual(V[i], V_sources[i])

    V_field = Field(chart, (1, 0), V)
    radii = fit_window(chart, window)
    q1 = q1_of(ids)
    coefficients = fit_radial(radii, beta_series(ids, V_field, radii), [0.0, 2.0 - n, 2.0 - n - q1])
    beta = float(coefficients[1])
    logger.info(f"Potenciales auxiliares resueltos: β = {beta:.6f}, residuos {residuals}")
    return AuxPotentials(Field(chart, (0, 0), phi), V_field, beta, residuals)
