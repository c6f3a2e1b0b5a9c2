"""
Deformación de datos iniciales hacia un valor prescrito del operador de
restricciones modificado.

El mapa de resolución es
    T(u, Y, c) = Φ̄_{(g,π)}((1+u)^{4/(n−2)} γ + Σ c_k η_k, τ + 𝓛_γ Y + Σ c_k ξ_k)
con (γ, τ) = (g, π) por defecto, u e Y nulos fuera del anillo y (η_k, ξ_k)
un lote fijo de chichones sembrados. Newton resuelve T = objetivo; cada
paso resuelve el sistema lineal orlado con GMRES.

Autor: [Tu Nombre]
Fecha: [Fecha]
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
import scipy.sparse.linalg as sp_la

from asymptotics.poisson import poisson_operator
from constraints.data_set import InitialDataSet
from constraints.dec import DecVerdict, current_norm, dec_verdict
from constraints.operators import constraint_map, mass_current, modified_correction
from fields.chart import DecayWeight
from fields.field import Field
from fields.norms import weighted_norm, weighted_sup
from geometry.derivatives import conformal_killing_op
from linearized.operators import LinearizationContext
from linearized.pairs import SymPair, seeded_directions
from utils.config import (BUMP_SEED, GMRES_MAX_ITER, GMRES_RESTART, GMRES_RTOL, ILU_DROP_TOL,
                          ILU_FILL_FACTOR, MAX_CONFORMAL_CHANGE, N_BUMPS, NEWTON_MAX_ITER, NEWTON_TOL,
                          TRUST_RADIUS)
from utils.errors import DomainError, SolverError

logger = logging.getLogger(__name__)

# Crecimiento del residuo entre iteraciones que se considera divergencia
GROWTH_FACTOR = 2.0


@dataclass(frozen=True)
class DeformConfig:
    """Parámetros de Newton, del solver lineal y de la base de corrección."""

    max_iter: int = NEWTON_MAX_ITER
    tol: float = NEWTON_TOL
    n_bumps: int = N_BUMPS
    seed: int = BUMP_SEED
    trust_radius: float = TRUST_RADIUS
    max_conformal_change: float = MAX_CONFORMAL_CHANGE
    gmres_rtol: float = GMRES_RTOL
    gmres_restart: int = GMRES_RESTART
    gmres_max_iter: int = GMRES_MAX_ITER
    ilu_drop_tol: float = ILU_DROP_TOL
    ilu_fill_factor: float = ILU_FILL_FACTOR

    @classmethod
    def from_dict(cls, values: Dict) -> "DeformConfig":
        known = {k: v for k, v in values.items() if k in cls.__dataclass_fields__}
        return cls(**known)


@dataclass(frozen=True)
class DeformSolution:
    """
    Solución (u, Y, h, w) del mapa T y datos deformados resultantes.

    ``h`` y ``w`` son las correcciones Σ c_k η_k y Σ c_k ξ_k, con soporte
    en los chichones de la base; ``residual`` es Φ̄(deformados) − objetivo.
    """

    base: InitialDataSet
    data: InitialDataSet
    u: Field
    Y: Field
    h: Field
    w: Field
    residual: Tuple[Field, Field]
    newton_iters: int
    coefficients: Tuple[float, ...]
    residual_history: Tuple[float, ...] = field(default_factory=tuple)

    @property
    def correction(self) -> SymPair:
        return SymPair(self.h, self.w)

    @property
    def residual_norm(self) -> float:
        mask = self.base.chart.annulus_mask(0)
        return max(self.residual[0].max_abs(mask), self.residual[1].max_abs(mask))

    def to_dict(self) -> dict:
        mask = self.base.chart.annulus_mask(0)
        return {
            'newton_iters': self.newton_iters,
            'residual_norm': self.residual_norm,
            'residual_history': list(self.residual_history),
            'coefficients': list(self.coefficients),
            'max_conformal_factor': self.u.max_abs(mask),
            'max_Y': self.Y.max_abs(mask)
        }


class DeformProblem:
    """
    Discretización de T sobre los nodos del anillo.

    El vector de incógnitas es (v, Z_1..Z_n, c): u e Y en los nodos del
    anillo y los N coeficientes de la base de chichones. El sistema lineal
    se completa con N filas que anulan la media de v ponderada por |η_k|,
    de modo que la matriz es cuadrada y los coeficientes absorben la parte
    del objetivo que el factor conforme no alcanza.

    Args:
        ids: Datos base (g, π) que fijan Φ̄
        target: Objetivo (primera ranura escalar, segunda ranura vectorial)
        background: (γ, τ) alrededor de los que se deforma; por defecto (g, π)
        config: Parámetros del solver
    """

    def __init__(self, ids: InitialDataSet, target: Tuple[Field, Field],
                 background: Optional[Tuple[Field, Field]] = None, config: Optional[DeformConfig] = None):
        self.ids = ids
        self.chart = ids.chart
        self.n = ids.n
        self.config = config or DeformConfig()
        self.exponent = 4.0 / (self.n - 2)
        self.gamma0, self.tau0 = (ids.g, ids.pi) if background is None else background
        self.target = target

        self.operator = ids.memo('flat_poisson_dirichlet', lambda: poisson_operator(self.chart, "dirichlet"))
        self.mask = self.operator.mask
        self.size = self.operator.size
        self.bumps = seeded_directions(self.chart, self.config.n_bumps, self.config.seed)
        self.eta = np.stack([bump.h.values for bump in self.bumps])
        self.xi = np.stack([bump.w.values for bump in self.bumps])
        tests = np.stack([bump.h.pointwise_norm()[self.mask] for bump in self.bumps])
        weights = tests.sum(axis=1, keepdims=True)
        empty = np.flatnonzero(weights[:, 0] <= 0.0)
        if empty.size:
            raise DomainError("insufficient-resolution",
                              f"los chichones {empty.tolist()} no tocan ningún nodo del anillo "
                              f"(h = {self.chart.spacing:.3f})")
        self.tests = tests / weights

        self.unknowns = (self.n + 1) * self.size + len(self.bumps)
        self._ilu = None

    # ------------------------------------------------------------------
    # Empaquetado
    # ------------------------------------------------------------------
    def scatter(self, packed: np.ndarray, components: int) -> np.ndarray:
        """Vector de nodos del anillo → array de malla (0 fuera)."""
        out = np.zeros((components,) + self.chart.shape)
        out[(slice(None),) + (self.mask,)] = packed.reshape(components, self.size)
        return out

    def split(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        m, n = self.size, self.n
        u = self.scatter(x[:m], 1)[0]
        Y = self.scatter(x[m:(n + 1) * m], n)
        return u, Y, x[(n + 1) * m:]

    def gather(self, first: np.ndarray, second: np.ndarray, border: np.ndarray) -> np.ndarray:
        return np.concatenate([first[self.mask], second[:, self.mask].ravel(), border])

    def combination(self, coefficients: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return (np.tensordot(coefficients, self.eta, axes=1),
                np.tensordot(coefficients, self.xi, axes=1))

    # ------------------------------------------------------------------
    # Mapa T y su linealización
    # ------------------------------------------------------------------
    def fields(self, x: np.ndarray) -> Tuple[Field, Field]:
        """(γ_x, τ_x) para el vector de incógnitas x."""
        u, Y, c = self.split(x)
        if np.max(np.abs(u)) > self.config.max_conformal_change:
            raise SolverError("newton-diverged", f"|u| alcanzó {np.max(np.abs(u)):.3f}")
        factor = 1.0 + u
        h, w = self.combination(c)
        gamma = factor ** self.exponent * self.gamma0.values + h
        tau = self.tau0.values + conformal_killing_op(self.gamma0, Field(self.chart, (0, 1), Y)).values + w
        return (Field(self.chart, (2, 0), gamma, symmetric=True),
                Field(self.chart, (0, 2), tau, symmetric=True))

    def residual(self, gamma: Field, tau: Field) -> Tuple[Field, Field]:
        first, second = constraint_map(self.ids, (gamma, tau), 'modified')
        return first - self.target[0], second - self.target[1]

    def jacobian(self, x: np.ndarray, gamma: Field, tau: Field) -> sp_la.LinearOperator:
        """DT en x como operador sin matriz, con las filas de orlado."""
        u, _, _ = self.split(x)
        context = LinearizationContext(self.ids.with_fields(gamma, tau))
        conformal = self.exponent * (1.0 + u) ** (self.exponent - 1.0)

        def matvec(dx: np.ndarray) -> np.ndarray:
            dx = np.ravel(dx)
            v, Z, dc = self.split(dx)
            dh, dw = self.combination(dc)
            delta_gamma = Field(self.chart, (2, 0), conformal * v * self.gamma0.values + dh, symmetric=True)
            delta_tau = conformal_killing_op(self.gamma0, Field(self.chart, (0, 1), Z)).values + dw
            first, second = context.linearize(SymPair(delta_gamma, Field(self.chart, (0, 2), delta_tau,
                                                                         symmetric=True)), 'plain')
            second = second + modified_correction(self.ids, delta_gamma)
            return self.gather(first, second, self.tests @ dx[:self.size])

        return sp_la.LinearOperator((self.unknowns, self.unknowns), matvec=matvec, dtype=float)

    def preconditioner(self) -> sp_la.LinearOperator:
        """
        Bloques diagonales del símbolo principal: −(n−1)s·Δ para v y Δ para
        cada Z_i, invertidos con un ILU del Laplaciano plano con Dirichlet.
        """
        if self._ilu is None:
            self._ilu = sp_la.spilu((-self.operator.matrix).tocsc(), drop_tol=self.config.ilu_drop_tol,
                                    fill_factor=self.config.ilu_fill_factor)
            logger.debug(f"ILU del Laplaciano plano construido ({self.size} incógnitas)")
        ilu = self._ilu
        m, n = self.size, self.n
        scale = (n - 1) * self.exponent

        def matvec(r: np.ndarray) -> np.ndarray:
            r = np.ravel(r)
            out = np.empty_like(r)
            out[:m] = ilu.solve(r[:m]) / scale
            for i in range(n):
                block = slice((i + 1) * m, (i + 2) * m)
                out[block] = -ilu.solve(r[block])
            out[(n + 1) * m:] = r[(n + 1) * m:]
            return out

        return sp_la.LinearOperator((self.unknowns, self.unknowns), matvec=matvec, dtype=float)

    def residual_norm(self, residual: Tuple[Field, Field]) -> float:
        return max(residual[0].max_abs(self.mask), residual[1].max_abs(self.mask))

    def linear_step(self, x: np.ndarray, gamma: Field, tau: Field,
                    residual: Tuple[Field, Field]) -> np.ndarray:
        rhs = -self.gather(residual[0].values, residual[1].values, np.zeros(len(self.bumps)))
        iterations: List[int] = []
        step, info = sp_la.gmres(self.jacobian(x, gamma, tau), rhs, rtol=self.config.gmres_rtol,
                                 restart=self.config.gmres_restart, maxiter=self.config.gmres_max_iter,
                                 M=self.preconditioner(), callback=lambda _: iterations.append(1),
                                 callback_type='pr_norm')
        if info != 0:
            logger.error(f"GMRES estancado (info={info}) tras {len(iterations)} iteraciones")
            raise SolverError("linear-solver-stalled", f"GMRES sin convergencia (info={info})",
                              iterations=len(iterations))
        logger.debug(f"GMRES convergió en {len(iterations)} iteraciones")
        return step

    # ------------------------------------------------------------------
    # Newton
    # ------------------------------------------------------------------
    def solve(self) -> DeformSolution:
        config = self.config
        scale = max(self.target[0].max_abs(self.mask), self.target[1].max_abs(self.mask))
        tolerance = config.tol * max(1.0, scale)
        x = np.zeros(self.unknowns)
        history: List[float] = []

        for iteration in range(1, config.max_iter + 1):
            gamma, tau = self.fields(x)
            residual = self.residual(gamma, tau)
            norm = self.residual_norm(residual)
            history.append(norm)
            logger.debug(f"Newton iteración {iteration}: |T − objetivo| = {norm:.3e}")
            if norm <= tolerance:
                return self._solution(x, gamma, tau, residual, iteration, history)
            if len(history) > 1 and norm > GROWTH_FACTOR * history[-2]:
                raise SolverError("newton-diverged", f"el residuo crece: {history[-2]:.3e} → {norm:.3e}",
                                  iterations=iteration)
            x = x + self.linear_step(x, gamma, tau, residual)

        raise SolverError("newton-diverged", f"sin convergencia en {config.max_iter} iteraciones "
                                             f"(residuo {history[-1]:.3e})", iterations=config.max_iter)

    def _solution(self, x: np.ndarray, gamma: Field, tau: Field, residual: Tuple[Field, Field],
                  iterations: int, history: List[float]) -> DeformSolution:
        u, Y, c = self.split(x)
        h, w = self.combination(c)
        data = self.ids.with_fields(gamma, tau, deformed=True)
        logger.info(f"Deformación convergida en {iterations} iteraciones, residuo {history[-1]:.3e}")
        return DeformSolution(
            base=self.ids,
            data=data,
            u=Field(self.chart, (0, 0), u),
            Y=Field(self.chart, (0, 1), Y),
            h=Field(self.chart, (2, 0), h, symmetric=True),
            w=Field(self.chart, (0, 2), w, symmetric=True),
            residual=residual,
            newton_iters=iterations,
            coefficients=tuple(float(value) for value in c),
            residual_history=tuple(history)
        )


def trust_distance(ids: InitialDataSet, target: Tuple[Field, Field]) -> float:
    """sup |x|^{2+q} |objetivo − Φ̄(g, π)| en el anillo."""
    chart = ids.chart
    first, second = constraint_map(ids, None, 'modified')
    rate = 2.0 + ids.type_params.q
    return max(weighted_sup(target[0].values - first.values, chart, rate, 0),
               weighted_sup(target[1].values - second.values, chart, rate, 1))


def deform_to_target(ids: InitialDataSet, target: Tuple[Field, Field],
                     config: Optional[DeformConfig] = None,
                     background: Optional[Tuple[Field, Field]] = None) -> DeformSolution:
    """
    Resolver T(u, Y, h, w) = objetivo por Newton.

    Args:
        ids: Datos base (g, π)
        target: (primera ranura, segunda ranura) de Φ̄ deseadas
        config: Parámetros del solver
        background: (γ, τ) alrededor de los que se deforma; por defecto (g, π)

    Returns:
        DeformSolution con los datos deformados y su residuo
    """
    config = config or DeformConfig()
    if target[0].chart != ids.chart or target[1].chart != ids.chart:
        raise DomainError("invalid-radii", "el objetivo debe vivir en la carta de los datos")
    grid = ids.on_grid()
    distance = trust_distance(grid, target)
    if distance > config.trust_radius:
        raise SolverError("target-too-large",
                          f"distancia ponderada al objetivo {distance:.3e} > radio de confianza {config.trust_radius}")
    logger.info(f"Deformando hacia el objetivo (distancia ponderada {distance:.3e})")
    return DeformProblem(grid, target, background, config).solve()


@dataclass(frozen=True)
class StrictDecReport:
    """Margen de la DEC estricta tras la deformación."""

    lam: float
    margin: Field
    margin_verdict: DecVerdict
    consequence_verdict: DecVerdict
    degenerate: bool
    solution: DeformSolution

    def to_dict(self) -> dict:
        return {
            'lambda': self.lam,
            'degenerate': self.degenerate,
            'margin': self.margin_verdict.to_dict(),
            'consequence': self.consequence_verdict.to_dict(),
            'solution': self.solution.to_dict()
        }


def strict_dec_deform(ids: InitialDataSet, lam: float, bump: Field,
                      config: Optional[DeformConfig] = None) -> Tuple[InitialDataSet, StrictDecReport]:
    """
    Deformar hacia Φ̄(g, π) + (2λ(μ + φ), 0) y comprobar la DEC estricta.

    Args:
        ids: Datos base
        lam: λ ≥ 0
        bump: Función φ > 0 en el anillo
        config: Parámetros del solver

    Returns:
        (datos deformados, StrictDecReport)
        El margen es μ̄ − (1+λ)|J̄|_ḡ − (1+λ)(μ − |J|_g) y la consecuencia
        μ̄ − |J̄|_ḡ − λ|J̄|_ḡ.
    """
    if lam < 0:
        raise DomainError("invalid-mode", f"λ debe ser no negativo, λ={lam}")
    if bump.rank != (0, 0) or bump.chart != ids.chart:
        raise DomainError("invalid-bump", "φ debe ser un escalar en la carta de los datos")
    mask = ids.chart.annulus_mask(0)
    values = bump.values
    if np.any(values[mask] < 0) or not np.any(values[mask] > 0):
        raise DomainError("invalid-bump", "φ debe ser no negativa y no idénticamente nula en el anillo")

    grid = ids.on_grid()
    base = mass_current(grid)
    first, second = constraint_map(grid, None, 'modified')
    target = (first + Field(ids.chart, (0, 0), 2.0 * lam * (base.mu.values + values)), second)
    solution = deform_to_target(grid, target, config)
    deformed = solution.data

    densities = mass_current(deformed)
    J_bar = current_norm(deformed.g, densities.J.values)
    J = current_norm(grid.g, base.J.values)
    margin = densities.mu.values - (1.0 + lam) * J_bar - (1.0 + lam) * (base.mu.values - J)
    consequence = densities.mu.values - J_bar - lam * J_bar

    margin_field = Field(ids.chart, (0, 0), margin)
    report = StrictDecReport(
        lam=float(lam),
        margin=margin_field,
        margin_verdict=dec_verdict(margin_field),
        consequence_verdict=dec_verdict(Field(ids.chart, (0, 0), consequence)),
        degenerate=lam == 0,
        solution=solution
    )
    if report.degenerate:
        logger.info("λ = 0: deformación identidad, la desigualdad estricta degenera")
    elif not report.margin_verdict.passed:
        logger.warning(f"margin-violated: margen mínimo {report.margin_verdict.min_margin:.3e}")
    return deformed, report


def deformation_norm(solution: DeformSolution, p: Optional[float] = None) -> float:
    """‖(ḡ − g, π̄ − π)‖ en W^{2,p}_{−q} × W^{1,p}_{−1−q} discreta."""
    base, data = solution.base, solution.data
    weight = base.type_params
    p = weight.p if p is None else p
    dg = data.g.on_grid() - base.g.on_grid()
    dpi = data.pi.on_grid() - base.pi.on_grid()
    return (weighted_norm(dg, DecayWeight(q=weight.q, k=2, p=p), 'sobolev')
            + weighted_norm(dpi, DecayWeight(q=weight.q + 1.0, k=1, p=p), 'sobolev'))


def verify_deform_size(solution: DeformSolution, lam: float) -> float:
    """
    Cociente ‖deformación‖ / λ, la constante C₁ empírica.

    Args:
        solution: Solución convergida
        lam: λ usado para construir el objetivo

    Returns:
        Cociente (0 para la solución nula)
    """
    size = deformation_norm(solution)
    if size == 0.0:
        return 0.0
    if lam == 0:
        return float('inf')
    ratio = size / float(lam)
    logger.info(f"Tamaño de la deformación: {size:.3e}, cociente {ratio:.3e}")
    return ratio
