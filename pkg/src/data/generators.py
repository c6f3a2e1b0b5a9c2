"""
Generadores de familias exactas de datos iniciales con backend analítico.

Las familias (euclídea, Schwarzschild isótropa, Bowen–York, conformemente
plana y perturbada) sirven de oráculos: sus propiedades anunciadas se
recalculan siempre con los operadores del kit.

Autor: [Tu Nombre]
Fecha: [Fecha]
"""

import logging
from itertools import product
from typing import Optional, Sequence

import numpy as np
from scipy.stats import special_ortho_group

from constraints.data_set import InitialDataSet
from data.manifest import DatasetManifest
from fields.analytic import AnalyticSource
from fields.chart import Chart, DecayWeight
from fields.field import Field
from fields.profiles import radial_profile, tensor_profile
from linearized.pairs import LapseShiftPair, bump_direction, check_bump_width, default_bump_width, support_band
from utils.errors import DatasetError, DomainError

logger = logging.getLogger(__name__)

_EPS = 1e-12


def _conformal_metric(chart: Chart, u_profile) -> Field:
    """g = u^{4/(n−2)} δ para un factor radial u(r) dado con sus dos derivadas."""
    n = chart.n
    s = 4.0 / (n - 2)

    def profile(r):
        u, du, ddu = u_profile(r)
        return u ** s, s * u ** (s - 1) * du, s * (s - 1) * u ** (s - 2) * du ** 2 + s * u ** (s - 1) * ddu

    return Field.from_source(chart, tensor_profile(radial_profile(profile, n=n), np.eye(n)), (2, 0),
                             symmetric=True)


def euclidean(chart: Chart, decay: Optional[DecayWeight] = None) -> InitialDataSet:
    """(δ, 0)."""
    metadata = {'family': 'euclidean'}
    return _dataset(chart, Field.euclidean(chart), Field.zeros(chart, (0, 2), symmetric=True), decay, metadata)


def schwarzschild(chart: Chart, m: float = 1.0, decay: Optional[DecayWeight] = None) -> InitialDataSet:
    """
    Schwarzschild isótropa g = (1 + m/(2|x|^{n−2}))^{4/(n−2)} δ, π = 0.

    Args:
        chart: Carta
        m: Masa (> 0); E = m
        decay: Tipo de decaimiento
    """
    if not m > 0:
        raise DatasetError("invalid-parameters", f"schwarzschild requiere m > 0, recibido {m}")
    n = chart.n

    def u_profile(r):
        a = m / (2.0 * r ** (n - 2))
        return 1.0 + a, -(n - 2) * a / r, (n - 2) * (n - 1) * a / r ** 2

    g = _conformal_metric(chart, u_profile)
    return _dataset(chart, g, Field.zeros(chart, (0, 2), symmetric=True), decay,
                    {'family': 'schwarzschild', 'm': float(m)})


def static_lapse(chart: Chart, m: float = 1.0) -> LapseShiftPair:
    """
    Lapso estático de Schwarzschild f = (1 − a)/(1 + a), a = m/(2|x|^{n−2}), con X = 0.

    Returns:
        LapseShiftPair con asíntota (1, 0)
    """
    n = chart.n

    def profile(r):
        a = m / (2.0 * r ** (n - 2))
        da = -(n - 2) * a / r
        dda = (n - 2) * (n - 1) * a / r ** 2
        return (2.0 / (1.0 + a) - 1.0, -2.0 * da / (1.0 + a) ** 2,
                -2.0 * dda / (1.0 + a) ** 2 + 4.0 * da ** 2 / (1.0 + a) ** 3)

    f = Field.from_source(chart, radial_profile(profile, n=n))
    return LapseShiftPair(f, Field.zeros(chart, (0, 1)), (1.0, (0.0,) * n))


def _bowen_york_source(P: np.ndarray) -> AnalyticSource:
    """π^{ij} = (3/2)[(P^ix^j + P^jx^i)/r³ − δ^{ij}(P·x)/r³ + x^ix^j(P·x)/r⁵], con primeras derivadas."""
    n = len(P)
    eye = np.eye(n)

    def common(x):
        tail = (1,) * (x.ndim - 1)
        r = np.sqrt(np.sum(x ** 2, axis=0))
        r = np.where(r > _EPS, r, _EPS)
        Pc = P.reshape((n,) + tail)
        Px = np.einsum('i,i...->...', P, x)
        outer_px = Pc[:, None] * x[None, :] + x[:, None] * Pc[None, :]
        xx = x[:, None] * x[None, :]
        return r, Pc, Px, outer_px, xx, eye.reshape((n, n) + tail)

    def func(x):
        r, _, Px, outer_px, xx, delta = common(x)
        return 1.5 * (outer_px / r ** 3 - delta * Px / r ** 3 + xx * Px / r ** 5)

    def jet(x, mi):
        if len(mi) != 1:
            return None
        k = mi[0]
        r, Pc, Px, outer_px, xx, delta = common(x)
        xk = x[k]
        ek = eye[k].reshape((n,) + (1,) * (x.ndim - 1))
        dA = (Pc[:, None] * ek[None, :] + ek[:, None] * Pc[None, :]) / r ** 3 - 3.0 * outer_px * xk / r ** 5
        dB = delta * (P[k] / r ** 3 - 3.0 * Px * xk / r ** 5)
        dC = ((ek[:, None] * x[None, :] + x[:, None] * ek[None, :]) * Px / r ** 5
              + xx * P[k] / r ** 5 - 5.0 * xx * Px * xk / r ** 7)
        return 1.5 * (dA - dB + dC)

    return AnalyticSource(func, jet)


def bowen_york(chart: Chart, P: Sequence[float] = (0.0, 0.0, 0.5),
               decay: Optional[DecayWeight] = None) -> InitialDataSet:
    """
    Datos de Bowen–York sin espín sobre el espacio plano (n = 3).

    Args:
        chart: Carta con n = 3
        P: Momento lineal P*
        decay: Tipo de decaimiento
    """
    if chart.n != 3:
        raise DatasetError("unsupported-dimension-for-family", f"bowen_york solo existe para n = 3, n={chart.n}")
    P = np.asarray(P, dtype=float)
    if P.shape != (3,) or not np.all(np.isfinite(P)):
        raise DatasetError("invalid-parameters", f"P* debe ser un vector finito de 3 componentes: {P}")
    pi = Field.from_source(chart, _bowen_york_source(P), (0, 2), symmetric=True)
    return _dataset(chart, Field.euclidean(chart), pi, decay, {'family': 'bowen_york', 'P': P.tolist()})


def conformal(chart: Chart, amplitude: float = 1.0, power: float = 2.0,
              decay: Optional[DecayWeight] = None) -> InitialDataSet:
    """
    g = u^{4/(n−2)} δ con u = 1 + A|x|^{−k}, π = 0.

    Con A = 1, k = 2, n = 3 la curvatura escalar en |x| = 1 vale −0.5.
    """
    if amplitude < 0 or power <= 0:
        raise DatasetError("invalid-parameters", f"se requiere A ≥ 0 y k > 0, recibido A={amplitude}, k={power}")
    k = float(power)

    def u_profile(r):
        a = amplitude * r ** (-k)
        return 1.0 + a, -k * a / r, k * (k + 1) * a / r ** 2

    g = _conformal_metric(chart, u_profile)
    return _dataset(chart, g, Field.zeros(chart, (0, 2), symmetric=True), decay,
                    {'family': 'conformal', 'amplitude': float(amplitude), 'power': k})


def perturbed(base: InitialDataSet, seed: int = 0, epsilon: float = 1e-2,
              support: Optional[Sequence[float]] = None) -> InitialDataSet:
    """
    Base más un chichón sembrado de soporte compacto en (g, π).

    Args:
        base: Datos base
        seed: Semilla
        epsilon: Amplitud de la perturbación
        support: (radio del centro, radio del chichón); por defecto el centro de la banda
            segura y ``default_bump_width``

    Returns:
        InitialDataSet analítico
    """
    chart = base.chart
    inner, outer = support_band(chart)
    if support is None:
        width = default_bump_width(chart)
        center_radius = 0.5 * (inner + outer)
    else:
        center_radius, width = (float(v) for v in support)
    check_bump_width(chart, width)
    if center_radius - width < inner or center_radius + width > outer:
        raise DatasetError("invalid-parameters",
                           f"soporte ({center_radius}, {width}) fuera de la banda [{inner:.3f}, {outer:.3f}]")

    rng = np.random.default_rng(seed)
    n = chart.n
    unit = rng.standard_normal(n)
    unit /= np.linalg.norm(unit)
    A = rng.standard_normal((n, n))
    B = rng.standard_normal((n, n))
    direction = bump_direction(chart, center_radius * unit, width, 0.5 * (A + A.T), 0.5 * (B + B.T))

    metadata = dict(base.metadata)
    metadata.update({'family': 'perturbed', 'base': base.metadata.get('family', 'external'), 'seed': int(seed),
                     'epsilon': float(epsilon), 'support': [center_radius, width]})
    logger.debug(f"Perturbación sembrada (semilla {seed}, amplitud {epsilon}) en |x| ≈ {center_radius:.3f}")
    return InitialDataSet(chart, base.g + direction.h * epsilon, base.pi + direction.w * epsilon,
                          base.type_params, metadata)


def _rotate_components(values: np.ndarray, R: np.ndarray, valence: int) -> np.ndarray:
    for axis in range(valence):
        values = np.moveaxis(np.tensordot(R, values, axes=([1], [axis])), 0, axis)
    return values


def _rotated_source(source: AnalyticSource, R: np.ndarray, valence: int) -> AnalyticSource:
    """T'(x) = R·T(Rᵀx) en cada índice, con jets por la regla de la cadena."""
    n = R.shape[0]

    def pull(x):
        return np.einsum('ab,a...->b...', R, x)

    def func(x):
        return _rotate_components(source.evaluate(pull(x)), R, valence)

    def jet(x, mi):
        y = pull(x)
        total = None
        for axes in product(range(n), repeat=len(mi)):
            coefficient = np.prod([R[k, c] for k, c in zip(mi, axes)])
            if coefficient == 0.0:
                continue
            part = source.evaluate(y, axes)
            if part is None:
                return None
            total = coefficient * part if total is None else total + coefficient * part
        if total is None:
            total = np.zeros_like(source.evaluate(y))
        return _rotate_components(total, R, valence)

    return AnalyticSource(func, jet)


def random_rotation(n: int, seed: int) -> np.ndarray:
    return special_ortho_group.rvs(n, random_state=seed)


def rotate_dataset(ids: InitialDataSet, rotation: Optional[np.ndarray] = None, seed: int = 0) -> InitialDataSet:
    """
    Rotación rígida de datos analíticos: g'(x) = R g(Rᵀx) Rᵀ y lo mismo para π.

    Args:
        ids: Datos con backend analítico
        rotation: Matriz ortogonal; por defecto una rotación aleatoria sembrada
        seed: Semilla de la rotación aleatoria

    Returns:
        Datos rotados (la energía se conserva y P' = R·P)
    """
    if ids.g.source is None or ids.pi.source is None:
        raise DatasetError("invalid-parameters", "solo se pueden rotar datos con backend analítico")
    n = ids.n
    R = random_rotation(n, seed) if rotation is None else np.asarray(rotation, dtype=float)
    if R.shape != (n, n) or not np.allclose(R @ R.T, np.eye(n), atol=1e-12):
        raise DatasetError("invalid-parameters", "la matriz de rotación debe ser ortogonal n×n")
    g = Field.from_source(ids.chart, _rotated_source(ids.g.source, R, 2), (2, 0), symmetric=True)
    pi = Field.from_source(ids.chart, _rotated_source(ids.pi.source, R, 2), (0, 2), symmetric=True)
    metadata = dict(ids.metadata)
    metadata['rotation'] = R.tolist()
    return InitialDataSet(ids.chart, g, pi, ids.type_params, metadata)


def gaussian_bump(chart: Chart, width: float, amplitude: float = 1.0) -> Field:
    """φ = A·exp(−|x|²/(2σ²)) > 0, decaimiento más rápido que cualquier potencia."""
    sigma_sq = float(width) ** 2

    def profile(r):
        phi = amplitude * np.exp(-r ** 2 / (2.0 * sigma_sq))
        return phi, -r * phi / sigma_sq, (r ** 2 / sigma_sq - 1.0) * phi / sigma_sq

    return Field.from_source(chart, radial_profile(profile, n=chart.n))


def _dataset(chart: Chart, g: Field, pi: Field, decay: Optional[DecayWeight], metadata: dict) -> InitialDataSet:
    if decay is None:
        return InitialDataSet(chart, g, pi, metadata=metadata)
    return InitialDataSet(chart, g, pi, decay, metadata)


def generate(manifest: DatasetManifest) -> InitialDataSet:
    """
    Construir el conjunto de datos descrito por un manifiesto.

    Args:
        manifest: Manifiesto validado (familia distinta de 'external')

    Returns:
        InitialDataSet con backend analítico
    """
    manifest.validate()
    if manifest.family == "external":
        raise DatasetError("invalid-parameters", "los datos externos se cargan con load(), no se generan")
    try:
        chart = manifest.make_chart()
    except DomainError as exc:
        raise DatasetError("invalid-parameters", str(exc)) from exc
    decay = manifest.decay_weight()
    params = manifest.parameters

    def build(family: str) -> InitialDataSet:
        if family == "euclidean":
            return euclidean(chart, decay)
        if family == "schwarzschild":
            return schwarzschild(chart, float(params.get('m', 1.0)), decay)
        if family == "bowen_york":
            return bowen_york(chart, params.get('P', (0.0, 0.0, 0.5)), decay)
        if family == "conformal":
            return conformal(chart, float(params.get('amplitude', 1.0)), float(params.get('power', 2.0)), decay)
        raise DatasetError("invalid-parameters", f"familia desconocida: {family}")

    if manifest.family == "perturbed":
        ids = perturbed(build(params.get('base', 'euclidean')), int(params.get('seed', 0)),
                        float(params.get('epsilon', 1e-2)), params.get('support'))
    else:
        ids = build(manifest.family)

    if params.get('rotation_seed') is not None:
        ids = rotate_dataset(ids, seed=int(params['rotation_seed']))
    logger.info(f"Datos generados: familia {manifest.family}, parámetros {params}, malla {chart.shape}")
    return ids
