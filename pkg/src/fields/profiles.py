"""
Perfiles suaves: escalones C^∞, rampas radiales y chichones de soporte
compacto, todos con derivadas exactas hasta segundo orden.
"""

import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from fields.analytic import AnalyticSource

logger = logging.getLogger(__name__)

_EPS = 1e-12


def smooth_step(t: np.ndarray, order: int = 0) -> np.ndarray:
    """
    Escalón C^∞ S(t) = A/(A + B), A = e^{−1/t}, B = e^{−1/(1−t)}; S = 0
    para t ≤ 0 y S = 1 para t ≥ 1.

    Args:
        t: Argumento
        order: 0, 1 o 2 (derivada pedida)

    Returns:
        S^{(order)}(t)
    """
    t = np.asarray(t, dtype=float)
    inside = (t > 0) & (t < 1)
    s = np.clip(t, _EPS, 1 - _EPS)
    A = np.exp(-1.0 / s)
    B = np.exp(-1.0 / (1.0 - s))
    D = A + B
    if order == 0:
        return np.where(t >= 1, 1.0, np.where(inside, A / D, 0.0))

    c = 1.0 / s ** 2 + 1.0 / (1.0 - s) ** 2
    N = A * B * c
    first = N / D ** 2
    if order == 1:
        return np.where(inside, first, 0.0)
    if order == 2:
        dc = -2.0 / s ** 3 + 2.0 / (1.0 - s) ** 3
        dN = A * B * ((1.0 / s ** 2 - 1.0 / (1.0 - s) ** 2) * c + dc)
        dD = A / s ** 2 - B / (1.0 - s) ** 2
        second = dN / D ** 2 - 2.0 * N * dD / D ** 3
        return np.where(inside, second, 0.0)
    raise ValueError(f"orden de derivada no soportado: {order}")


def _radial_jet(x: np.ndarray, center: np.ndarray, values: Tuple[np.ndarray, ...],
                mi: Tuple[int, ...]) -> Optional[np.ndarray]:
    """
    Derivadas cartesianas de φ(|x − c|) a partir de (φ, φ', φ'', φ'/r).

    φ'/r se pasa aparte para que el centro del perfil no pierda el término δ_ab/r.
    """
    y = x - center.reshape((-1,) + (1,) * (x.ndim - 1))
    r = np.sqrt(np.sum(y ** 2, axis=0))
    r = np.where(r > _EPS, r, _EPS)
    _, d1, d2, d1_over_r = values
    if len(mi) == 1:
        return d1_over_r * y[mi[0]]
    if len(mi) == 2:
        a, b = mi
        delta = 1.0 if a == b else 0.0
        return (d2 - d1_over_r) * y[a] * y[b] / r ** 2 + d1_over_r * delta
    return None


def radial_ramp(r0: float, r1: float, center: Optional[Sequence[float]] = None,
                n: int = 3) -> AnalyticSource:
    """
    Rampa radial suave: 0 para |x| ≤ r0 y exactamente 1 para |x| ≥ r1.

    Args:
        r0: Radio donde empieza la rampa
        r1: Radio donde la rampa alcanza 1
        center: Centro (origen por defecto)
        n: Dimensión

    Returns:
        Fuente escalar con jets hasta segundo orden
    """
    c = np.zeros(n) if center is None else np.asarray(center, dtype=float)
    width = r1 - r0

    def profile(x):
        y = x - c.reshape((-1,) + (1,) * (x.ndim - 1))
        r = np.sqrt(np.sum(y ** 2, axis=0))
        t = (r - r0) / width
        d1 = smooth_step(t, 1) / width
        return smooth_step(t), d1, smooth_step(t, 2) / width ** 2, d1 / np.where(r > _EPS, r, _EPS)

    def func(x):
        return profile(x)[0]

    def jet(x, mi):
        return _radial_jet(x, c, profile(x), mi)

    return AnalyticSource(func, jet)


def compact_bump(center: Sequence[float], width: float) -> AnalyticSource:
    """
    Chichón φ(x) = exp(1 − 1/(1 − |x − c|²/s²)) con soporte en la bola B(c, s).

    Args:
        center: Centro de la bola
        width: Radio s del soporte

    Returns:
        Fuente escalar con jets hasta segundo orden
    """
    c = np.asarray(center, dtype=float)
    s = float(width)

    def profile(x):
        y = x - c.reshape((-1,) + (1,) * (x.ndim - 1))
        rho = np.sqrt(np.sum(y ** 2, axis=0)) / s
        inside = rho < 1
        u = np.where(inside, 1.0 - rho ** 2, 1.0)
        phi = np.where(inside, np.exp(1.0 - 1.0 / u), 0.0)
        # φ como función de ρ: φ' = −2ρφ/u², φ'' = φ(4ρ²/u⁴ − 2/u² − 8ρ²/u³)
        d_rho = -2.0 * rho * phi / u ** 2
        dd_rho = phi * (4.0 * rho ** 2 / u ** 4 - 2.0 / u ** 2 - 8.0 * rho ** 2 / u ** 3)
        d1_over_r = np.where(inside, -2.0 * phi / (s ** 2 * u ** 2), 0.0)
        return phi, np.where(inside, d_rho / s, 0.0), np.where(inside, dd_rho / s ** 2, 0.0), d1_over_r

    def func(x):
        return profile(x)[0]

    def jet(x, mi):
        return _radial_jet(x, c, profile(x), mi)

    return AnalyticSource(func, jet)


def tensor_profile(profile: AnalyticSource, tensor: np.ndarray) -> AnalyticSource:
    """Fuente T·φ(x) para un tensor constante T."""
    T = np.asarray(tensor, dtype=float)

    def expand(values):
        return T.reshape(T.shape + (1,) * np.ndim(values)) * values

    def func(x):
        return expand(profile.evaluate(x))

    def jet(x, mi):
        part = profile.evaluate(x, mi)
        return None if part is None else expand(part)

    return AnalyticSource(func, jet)


def radial_profile(profile, center: Optional[Sequence[float]] = None, n: int = 3) -> AnalyticSource:
    """
    Fuente escalar φ(|x − c|) a partir de una función r -> (φ, φ', φ'').

    Args:
        profile: Función radial que devuelve valor y dos derivadas
        center: Centro (origen por defecto)
        n: Dimensión

    Returns:
        Fuente escalar con jets hasta segundo orden
    """
    c = np.zeros(n) if center is None else np.asarray(center, dtype=float)

    def values(x):
        y = x - c.reshape((-1,) + (1,) * (x.ndim - 1))
        r = np.sqrt(np.sum(y ** 2, axis=0))
        r = np.where(r > _EPS, r, _EPS)
        phi, d1, d2 = profile(r)
        return phi, d1, d2, d1 / r

    def func(x):
        return values(x)[0]

    def jet(x, mi):
        return _radial_jet(x, c, values(x), mi)

    return AnalyticSource(func, jet)
