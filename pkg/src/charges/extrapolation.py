"""
Extrapolación de flujos a radio infinito.

Los flujos de superficie se evalúan en varios radios de una carta
truncada y se ajustan por mínimos cuadrados a c₀ + Σ_k c_k r^{−k·s}.
"""

import logging
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np

from utils.config import EXTRAPOLATION_TERMS, MIN_RADII
from utils.errors import FitError

logger = logging.getLogger(__name__)


class FluxEstimate(NamedTuple):
    """Límite extrapolado de un flujo y su diagnóstico."""

    limit: float
    error: float
    radii: Tuple[float, ...]
    values: Tuple[float, ...]


def _fit_limit(radii: np.ndarray, values: np.ndarray, rate: float, terms: int) -> Tuple[float, float]:
    basis = np.stack([radii ** (-k * rate) for k in range(terms + 1)], axis=1)
    coefficients, _, rank, _ = np.linalg.lstsq(basis, values, rcond=None)
    if rank < terms + 1:
        raise FitError("degenerate-fit", f"matriz de ajuste de rango {rank} < {terms + 1}")
    deviation = float(np.max(np.abs(basis @ coefficients - values)))
    return float(coefficients[0]), deviation


def extrapolate_flux(values: Sequence[Tuple[float, float]], model_rate: Optional[float] = None,
                     terms: int = EXTRAPOLATION_TERMS) -> Tuple[float, float]:
    """
    Extrapolar una serie (radio, flujo) a r → ∞.

    Se ajusta c₀ + c₁r^{−s} (+ c₂r^{−2s} si hay muestras de sobra, hasta
    ``terms`` correcciones). El error estimado es la desviación máxima de un
    ajuste que deja al menos un grado de libertad libre (con 3 radios, una
    sola corrección) más la diferencia con el límite obtenido sin el radio
    menor.

    Args:
        values: Pares (radio, flujo)
        model_rate: Exponente s del modelo; 1 por defecto
        terms: Máximo de correcciones potenciales

    Returns:
        (límite, error estimado ≥ 0)
    """
    samples = sorted((float(r), float(v)) for r, v in values)
    if len(samples) < MIN_RADII:
        raise FitError("too-few-radii", f"se requieren al menos {MIN_RADII} radios, recibidos {len(samples)}")
    radii = np.array([r for r, _ in samples])
    flux = np.array([v for _, v in samples])
    if np.ptp(radii) == 0:
        raise FitError("degenerate-fit", "todos los radios coinciden")
    rate = 1.0 if model_rate is None else float(model_rate)

    if np.ptp(flux) == 0:
        return float(flux[0]), 0.0

    k = min(terms, len(radii) - 1)
    limit, _ = _fit_limit(radii, flux, rate, k)
    _, deviation = _fit_limit(radii, flux, rate, max(1, min(terms, len(radii) - 2)))
    reduced, _ = _fit_limit(radii[1:], flux[1:], rate, min(k, len(radii) - 2))
    error = deviation + abs(limit - reduced)
    logger.debug(f"Extrapolación con s={rate}, {k} términos: {limit:.6e} ± {error:.2e}")
    return limit, error


def estimate_flux(radii: Sequence[float], values: Sequence[float],
                  model_rate: Optional[float] = None) -> FluxEstimate:
    """Empaquetar una serie de flujos con su límite extrapolado."""
    limit, error = extrapolate_flux(list(zip(radii, values)), model_rate)
    return FluxEstimate(limit, error, tuple(float(r) for r in radii), tuple(float(v) for v in values))
