"""
Ajuste de la expansión asintótica de un par (f, X), relaciones entre sus
coeficientes y las cargas ADM, y clasificación de KIDs asintóticos.

Autor: [Tu Nombre]
Fecha: [Fecha]
"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from asymptotics.poisson import AuxPotentials, fit_radial, fit_window, q1_of
from charges.adm import ADMCharges
from constraints.data_set import InitialDataSet
from fields.field import Field
from fields.norms import weighted_sup
from fields.quadrature import integrate_on_sphere, unit_sphere_area
from linearized.pairs import LapseShiftPair

logger = logging.getLogger(__name__)

# Órdenes del resto absorbidos en el ajuste: r^{2−n−k·q₁}, k = 1..REMAINDER_TERMS
REMAINDER_TERMS = 2


@dataclass(frozen=True)
class ExpansionFit:
    """
    Coeficientes de f = a + A|x|^{2−n} + … y X^i = b_i + B_i|x|^{2−n} + ….

    ``residual_norm`` es sup |x|^{n−2+q₁}·|resto| en la ventana.
    """

    a: float
    b: Tuple[float, ...]
    A: float
    B: Tuple[float, ...]
    residual_norm: float
    radii_window: Tuple[float, float]

    def to_dict(self) -> dict:
        return {
            'a': self.a,
            'b': list(self.b),
            'A': self.A,
            'B': list(self.B),
            'residual_norm': self.residual_norm,
            'radii_window': list(self.radii_window)
        }


def known_terms(aux: AuxPotentials, a: float, b: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Términos conocidos de la expansión en la malla.

    Returns:
        ((1/(2(n−1))) b_kφ_{,k}, (2/(n−1)) aφ_{,i} + b_kV_{i,k})
    """
    n = aux.phi.n
    b = np.asarray(b, dtype=float)
    d_phi = aux.phi.partials()
    f_known = np.einsum('k,k...->...', b, d_phi) / (2.0 * (n - 1))
    X_known = 2.0 / (n - 1) * a * d_phi + np.einsum('k,ik...->i...', b, aux.V.partials())
    return f_known, X_known


def _sphere_means(func, n: int, radii: Sequence[float]) -> np.ndarray:
    """Medias esféricas de una función de puntos."""
    return np.array([integrate_on_sphere(func, n, r)[0] / (unit_sphere_area(n) * r ** (n - 1)) for r in radii])


def fit_expansion(pair: LapseShiftPair, ids: InitialDataSet, aux: AuxPotentials,
                  window: Optional[Tuple[float, float]] = None, q1: Optional[float] = None) -> ExpansionFit:
    """
    Ajustar (a, b, A, B) por mínimos cuadrados sobre medias esféricas.

    Las medias de (f, X) usan la fuente analítica cuando existe; los
    términos conocidos de φ y V se interpolan desde la malla.

    Args:
        pair: Par (f, X)
        ids: Datos iniciales
        aux: Potenciales auxiliares de ``ids``
        window: Ventana radial (r_lo, r_hi)
        q1: Tasa del resto; por defecto la del tipo de decaimiento de ``ids``

    Returns:
        ExpansionFit
    """
    chart = ids.chart
    n = ids.n
    q1 = q1_of(ids) if q1 is None else float(q1)
    radii = fit_window(chart, window)
    exponents = [0.0, 2.0 - n] + [2.0 - n - k * q1 for k in range(1, REMAINDER_TERMS + 1)]

    f_means = _sphere_means(pair.f.at, n, radii)
    X_means = np.stack([_sphere_means(lambda x, i=i: pair.X.at(x)[i], n, radii) for i in range(n)])
    if pair.asymptote is None:
        a = float(fit_radial(radii, f_means, exponents[:2])[0])
        b = np.array([fit_radial(radii, X_means[i], exponents[:2])[0] for i in range(n)])
        logger.debug(f"Asíntota preliminar estimada: a={a:.6f}, b={b}")
    else:
        a, b = pair.asymptote[0], np.asarray(pair.asymptote[1])

    f_known, X_known = known_terms(aux, a, b)
    f_known_field = Field(chart, (0, 0), f_known)
    X_known_field = Field(chart, (0, 1), X_known)
    f_coeffs = fit_radial(radii, f_means - _sphere_means(f_known_field.at, n, radii), exponents)
    X_coeffs = np.stack([
        fit_radial(radii, X_means[i] - _sphere_means(lambda x, i=i: X_known_field.at(x)[i], n, radii), exponents)
        for i in range(n)
    ])

    f, X = pair.f.values, pair.X.values
    r = chart.radius
    safe_r = np.where(r > 0, r, 1.0)
    f_rest = f - f_known - f_coeffs[0] - f_coeffs[1] * safe_r ** (2 - n)
    X_rest = X - X_known - _model(X_coeffs, safe_r, n)
    mask = chart.annulus_mask(2, r_min=radii[0], r_max=radii[-1])
    residual = max(weighted_sup(f_rest, chart, n - 2 + q1, 0, mask),
                   weighted_sup(X_rest, chart, n - 2 + q1, 1, mask))

    fit = ExpansionFit(float(f_coeffs[0]), tuple(float(c) for c in X_coeffs[:, 0]), float(f_coeffs[1]),
                       tuple(float(c) for c in X_coeffs[:, 1]), residual, (radii[0], radii[-1]))
    logger.info(f"Expansión ajustada: a={fit.a:.6f}, A={fit.A:.6f}, b={fit.b}, B={fit.B}")
    return fit


def _model(coefficients: np.ndarray, radius: np.ndarray, n: int) -> np.ndarray:
    """b_i + B_i r^{2−n} por componente."""
    shape = (-1,) + (1,) * radius.ndim
    return coefficients[:, 0].reshape(shape) + coefficients[:, 1].reshape(shape) * radius ** (2 - n)


@dataclass(frozen=True)
class ExpansionRelations:
    """Defectos de las relaciones entre (a, b, A, B) y (E, P)."""

    defects: Dict[str, float]
    tolerance: float

    @property
    def passed(self) -> Dict[str, bool]:
        return {name: value <= self.tolerance for name, value in self.defects.items()}

    @property
    def all_passed(self) -> bool:
        return all(self.passed.values())

    def to_dict(self) -> dict:
        return {'defects': dict(self.defects), 'passed': self.passed, 'tolerance': self.tolerance}


def expansion_relations(fit: ExpansionFit, charges: ADMCharges, tolerance: float = 1e-2) -> ExpansionRelations:
    """
    Comparar los coeficientes ajustados con las predicciones en términos de (E, P).

    Args:
        fit: Ajuste de la expansión
        charges: Cargas ADM de los mismos datos
        tolerance: Tolerancia de aceptación

    Returns:
        ExpansionRelations con los defectos
        A: |A − (−aE + b·P/(2(n−2)))|, B: max|B_i + 2(n−1)/(n−2)·b_iE|,
        proportionality: max|b_iE + 2aP_i| y B_momentum: max|B_i − 4(n−1)/(n−2)·aP_i|
    """
    a, A = fit.a, fit.A
    b, B = np.asarray(fit.b), np.asarray(fit.B)
    n = len(b)
    E, P = charges.E, np.asarray(charges.P)

    defects = {
        'A': abs(A - (-a * E + float(b @ P) / (2.0 * (n - 2)))),
        'B': float(np.max(np.abs(B + 2.0 * (n - 1) / (n - 2) * b * E))),
        'proportionality': float(np.max(np.abs(b * E + 2.0 * a * P))),
        'B_momentum': float(np.max(np.abs(B - 4.0 * (n - 1) / (n - 2) * a * P)))
    }
    relations = ExpansionRelations(defects, tolerance)
    if not relations.all_passed:
        logger.warning(f"Relaciones de expansión violadas: {defects}")
    return relations


@dataclass(frozen=True)
class KidClassification:
    """Caso de la clasificación de KIDs asintóticos y su defecto."""

    case: int
    statement: str
    defect: float
    holds: bool

    def to_dict(self) -> dict:
        return {'case': self.case, 'statement': self.statement, 'defect': self.defect, 'holds': self.holds}


def classify_kid(a: float, b: Sequence[float], charges: ADMCharges, tolerance: float = 1e-8) -> KidClassification:
    """
    Clasificar la asíntota (a, b) de un KID asintótico frente a (E, P).

    Args:
        a: Asíntota del lapso
        b: Asíntota del desplazamiento
        charges: Cargas ADM
        tolerance: Umbral para tratar E o a como nulos y para aceptar el defecto

    Returns:
        KidClassification
        caso 1 (E≠0, a≠0): (a, b) ∝ (E, −2P), defecto max|a·(−2P) − b·E|;
        caso 2 (E≠0, a=0): b = 0, defecto |b|;
        caso 3 (E=0): a = 0 o P = 0, defecto |a|·|P|
    """
    b = np.asarray(b, dtype=float)
    E, P = charges.E, np.asarray(charges.P)
    if abs(E) > tolerance and abs(a) > tolerance:
        case, statement, defect = 1, "(a, b) proporcional a (E, −2P)", float(np.max(np.abs(-2.0 * a * P - b * E)))
    elif abs(E) > tolerance:
        case, statement, defect = 2, "b = 0", float(np.linalg.norm(b))
    else:
        case, statement, defect = 3, "a = 0 o P = 0", abs(a) * float(np.linalg.norm(P))
    result = KidClassification(case, statement, defect, defect <= tolerance)
    logger.debug(f"Clasificación KID: {result.to_dict()}")
    return result
