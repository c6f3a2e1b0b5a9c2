"""
Backend analítico de campos: clausuras de componentes con derivadas exactas.

Una fuente analítica evalúa las componentes de un campo en puntos
arbitrarios y, si dispone de un ``jet``, también sus derivadas parciales.
"""

from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

JetFunction = Callable[[np.ndarray, Tuple[int, ...]], Optional[np.ndarray]]


class AnalyticSource:
    """
    Clausura analítica de un campo.

    Args:
        func: x (n, ...) -> componentes (..., ...)
        jet: (x, multi_index ordenado) -> derivada exacta, o None si no se conoce
        offset: Derivadas ya aplicadas (para fuentes derivadas)
    """

    def __init__(self, func: Callable[[np.ndarray], np.ndarray],
                 jet: Optional[JetFunction] = None, offset: Tuple[int, ...] = ()):
        self.func = func
        self.jet = jet
        self.offset = tuple(offset)

    def evaluate(self, x: np.ndarray, multi_index: Sequence[int] = ()) -> Optional[np.ndarray]:
        """
        Evaluar la fuente (o una derivada) en los puntos ``x``.

        Returns:
            Array de componentes, o None si la derivada pedida no es exacta
        """
        mi = tuple(sorted(self.offset + tuple(multi_index)))
        if not mi:
            return np.asarray(self.func(x), dtype=float)
        if self.jet is None:
            return None
        result = self.jet(x, mi)
        return None if result is None else np.asarray(result, dtype=float)

    def derived(self, multi_index: Sequence[int]) -> "AnalyticSource":
        return AnalyticSource(self.func, self.jet, self.offset + tuple(multi_index))


def combine(sources: Sequence[AnalyticSource], coefficients: Sequence[float]) -> AnalyticSource:
    """Combinación lineal de fuentes; la derivada existe si existe en todas."""
    sources = list(sources)
    coefficients = [float(c) for c in coefficients]

    def func(x):
        return sum(c * s.evaluate(x) for s, c in zip(sources, coefficients))

    def jet(x, mi):
        parts = [s.evaluate(x, mi) for s in sources]
        if any(part is None for part in parts):
            return None
        return sum(c * part for part, c in zip(parts, coefficients))

    return AnalyticSource(func, jet)


class PolynomialSource(AnalyticSource):
    """
    Campo tensorial con componentes polinómicas en las coordenadas.

    Args:
        n: Dimensión
        comp_shape: Forma de las componentes (p. ej. (3, 3))
        terms: componente -> lista de (coeficiente, exponentes)
    """

    def __init__(self, n: int, comp_shape: Tuple[int, ...],
                 terms: Dict[Tuple[int, ...], List[Tuple[float, Tuple[int, ...]]]]):
        self.n = n
        self.comp_shape = tuple(comp_shape)
        self.terms = {tuple(k): list(v) for k, v in terms.items()}
        super().__init__(self._value, self._jet)

    def _monomials(self, x: np.ndarray, mi: Tuple[int, ...]) -> np.ndarray:
        counts = np.bincount(np.asarray(mi, dtype=int), minlength=self.n) if mi else np.zeros(self.n, int)
        out = np.zeros(self.comp_shape + x.shape[1:])
        for comp, monomials in self.terms.items():
            for coef, exps in monomials:
                c = float(coef)
                e = list(exps)
                for a in range(self.n):
                    for _ in range(counts[a]):
                        c *= e[a]
                        e[a] -= 1
                        if c == 0:
                            break
                    if c == 0:
                        break
                if c == 0:
                    continue
                term = np.full(x.shape[1:], c)
                for a in range(self.n):
                    if e[a] > 0:
                        term = term * x[a] ** e[a]
                out[comp] += term
        return out

    def _value(self, x: np.ndarray) -> np.ndarray:
        return self._monomials(x, ())

    def _jet(self, x: np.ndarray, mi: Tuple[int, ...]) -> np.ndarray:
        return self._monomials(x, mi)


def random_polynomial(n: int, comp_shape: Tuple[int, ...], degree: int,
                      rng: np.random.Generator, terms_per_component: int = 4) -> PolynomialSource:
    """
    Polinomio tensorial aleatorio (semilla controlada por ``rng``).

    Args:
        n: Dimensión
        comp_shape: Forma de componentes
        degree: Grado total máximo
        rng: Generador de numpy
        terms_per_component: Monomios por componente

    Returns:
        Fuente polinómica
    """
    terms = {}
    for comp in product(*[range(s) for s in comp_shape]):
        monomials = []
        for _ in range(terms_per_component):
            exps = [0] * n
            for _ in range(int(rng.integers(0, degree + 1))):
                exps[int(rng.integers(0, n))] += 1
            monomials.append((float(rng.normal()), tuple(exps)))
        terms[comp] = monomials
    return PolynomialSource(n, comp_shape, terms)
