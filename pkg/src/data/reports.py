"""
Informes de verificación: filas {name, value, tolerance, pass} en un
DataFrame de pandas, exportables a JSON y a texto.
"""

import logging
import math
from typing import Any, Dict, Optional, Sequence

import numpy as np
import pandas as pd

from utils.helpers import observed_rate, to_json_text

logger = logging.getLogger(__name__)

COLUMNS = ['name', 'value', 'tolerance', 'pass']


class CheckReport:
    """
    Acumulador de verificaciones de un subcomando.

    Args:
        command: Nombre del subcomando o suite
    """

    def __init__(self, command: str):
        self.command = command
        self.rows = []
        self.extras: Dict[str, Any] = {}

    def add(self, name: str, value: float, tolerance: Optional[float] = None,
            passed: Optional[bool] = None, comparison: str = 'le') -> bool:
        """
        Registrar una verificación.

        Args:
            name: Nombre de la verificación
            value: Valor medido
            tolerance: Tolerancia (None para valores informativos)
            passed: Veredicto explícito; si es None se compara value con tolerance
            comparison: 'le' (value ≤ tol), 'ge' (value ≥ −tol) o 'info'

        Returns:
            Veredicto registrado
        """
        value = float(value)
        if passed is None:
            if tolerance is None or comparison == 'info':
                passed = True
            elif comparison == 'ge':
                passed = value >= -tolerance
            else:
                passed = abs(value) <= tolerance
        self.rows.append({'name': name, 'value': value,
                          'tolerance': None if tolerance is None else float(tolerance), 'pass': bool(passed)})
        if not passed:
            logger.warning(f"Verificación fallida: {name} = {value:.3e} (tolerancia {tolerance})")
        return bool(passed)

    def add_dict(self, prefix: str, values: Dict[str, float], tolerance: Optional[float] = None) -> None:
        for key, value in values.items():
            self.add(f"{prefix}.{key}", value, tolerance)

    def extra(self, key: str, value: Any) -> None:
        self.extras[key] = value

    @property
    def frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=COLUMNS)

    @property
    def passed(self) -> bool:
        frame = self.frame
        return bool(frame['pass'].all()) if len(frame) else True

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_dict(self) -> Dict[str, Any]:
        checks = [
            {key: (None if isinstance(value, float) and math.isnan(value) else value) for key, value in row.items()}
            for row in self.frame.to_dict(orient='records')
        ]
        return {'command': self.command, 'passed': self.passed, 'checks': checks, **self.extras}

    def to_json(self) -> str:
        return to_json_text(self.to_dict())

    def to_text(self) -> str:
        frame = self.frame
        status = "OK" if self.passed else "FALLO"
        header = f"{self.command}: {status} ({int(frame['pass'].sum()) if len(frame) else 0}/{len(frame)} verificaciones)"
        if not len(frame):
            return header
        return header + "\n" + frame.to_string(index=False)


def convergence_table(spacings: Sequence[float], errors: Sequence[float]) -> pd.DataFrame:
    """
    Tabla (h, error, tasa observada) para una serie de refinamientos.

    Args:
        spacings: Pasos de malla, de grueso a fino
        errors: Errores correspondientes

    Returns:
        DataFrame con columnas h, error, rate (NaN en la primera fila)
    """
    spacings = [float(h) for h in spacings]
    errors = [float(e) for e in errors]
    rates = [np.nan] + [observed_rate(errors[k - 1], errors[k], spacings[k - 1] / spacings[k])
                        for k in range(1, len(errors))]
    return pd.DataFrame({'h': spacings, 'error': errors, 'rate': rates})
