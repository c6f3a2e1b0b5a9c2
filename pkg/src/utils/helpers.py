"""
Funciones auxiliares para el kit de datos iniciales.

Este módulo contiene funciones utilitarias que pueden ser utilizadas
en diferentes partes del proyecto.
"""

import json
from pathlib import Path
from typing import Any, Dict, Sequence

import numpy as np


def _json_default(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.bool_):
        return bool(value)
    return str(value)


def save_json(data: Dict[str, Any], filepath: str) -> None:
    """
    Guardar datos en formato JSON.

    Args:
        data: Datos a guardar
        filepath: Ruta del archivo
    """
    with open(filepath, 'w', encoding='utf-8') as f:
        json.dump(data, f, indent=2, ensure_ascii=False, default=_json_default)


def load_json(filepath: str) -> Dict[str, Any]:
    """
    Cargar datos desde archivo JSON.

    Args:
        filepath: Ruta del archivo

    Returns:
        Datos cargados
    """
    with open(filepath, 'r', encoding='utf-8') as f:
        return json.load(f)


def to_json_text(data: Dict[str, Any]) -> str:
    """
    Serializar un diccionario a texto JSON con los mismos criterios que save_json.

    Args:
        data: Datos a serializar

    Returns:
        Texto JSON
    """
    return json.dumps(data, indent=2, ensure_ascii=False, default=_json_default)


def observed_rate(err_coarse: float, err_fine: float, ratio: float = 2.0) -> float:
    """
    Tasa de convergencia observada entre dos resoluciones.

    Args:
        err_coarse: Error con paso h
        err_fine: Error con paso h/ratio
        ratio: Factor de refinamiento

    Returns:
        log(err_coarse/err_fine)/log(ratio); inf si el error fino es nulo
    """
    if err_fine == 0:
        return float('inf')
    if err_coarse == 0:
        return 0.0
    return float(np.log(err_coarse / err_fine) / np.log(ratio))


def parse_float_list(text: str) -> Sequence[float]:
    """
    Convertir una lista separada por comas en floats.

    Args:
        text: Texto del tipo "4,8,16"

    Returns:
        Lista de floats
    """
    return [float(item) for item in text.split(',') if item.strip()]


def create_directory_if_not_exists(dirpath: str) -> None:
    """
    Crear directorio si no existe.

    Args:
        dirpath: Ruta del directorio
    """
    Path(dirpath).mkdir(parents=True, exist_ok=True)
