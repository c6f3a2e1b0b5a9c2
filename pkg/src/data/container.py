"""
Contenedor de datasets: un directorio con ``manifest.json`` y un archivo
binario float64 little-endian por componente, en orden de filas.
"""

import logging
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from constraints.data_set import InitialDataSet
from data.manifest import EXTERNAL, DatasetManifest
from fields.field import Field
from utils.config import CONVENTION
from utils.errors import DatasetError
from utils.helpers import create_directory_if_not_exists, load_json, save_json

logger = logging.getLogger(__name__)

MANIFEST_FILE = "manifest.json"
DTYPE = '<f8'
ITEM_SIZE = 8


def _component_names(name: str, n: int):
    for i in range(n):
        for j in range(i, n):
            yield f"{name}_{i}{j}", (i, j)


def save(ids: InitialDataSet, manifest: DatasetManifest, path: Union[str, Path]) -> Path:
    """
    Guardar un conjunto de datos (los campos analíticos se muestrean).

    Args:
        ids: Datos iniciales
        manifest: Manifiesto que los describe
        path: Directorio destino

    Returns:
        Ruta del directorio
    """
    directory = Path(path)
    n = ids.n
    if int(manifest.n) != n:
        raise DatasetError("manifest-mismatch", f"el manifiesto declara n={manifest.n}, los datos n={n}")
    try:
        create_directory_if_not_exists(str(directory))
        arrays = {}
        for name, data in (('g', ids.g.values), ('pi', ids.pi.values)):
            for label, index in _component_names(name, n):
                filename = f"{label}.f64"
                component = np.ascontiguousarray(data[index], dtype=DTYPE)
                component.tofile(directory / filename)
                arrays[label] = {'file': filename, 'shape': list(component.shape), 'dtype': DTYPE}
        manifest.arrays = arrays
        manifest.chart = {key: value for key, value in ids.chart.describe().items()
                          if key in ('r_inner', 'r_outer', 'nodes_per_axis', 'fd_order')}
        save_json(manifest.to_dict(), str(directory / MANIFEST_FILE))
    except OSError as exc:
        logger.error(f"Error guardando el dataset en {directory}: {exc}")
        raise DatasetError("io-error", f"no se pudo escribir {directory}: {exc}") from exc
    logger.info(f"Dataset guardado en {directory} ({len(arrays)} componentes)")
    return directory


def _read_component(directory: Path, label: str, entry: dict, expected_shape: Tuple[int, ...]) -> np.ndarray:
    shape = tuple(int(s) for s in entry.get('shape', ()))
    if shape != expected_shape:
        raise DatasetError("manifest-mismatch",
                           f"{label}: forma {shape} distinta de la forma de la carta {expected_shape}")
    if entry.get('dtype', DTYPE) != DTYPE:
        raise DatasetError("manifest-mismatch", f"{label}: tipo {entry.get('dtype')} no soportado")
    filepath = directory / entry['file']
    expected_bytes = int(np.prod(shape)) * ITEM_SIZE
    try:
        found = filepath.stat().st_size
        if found != expected_bytes:
            raise DatasetError("io-error", f"{filepath.name}: el archivo termina en el byte {found}, "
                                           f"se esperaban {expected_bytes} (elemento {found // ITEM_SIZE})")
        return np.fromfile(filepath, dtype=DTYPE).reshape(shape)
    except OSError as exc:
        raise DatasetError("io-error", f"no se pudo leer {filepath}: {exc}") from exc


def load(path: Union[str, Path]) -> Tuple[InitialDataSet, DatasetManifest]:
    """
    Cargar un dataset guardado con ``save``.

    Args:
        path: Directorio del dataset

    Returns:
        (InitialDataSet con backend de malla, manifiesto)
    """
    directory = Path(path)
    try:
        manifest = DatasetManifest.from_dict(load_json(str(directory / MANIFEST_FILE)))
    except OSError as exc:
        logger.error(f"No se pudo leer el manifiesto de {directory}: {exc}")
        raise DatasetError("io-error", f"manifiesto ilegible en {directory}: {exc}") from exc
    except ValueError as exc:
        raise DatasetError("manifest-mismatch", f"manifiesto inválido en {directory}: {exc}") from exc

    if manifest.convention != CONVENTION:
        raise DatasetError("convention-not-paper",
                           f"convención '{manifest.convention}'; solo se ingieren datos en convención '{CONVENTION}'")
    manifest.validate()
    chart = manifest.make_chart()
    n = chart.n

    arrays = {}
    for name in ('g', 'pi'):
        values = np.empty((n, n) + chart.shape)
        for label, (i, j) in _component_names(name, n):
            if label not in manifest.arrays:
                raise DatasetError("manifest-mismatch", f"falta la componente {label} en el manifiesto")
            component = _read_component(directory, label, manifest.arrays[label], chart.shape)
            values[i, j] = component
            values[j, i] = component
        arrays[name] = values

    metadata = dict(manifest.parameters)
    metadata.update({'family': manifest.family if manifest.family != EXTERNAL else EXTERNAL,
                     'backend': 'grid', 'source': str(directory)})
    ids = InitialDataSet(chart, Field(chart, (2, 0), arrays['g'], symmetric=True),
                         Field(chart, (0, 2), arrays['pi'], symmetric=True), manifest.decay_weight(), metadata)
    logger.info(f"Dataset cargado desde {directory}: familia {manifest.family}, malla {chart.shape}")
    return ids, manifest
