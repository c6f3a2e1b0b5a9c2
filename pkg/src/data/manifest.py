"""
Manifiesto de un conjunto de datos: dimensión, familia y parámetros,
carta, convención del tensor de momento y tipo de decaimiento.
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict

import numpy as np

from fields.chart import Chart, DecayWeight, make_chart, validate_decay_type
from utils.config import (CONVENTION, DEFAULT_DECAY_TYPE, DEFAULT_DIMENSION, DEFAULT_NODES, DEFAULT_R_INNER,
                          DEFAULT_R_OUTER, FAMILIES, FD_ORDER, MANIFEST_SCHEMA_VERSION)
from utils.errors import DatasetError, DomainError

logger = logging.getLogger(__name__)

EXTERNAL = "external"
BOWEN_YORK_DIMENSION = 3


def default_decay(n: int) -> Dict[str, float]:
    """Tipo (p, q, q0, α) por defecto; fuera de n = 3 q se sitúa justo bajo n − 2."""
    if n == 3:
        return dict(DEFAULT_DECAY_TYPE)
    return {'p': float(n + 1), 'q': n - 2.0 - 0.05, 'q0': 1.0, 'alpha': 0.5}


def default_chart_spec() -> Dict[str, Any]:
    return {
        'r_inner': DEFAULT_R_INNER,
        'r_outer': DEFAULT_R_OUTER,
        'nodes_per_axis': DEFAULT_NODES,
        'fd_order': FD_ORDER
    }


@dataclass
class DatasetManifest:
    """
    Descripción autocontenida de un conjunto de datos.

    ``arrays`` se rellena al guardar: nombre -> {file, shape, dtype}.
    """

    n: int = DEFAULT_DIMENSION
    family: str = "euclidean"
    parameters: Dict[str, Any] = field(default_factory=dict)
    chart: Dict[str, Any] = field(default_factory=default_chart_spec)
    convention: str = CONVENTION
    decay: Dict[str, float] = field(default_factory=dict)
    units: str = "G = c = 1; π^{ij} = k^{ij} − (tr_g k) g^{ij}"
    schema_version: int = MANIFEST_SCHEMA_VERSION
    arrays: Dict[str, Dict[str, Any]] = field(default_factory=dict)

    def __post_init__(self):
        if not self.decay:
            self.decay = default_decay(int(self.n))

    def make_chart(self) -> Chart:
        spec = self.chart
        try:
            return make_chart(int(self.n), float(spec['r_inner']), float(spec['r_outer']),
                              int(spec['nodes_per_axis']), int(spec.get('fd_order', FD_ORDER)))
        except KeyError as exc:
            raise DatasetError("invalid-parameters", f"falta {exc} en la carta del manifiesto") from exc

    def decay_weight(self) -> DecayWeight:
        weight = DecayWeight(q=float(self.decay['q']), alpha=self.decay.get('alpha'),
                             p=self.decay.get('p'), q0=self.decay.get('q0'), q1=self.decay.get('q1'))
        return validate_decay_type(weight, int(self.n))

    def validate(self) -> "DatasetManifest":
        """
        Validar familia, parámetros, convención y carta.

        Returns:
            El propio manifiesto
        """
        if self.schema_version != MANIFEST_SCHEMA_VERSION:
            raise DatasetError("manifest-mismatch", f"versión de esquema {self.schema_version} no soportada")
        if self.family not in FAMILIES + (EXTERNAL,):
            raise DatasetError("invalid-parameters", f"familia desconocida: {self.family}")
        if self.convention != CONVENTION:
            raise DatasetError("convention-not-paper",
                               f"convención '{self.convention}' no admitida; se requiere '{CONVENTION}'")
        try:
            self.make_chart()
            self.decay_weight()
        except DomainError as exc:
            raise DatasetError("invalid-parameters", str(exc)) from exc
        _validate_family(self.family, self.parameters, int(self.n))
        return self

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DatasetManifest":
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        return cls(**known)


def _validate_family(family: str, parameters: Dict[str, Any], n: int) -> None:
    if family == "schwarzschild":
        m = float(parameters.get('m', 1.0))
        if not m > 0:
            raise DatasetError("invalid-parameters", f"schwarzschild requiere m > 0, recibido {m}")
    elif family == "bowen_york":
        if n != BOWEN_YORK_DIMENSION:
            raise DatasetError("unsupported-dimension-for-family", f"bowen_york solo existe para n = 3, n={n}")
        P = np.asarray(parameters.get('P', (0.0, 0.0, 0.5)), dtype=float)
        if P.shape != (n,) or not np.all(np.isfinite(P)):
            raise DatasetError("invalid-parameters", f"P* debe ser un vector finito de {n} componentes")
    elif family == "conformal":
        amplitude = float(parameters.get('amplitude', 1.0))
        power = float(parameters.get('power', 2.0))
        if amplitude < 0 or power <= 0:
            raise DatasetError("invalid-parameters",
                               f"u = 1 + A|x|^(−k) requiere A ≥ 0 y k > 0, recibido A={amplitude}, k={power}")
    elif family == "perturbed":
        base = parameters.get('base', 'euclidean')
        if base not in FAMILIES or base == "perturbed":
            raise DatasetError("invalid-parameters", f"familia base no válida para perturbed: {base}")
        _validate_family(base, parameters, n)
        if float(parameters.get('epsilon', 0.0)) < 0:
            raise DatasetError("invalid-parameters", "la amplitud de la perturbación debe ser ≥ 0")
