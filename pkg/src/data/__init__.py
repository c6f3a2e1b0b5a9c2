"""
Familias exactas de datos iniciales, contenedor de datasets en disco,
informes de verificación y línea de comandos.
"""

from .container import load, save
from .generators import (bowen_york, conformal, euclidean, gaussian_bump, generate, perturbed, random_rotation,
                         rotate_dataset, schwarzschild, static_lapse)
from .manifest import DatasetManifest, default_chart_spec, default_decay
from .reports import CheckReport, convergence_table
