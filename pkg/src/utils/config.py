"""
Configuración y constantes del kit de datos iniciales asintóticamente planos.

Este módulo contiene todas las configuraciones, constantes y parámetros
numéricos utilizados en el proyecto. Los valores pueden ajustarse con
variables de entorno (archivo ``.env`` opcional).
"""

import os
from pathlib import Path
from typing import Dict, Optional

from dotenv import load_dotenv

# Configuración de rutas
PROJECT_ROOT = Path(__file__).parent.parent.parent
DATA_DIR = PROJECT_ROOT / "data"
DATASETS_DIR = DATA_DIR / "datasets"
REPORTS_DIR = DATA_DIR / "reports"

load_dotenv(PROJECT_ROOT / ".env")

# Configuración de logging
LOG_LEVEL = os.getenv("ADM_TOOLKIT_LOG_LEVEL", "INFO")
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_FILE = PROJECT_ROOT / "logs" / "adm_toolkit.log"

# Configuración de la carta exterior
DEFAULT_DIMENSION = 3
DEFAULT_R_INNER = 1.0
DEFAULT_R_OUTER = 16.0
DEFAULT_NODES = 65
FD_ORDER = 4
SUPPORTED_FD_ORDERS = (2, 4)
CORE_FRACTION = 0.5  # radio del núcleo regularizado, en unidades de r_inner

# Configuración de cuadratura
QUAD_ORDER = 32
MONTE_CARLO_SAMPLES = 20000
MONTE_CARLO_SEED = 1234

# Configuración de cargas ADM
DEFAULT_RADII_FRACTIONS = (1 / 8, 3 / 16, 1 / 4, 3 / 8, 1 / 2)
EXTRAPOLATION_TERMS = 3
MIN_RADII = 3

# Configuración de tolerancias
DEC_TOLERANCE_FACTOR = 10.0
MACHINE_TOLERANCE = 1e-12
H_NORM_LIMIT = 3.0

# Configuración del Hamiltoniano
DIRECTIONAL_STEP = 1e-4
HAMILTONIAN_WINDOW_HALF_WIDTH = 1.0
HAMILTONIAN_WINDOW_FRACTIONS = (0.45, 0.6, 0.75)
STATIONARITY_DIRECTIONS = 6

# Configuración de solvers
CG_RTOL = 1e-10
CG_MAX_ITER = 5000
GMRES_RTOL = 1e-9
GMRES_RESTART = 60
GMRES_MAX_ITER = 20
ILU_DROP_TOL = 1e-4
ILU_FILL_FACTOR = 10
NEWTON_MAX_ITER = 25
NEWTON_TOL = 1e-9
N_BUMPS = 8
BUMP_SEED = 7
MIN_BUMP_SPACINGS = 2.0  # radio mínimo de un chichón, en pasos de malla
TRUST_RADIUS = 5.0
MAX_CONFORMAL_CHANGE = 0.5

# Configuración de expansiones asintóticas
Q1_CAP = 0.9
FIT_WINDOW_FRACTIONS = (0.3, 0.85)
FIT_SPHERES = 6

# Familias de datos conocidas
FAMILIES = ("euclidean", "schwarzschild", "bowen_york", "conformal", "perturbed")
CONVENTION = "paper"
MANIFEST_SCHEMA_VERSION = 1

# Tipos de decaimiento por defecto (p, q, q0, alpha) para n = 3
DEFAULT_DECAY_TYPE = {
    'p': 4.0,
    'q': 0.95,
    'q0': 1.0,
    'alpha': 0.5
}


def get_thread_limit() -> Optional[int]:
    """
    Leer el tope de hilos de ``ADM_TOOLKIT_THREADS``.

    Returns:
        Número máximo de hilos, o None si no está definido
    """
    raw = os.getenv("ADM_TOOLKIT_THREADS")
    if raw is None or raw.strip() == "":
        return None
    try:
        value = int(raw)
    except ValueError:
        return None
    return value if value > 0 else None


def validate_config() -> bool:
    """
    Validar que la configuración sea correcta.

    Returns:
        True si la configuración es válida, False en caso contrario
    """
    try:
        for path in [DATA_DIR, DATASETS_DIR, REPORTS_DIR]:
            path.mkdir(parents=True, exist_ok=True)

        if FD_ORDER not in SUPPORTED_FD_ORDERS:
            print(f"Warning: orden de diferencias no soportado: {FD_ORDER}")
            return False

        return True

    except Exception as e:
        print(f"Error validando configuración: {e}")
        return False


def get_logging_config() -> Dict:
    """
    Obtener configuración de logging.

    Returns:
        Diccionario con configuración de logging
    """
    return {
        'level': LOG_LEVEL,
        'format': LOG_FORMAT,
        'file': LOG_FILE,
        'handlers': ['console', 'file']
    }


def get_solver_config() -> Dict:
    """
    Obtener configuración de los solvers iterativos.

    Returns:
        Diccionario con tolerancias y topes de iteración
    """
    return {
        'cg_rtol': CG_RTOL,
        'cg_max_iter': CG_MAX_ITER,
        'gmres_rtol': GMRES_RTOL,
        'gmres_restart': GMRES_RESTART,
        'gmres_max_iter': GMRES_MAX_ITER,
        'ilu_drop_tol': ILU_DROP_TOL,
        'ilu_fill_factor': ILU_FILL_FACTOR,
        'newton_max_iter': NEWTON_MAX_ITER,
        'newton_tol': NEWTON_TOL,
        'n_bumps': N_BUMPS,
        'bump_seed': BUMP_SEED,
        'trust_radius': TRUST_RADIUS,
        'max_conformal_change': MAX_CONFORMAL_CHANGE,
        'threads': get_thread_limit()
    }
