#!/usr/bin/env python3
"""
Script principal del kit de datos iniciales asintóticamente planos.

Ejemplos:
    python main.py charges --family schwarzschild --m 1
    python main.py dec-check --family conformal --amplitude 1 --power 2
    python main.py verify --suite flux-identities
    python main.py deform --family euclidean --lam 1e-3 --r-outer 6 --nodes 33 --fd-order 2

Autor: [Tu Nombre]
Fecha: [Fecha]
"""

import os
import sys
import logging
from pathlib import Path

from dotenv import load_dotenv

# Agregar src al path
sys.path.insert(0, str(Path(__file__).parent / "src"))

# El tope de hilos debe fijarse antes de cargar numpy
load_dotenv()
THREAD_VARIABLES = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS")
if os.getenv("ADM_TOOLKIT_THREADS", "").strip().isdigit():
    for variable in THREAD_VARIABLES:
        os.environ.setdefault(variable, os.environ["ADM_TOOLKIT_THREADS"].strip())

from data.cli import EXIT_ERROR, main as cli_main  # noqa: E402
from utils.config import get_logging_config, get_thread_limit, validate_config  # noqa: E402


def setup_logging():
    """
    Configurar logging para el proyecto.

    El flujo de consola va a stderr: stdout queda reservado para el informe JSON.
    """
    log_config = get_logging_config()

    # Crear directorio de logs si no existe
    log_file = Path(log_config['file'])
    log_file.parent.mkdir(parents=True, exist_ok=True)

    logging.basicConfig(
        level=getattr(logging, log_config['level']),
        format=log_config['format'],
        handlers=[
            logging.FileHandler(log_file),
            logging.StreamHandler(sys.stderr)
        ]
    )

    return logging.getLogger(__name__)


def report_thread_limit(logger):
    """
    Registrar el tope de hilos aplicado desde ADM_TOOLKIT_THREADS.

    Args:
        logger: Logger configurado
    """
    limit = get_thread_limit()
    if limit is not None:
        logger.info(f"Hilos de álgebra lineal limitados a {limit}")


def main():
    """
    Función principal: configura el entorno y delega en la CLI.
    """
    logger = setup_logging()
    if not validate_config():
        logger.error("Configuración inválida")
        return EXIT_ERROR
    report_thread_limit(logger)

    try:
        code = cli_main(sys.argv[1:])
    except KeyboardInterrupt:
        logger.warning("Ejecución interrumpida por el usuario")
        return EXIT_ERROR
    logger.info(f"Finalizado con código {code}")
    return code


if __name__ == "__main__":
    sys.exit(main())
