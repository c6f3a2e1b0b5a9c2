#!/usr/bin/env python3
"""
Script de configuración e instalación del kit de datos iniciales.

Crea el entorno virtual, instala las dependencias, prepara los
directorios de datos y, opcionalmente, genera los datasets de referencia
y ejecuta los tests.

Autor: [Tu Nombre]
Fecha: [Fecha]
"""

import subprocess
import sys
from pathlib import Path
import platform

MIN_PYTHON = (3, 9)

# Datasets de referencia: (nombre, argumentos de la familia)
REFERENCE_DATASETS = [
    ("euclidean", ["--family", "euclidean"]),
    ("schwarzschild_m1", ["--family", "schwarzschild", "--m", "1"]),
    ("bowen_york_pz05", ["--family", "bowen_york", "--P", "0,0,0.5"]),
    ("conformal_a1_k2", ["--family", "conformal", "--amplitude", "1", "--power", "2"]),
]


def print_banner():
    """
    Imprimir banner del proyecto.
    """
    banner = """
    ╔══════════════════════════════════════════════════════════════╗
    ║                                                              ║
    ║        CONFIGURACIÓN DEL KIT DE DATOS INICIALES              ║
    ║            ASINTÓTICAMENTE PLANOS (ADM)                      ║
    ║                                                              ║
    ╚══════════════════════════════════════════════════════════════╝
    """
    print(banner)


def venv_executable(name: str) -> str:
    if platform.system() == "Windows":
        return f"venv\\Scripts\\{name}"
    return f"venv/bin/{name}"


def check_python_version():
    """
    Verificar versión de Python.

    Returns:
        bool: True si la versión es compatible
    """
    print("🐍 Verificando versión de Python...")

    version = sys.version_info
    if (version.major, version.minor) < MIN_PYTHON:
        print(f"❌ Error: Se requiere Python {MIN_PYTHON[0]}.{MIN_PYTHON[1]} o superior. "
              f"Versión actual: {version.major}.{version.minor}")
        return False

    print(f"✅ Python {version.major}.{version.minor}.{version.micro} - Compatible")
    return True


def create_virtual_environment():
    """
    Crear entorno virtual.

    Returns:
        bool: True si se creó exitosamente
    """
    print("\n🔧 Creando entorno virtual...")

    venv_path = Path("venv")
    if venv_path.exists():
        print("⚠️  El entorno virtual 'venv' ya existe")
        return True

    try:
        subprocess.run([sys.executable, "-m", "venv", "venv"], check=True)
        print("✅ Entorno virtual creado: venv")
        return True
    except subprocess.CalledProcessError as e:
        print(f"❌ Error creando entorno virtual: {e}")
        return False


def install_dependencies():
    """
    Instalar dependencias del proyecto.

    Returns:
        bool: True si se instalaron exitosamente
    """
    print("\n📦 Instalando dependencias...")

    requirements_file = "requirements.txt"
    if not Path(requirements_file).exists():
        print(f"❌ Archivo {requirements_file} no encontrado")
        return False

    try:
        subprocess.run([venv_executable("pip"), "install", "-r", requirements_file], check=True)
        print("✅ Dependencias instaladas exitosamente")
        return True
    except subprocess.CalledProcessError as e:
        print(f"❌ Error instalando dependencias: {e}")
        return False


def create_directories():
    """
    Crear directorios necesarios.

    Returns:
        bool: True si se crearon exitosamente
    """
    print("\n📁 Creando estructura de directorios...")

    directories = ["data/datasets", "data/reports", "logs"]
    try:
        for directory in directories:
            Path(directory).mkdir(parents=True, exist_ok=True)
            print(f"✅ Directorio creado: {directory}")
        return True
    except OSError as e:
        print(f"❌ Error creando directorios: {e}")
        return False


def generate_reference_datasets():
    """
    Guardar los datasets de las familias exactas en data/datasets.

    Returns:
        bool: True si todos se generaron
    """
    print("\n🧮 Generando datasets de referencia...")

    ok = True
    for name, family_args in REFERENCE_DATASETS:
        target = Path("data/datasets") / name
        command = [venv_executable("python"), "main.py", "info", *family_args, "--nodes", "33",
                   "--save", str(target)]
        result = subprocess.run(command, capture_output=True, text=True)
        if result.returncode == 0:
            print(f"✅ {name} → {target}")
        else:
            print(f"⚠️  No se pudo generar {name}")
            print(result.stderr)
            ok = False
    return ok


def run_tests():
    """
    Ejecutar tests del proyecto.

    Returns:
        bool: True si los tests pasaron
    """
    print("\n🧪 Ejecutando tests...")

    result = subprocess.run([venv_executable("pytest"), "tests/", "-v"], capture_output=True, text=True)
    if result.returncode == 0:
        print("✅ Tests ejecutados exitosamente")
        return True

    print("⚠️  Algunos tests fallaron")
    print(result.stdout)
    print(result.stderr)
    return False


def ask(question: str) -> bool:
    print(question, end="")
    return input().lower().strip() in ['s', 'si', 'sí', 'y', 'yes']


def print_next_steps():
    """
    Imprimir próximos pasos para el usuario.
    """
    print("\n" + "=" * 60)
    print("🎯 CONFIGURACIÓN COMPLETADA")
    print("=" * 60)
    print("\n📋 Próximos pasos:")
    print("")
    print("1. Cargas ADM de Schwarzschild:")
    print("   python main.py charges --family schwarzschild --m 1")
    print("")
    print("2. Suite de identidades de flujo:")
    print("   python main.py verify --suite flux-identities")
    print("")
    print("3. Ejecutar tests:")
    print(f"   {venv_executable('pytest')} tests/ -v")
    print("=" * 60)


def main():
    """
    Función principal de configuración.
    """
    print_banner()

    if not check_python_version():
        sys.exit(1)

    if not create_virtual_environment():
        sys.exit(1)

    if not install_dependencies():
        sys.exit(1)

    if not create_directories():
        sys.exit(1)

    if ask("\n¿Deseas generar los datasets de referencia? (s/n): "):
        generate_reference_datasets()

    if ask("\n¿Deseas ejecutar los tests ahora? (s/n): "):
        run_tests()

    print_next_steps()


if __name__ == "__main__":
    try:
        main()
    except KeyboardInterrupt:
        print("\n\n⚠️  Configuración interrumpida por el usuario")
        sys.exit(1)
