"""
Tests de la línea de comandos: códigos de salida, informe JSON por
stdout y errores de uso o de E/S.
"""

import json

import pytest
from pathlib import Path
import sys

# Agregar el directorio src al path para importar módulos
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from data.cli import EXIT_CHECK_FAILED, EXIT_ERROR, EXIT_OK, main, run


class TestSubcommands:
    """
    Tests de los subcomandos sobre familias exactas en cartas pequeñas.
    """

    def test_charges_schwarzschild(self, capsys):
        code, report = run(["charges", "--family", "schwarzschild", "--m", "1", "--nodes", "33"])
        assert code == EXIT_OK
        assert report.extras['charges']['E'] == pytest.approx(1.0, abs=1e-3)
        payload = json.loads(capsys.readouterr().out)
        assert payload['command'] == 'charges'
        assert payload['passed'] is True
        assert payload['chart']['r_outer'] == 16.0

    def test_dec_check_conformal_fails(self):
        code, report = run(["dec-check", "--family", "conformal", "--amplitude", "1", "--power", "2",
                            "--r-outer", "4", "--nodes", "33"])
        assert code == EXIT_CHECK_FAILED
        assert report.extras['margin_at_inner_radius'] == pytest.approx(-0.25, rel=1e-9)

    def test_verify_flux_identities(self):
        code, report = run(["verify", "--suite", "flux-identities", "--r-outer", "4", "--nodes", "17"])
        assert code == EXIT_OK
        assert len(report.rows) > 0

    def test_text_report(self, capsys):
        code = main(["constraints", "--family", "euclidean", "--r-outer", "8", "--nodes", "33", "--report", "text"])
        assert code == EXIT_OK
        captured = capsys.readouterr()
        assert captured.out.startswith("constraints: OK")
        assert "constraints: OK" not in captured.err

    def test_json_report_summary_on_stderr(self, capsys):
        code = main(["constraints", "--family", "euclidean", "--r-outer", "8", "--nodes", "33"])
        assert code == EXIT_OK
        captured = capsys.readouterr()
        assert json.loads(captured.out)["command"] == "constraints"
        assert captured.err.count("constraints: OK") == 1

    def test_documented_deform_example(self):
        code, report = run(["deform", "--family", "euclidean", "--lam", "1e-3", "--r-outer", "6", "--nodes", "33",
                            "--fd-order", "2"])
        assert code == EXIT_OK
        assert report.extras["strict_dec"]["lambda"] == 1e-3

    def test_info_save_and_reload(self, tmp_path):
        target = tmp_path / "euclidea"
        code, report = run(["info", "--family", "euclidean", "--nodes", "17", "--save", str(target)])
        assert code == EXIT_OK
        assert report.extras['saved_to'] == str(target)
        code, report = run(["charges", "--input", str(target)])
        assert code == EXIT_OK
        assert report.extras['charges']['E'] == pytest.approx(0.0, abs=1e-12)


class TestErrors:
    """
    Tests de los errores de uso y de E/S (código 2).
    """

    def test_unknown_subcommand(self, capsys):
        code, report = run(["frobnicate"])
        assert code == EXIT_ERROR
        assert report is None
        assert "error de uso" in capsys.readouterr().err

    def test_exclusive_sources(self, tmp_path):
        code, _ = run(["charges", "--input", str(tmp_path), "--family", "euclidean"])
        assert code == EXIT_ERROR

    def test_missing_input(self, tmp_path, capsys):
        code, _ = run(["charges", "--input", str(tmp_path / "no_existe")])
        assert code == EXIT_ERROR
        assert "io-error" in capsys.readouterr().err

    def test_invalid_family_parameters(self, capsys):
        code, _ = run(["charges", "--family", "schwarzschild", "--m", "-1", "--nodes", "17"])
        assert code == EXIT_ERROR
        lines = [line for line in capsys.readouterr().err.splitlines() if line.startswith("error ")]
        assert len(lines) == 1
        assert lines[0].count("invalid-parameters") == 1

    def test_deform_on_unresolved_chart(self, capsys):
        code, _ = run(["deform", "--family", "euclidean", "--r-outer", "6", "--nodes", "13", "--fd-order", "2"])
        assert code == EXIT_ERROR
        assert "insufficient-resolution" in capsys.readouterr().err


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
