"""
Tests unitarios para el paquete de datos: manifiesto, familias
generadas, contenedor en disco e informes de verificación.
"""

import json

import pytest
import numpy as np
from pathlib import Path
import sys

# Agregar el directorio src al path para importar módulos
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from data import (CheckReport, DatasetManifest, convergence_table, default_decay, euclidean, gaussian_bump,
                  generate, load, perturbed, save, schwarzschild)
from fields import make_chart
from utils.config import DEFAULT_DECAY_TYPE
from utils.helpers import load_json, save_json
from utils.errors import DatasetError, DomainError


def small_manifest(family="euclidean", **parameters):
    """Manifiesto sobre una carta pequeña."""
    chart = {'r_inner': 1.0, 'r_outer': 4.0, 'nodes_per_axis': 17, 'fd_order': 4}
    return DatasetManifest(n=3, family=family, parameters=parameters, chart=chart)


class TestManifest:
    """
    Tests de validación del manifiesto.
    """

    def test_defaults(self):
        manifest = DatasetManifest().validate()
        assert manifest.decay == DEFAULT_DECAY_TYPE
        assert manifest.convention == "paper"
        weight = manifest.decay_weight()
        assert weight.q1 is not None

    def test_default_decay_other_dimensions(self):
        decay = default_decay(4)
        assert decay['q'] < 2.0
        assert decay['p'] == 5.0

    def test_from_dict_ignores_unknown_keys(self):
        payload = small_manifest("schwarzschild", m=2.0).to_dict()
        payload['comentario'] = "sin uso"
        manifest = DatasetManifest.from_dict(payload)
        assert manifest.parameters == {'m': 2.0}
        assert manifest.chart['nodes_per_axis'] == 17

    def test_schema_and_convention(self):
        manifest = small_manifest()
        manifest.schema_version = 2
        with pytest.raises(DatasetError, match="manifest-mismatch"):
            manifest.validate()
        manifest = small_manifest()
        manifest.convention = "k"
        with pytest.raises(DatasetError, match="convention-not-paper"):
            manifest.validate()

    def test_invalid_parameters(self):
        with pytest.raises(DatasetError, match="invalid-parameters"):
            small_manifest("kerr").validate()
        with pytest.raises(DatasetError, match="invalid-parameters"):
            small_manifest("schwarzschild", m=-1.0).validate()
        with pytest.raises(DatasetError, match="invalid-parameters"):
            small_manifest("conformal", amplitude=1.0, power=0.0).validate()
        with pytest.raises(DatasetError, match="invalid-parameters"):
            small_manifest("perturbed", base="perturbed").validate()
        with pytest.raises(DatasetError, match="invalid-parameters"):
            small_manifest("perturbed", base="euclidean", epsilon=-1.0).validate()

    def test_invalid_chart(self):
        manifest = small_manifest()
        manifest.chart = {'r_inner': 1.0, 'r_outer': 4.0}
        with pytest.raises(DatasetError, match="invalid-parameters"):
            manifest.validate()
        manifest.chart = {'r_inner': 1.0, 'r_outer': 4.0, 'nodes_per_axis': 3}
        with pytest.raises(DatasetError, match="invalid-parameters"):
            manifest.validate()

    def test_bowen_york_dimension(self):
        chart = {'r_inner': 1.0, 'r_outer': 4.0, 'nodes_per_axis': 9, 'fd_order': 2}
        manifest = DatasetManifest(n=4, family="bowen_york", parameters={'P': [0.0, 0.0, 0.0, 0.5]}, chart=chart)
        with pytest.raises(DatasetError, match="unsupported-dimension-for-family"):
            manifest.validate()


class TestGenerators:
    """
    Tests de la generación de familias a partir del manifiesto.
    """

    def test_generate_family(self):
        ids = generate(small_manifest("schwarzschild", m=2.0))
        assert ids.metadata['family'] == 'schwarzschild'
        assert ids.g.is_analytic
        assert ids.describe()['backend'] == 'analytic'

    def test_external_cannot_be_generated(self):
        with pytest.raises(DatasetError, match="invalid-parameters"):
            generate(small_manifest("external"))

    def test_perturbed_is_reproducible(self):
        manifest = small_manifest("perturbed", base="euclidean", seed=3, epsilon=0.05)
        manifest.chart = {'r_inner': 1.0, 'r_outer': 6.0, 'nodes_per_axis': 25, 'fd_order': 2}
        first, second = generate(manifest), generate(manifest)
        np.testing.assert_array_equal(first.g.values, second.g.values)
        np.testing.assert_array_equal(first.pi.values, second.pi.values)
        assert first.metadata['epsilon'] == 0.05
        assert np.max(np.abs(first.g.values - np.eye(3).reshape(3, 3, 1, 1, 1))) > 0

    def test_perturbed_support_outside_band(self):
        chart = make_chart(3, 1.0, 6.0, 25, 2)
        with pytest.raises(DatasetError, match="invalid-parameters"):
            perturbed(euclidean(chart), support=(5.9, 1.0))

    def test_perturbed_rejects_unresolved_bump(self):
        """
        Un chichón de radio menor que dos pasos de malla no tocaría ningún nodo.
        """
        chart = make_chart(3, 1.0, 6.0, 25, 2)
        with pytest.raises(DomainError, match="insufficient-resolution"):
            perturbed(euclidean(chart), support=(3.5, 0.4))

    def test_perturbed_on_coarse_chart(self):
        chart = make_chart(3, 1.0, 4.0, 17, 4)
        with pytest.raises(DomainError, match="insufficient-resolution"):
            perturbed(euclidean(chart))

    def test_gaussian_bump_is_positive(self):
        chart = make_chart(3, 1.0, 4.0, 17)
        bump = gaussian_bump(chart, 1.0)
        assert np.all(bump.values > 0)
        assert bump.values[chart.index_of([1.0, 0.0, 0.0])] == pytest.approx(np.exp(-0.5))


class TestContainer:
    """
    Tests de guardado y carga de datasets en disco.
    """

    @pytest.fixture
    def saved(self, tmp_path):
        manifest = small_manifest("schwarzschild", m=1.0)
        ids = generate(manifest)
        directory = save(ids, manifest, tmp_path / "schwarzschild")
        return ids, directory

    def test_save_and_load(self, saved):
        ids, directory = saved
        assert (directory / "manifest.json").exists()
        assert len(list(directory.glob("*.f64"))) == 12
        loaded, manifest = load(directory)
        np.testing.assert_array_equal(loaded.g.values, ids.g.values)
        np.testing.assert_array_equal(loaded.pi.values, ids.pi.values)
        assert loaded.chart == ids.chart
        assert loaded.metadata['backend'] == 'grid'
        assert manifest.family == 'schwarzschild'

    def test_truncated_component(self, saved):
        _, directory = saved
        component = directory / "g_00.f64"
        data = component.read_bytes()
        component.write_bytes(data[:-16])
        with pytest.raises(DatasetError, match="io-error"):
            load(directory)

    def test_shape_mismatch(self, saved):
        _, directory = saved
        payload = load_json(str(directory / "manifest.json"))
        payload['arrays']['g_01']['shape'] = [9, 9, 9]
        save_json(payload, str(directory / "manifest.json"))
        with pytest.raises(DatasetError, match="manifest-mismatch"):
            load(directory)

    def test_missing_component(self, saved):
        _, directory = saved
        payload = load_json(str(directory / "manifest.json"))
        del payload['arrays']['pi_12']
        save_json(payload, str(directory / "manifest.json"))
        with pytest.raises(DatasetError, match="manifest-mismatch"):
            load(directory)

    def test_foreign_convention(self, saved):
        _, directory = saved
        payload = load_json(str(directory / "manifest.json"))
        payload['convention'] = "k"
        save_json(payload, str(directory / "manifest.json"))
        with pytest.raises(DatasetError, match="convention-not-paper"):
            load(directory)

    def test_missing_directory(self, tmp_path):
        with pytest.raises(DatasetError, match="io-error"):
            load(tmp_path / "no_existe")

    def test_dimension_mismatch_on_save(self, tmp_path):
        chart = make_chart(3, 1.0, 4.0, 17)
        with pytest.raises(DatasetError, match="manifest-mismatch"):
            save(schwarzschild(chart), DatasetManifest(n=4), tmp_path / "fallo")


class TestReports:
    """
    Tests del acumulador de verificaciones y de la tabla de convergencia.
    """

    def test_report_verdicts(self):
        report = CheckReport("prueba")
        assert report.add('error', 1e-4, 1e-3)
        assert report.add('margen', -1e-6, 1e-5, comparison='ge')
        assert report.add('informativo', 42.0, comparison='info')
        assert report.passed
        assert report.exit_code == 0
        assert not report.add('fallo', 1.0, 1e-3)
        assert report.exit_code == 1

    def test_report_serialization(self):
        report = CheckReport("prueba")
        report.add('valor', 0.5, comparison='info')
        report.extra('detalle', {'E': np.float64(1.0)})
        payload = json.loads(report.to_json())
        assert payload['command'] == 'prueba'
        assert payload['checks'][0]['tolerance'] is None
        assert payload['detalle'] == {'E': 1.0}
        assert report.to_text().startswith("prueba: OK (1/1")

    def test_empty_report_passes(self):
        report = CheckReport("vacio")
        assert report.passed
        assert report.to_text() == "vacio: OK (0/0 verificaciones)"

    def test_convergence_table(self):
        table = convergence_table([0.5, 0.25, 0.125], [1e-2, 2.5e-3, 6.25e-4])
        assert list(table.columns) == ['h', 'error', 'rate']
        assert np.isnan(table['rate'].iloc[0])
        np.testing.assert_allclose(table['rate'].iloc[1:], 2.0)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
