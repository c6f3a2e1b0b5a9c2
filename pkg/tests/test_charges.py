"""
Tests unitarios para las cargas ADM, la extrapolación de flujos y las
identidades de flujo sobre esferas.
"""

import pytest
import numpy as np
from pathlib import Path
import sys

# Agregar el directorio src al path para importar módulos
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from charges import (adm_charges, beta_flux, default_radii, extrapolate_flux, flux_identity_suite, resolve_radii,
                     ricci_energy_flux)
from data.generators import bowen_york, conformal, euclidean, random_rotation, rotate_dataset, schwarzschild
from fields import Field, make_chart, random_polynomial
from utils.errors import DomainError, FitError, TensorError


class TestAdmCharges:
    """
    Tests de energía y momento sobre las familias exactas.
    """

    @pytest.fixture
    def chart(self):
        return make_chart(3, 1.0, 16.0, 33)

    def test_schwarzschild_reference_radii(self):
        """
        Schwarzschild m = 1, radios {4, 8, 16} en una carta hasta 32: E = 1 ± 10⁻³.
        """
        chart = make_chart(3, 1.0, 32.0, 33)
        charges = adm_charges(schwarzschild(chart, 1.0), [4.0, 8.0, 16.0])
        assert charges.E == pytest.approx(1.0, abs=1e-3)
        assert charges.momentum_norm <= 1e-6
        assert charges.radii_used == (4.0, 8.0, 16.0)
        assert charges.E_err >= 0 and charges.P_err >= 0

    def test_schwarzschild_flux_series(self, chart):
        """
        El flujo por radio es m(1 + m/2r)³ y la extrapolación con radios por defecto lo lleva a m.
        """
        m = 2.0
        charges = adm_charges(schwarzschild(chart, m))
        radii = np.asarray(charges.radii_used)
        np.testing.assert_allclose(charges.energy_series, m * (1.0 + m / (2.0 * radii)) ** 3, rtol=1e-10)
        assert charges.E == pytest.approx(m, abs=1e-8)

    def test_bowen_york_momentum(self, chart):
        charges = adm_charges(bowen_york(chart, (0.0, 0.0, 0.5)))
        np.testing.assert_allclose(charges.P, (0.0, 0.0, 0.5), atol=1e-6)
        assert charges.E == pytest.approx(0.0, abs=1e-12)

    def test_euclidean_has_no_charges(self, chart):
        charges = adm_charges(euclidean(chart))
        assert charges.E == 0.0
        assert charges.momentum_norm == 0.0

    def test_conformal_tail_energy(self, chart):
        """
        Con k = n − 2 la cola A·r^{−1} aporta E = 2A.
        """
        charges = adm_charges(conformal(chart, 0.5, 1.0))
        assert charges.E == pytest.approx(1.0, abs=1e-6)

    def test_rotation_invariance(self, chart):
        """
        Rotar Bowen–York rota P y conserva E.
        """
        ids = bowen_york(chart, (0.1, -0.2, 0.5))
        R = random_rotation(3, 7)
        rotated = adm_charges(rotate_dataset(ids, R))
        original = adm_charges(ids)
        np.testing.assert_allclose(rotated.P, R @ np.asarray(original.P), atol=1e-8)
        assert rotated.E == pytest.approx(original.E, abs=1e-10)

    def test_to_dict(self, chart):
        payload = adm_charges(euclidean(chart)).to_dict()
        assert set(payload) >= {'E', 'P', 'E_err', 'P_err', 'radii_used'}

    def test_radii_validation(self, chart):
        with pytest.raises(FitError, match="too-few-radii"):
            adm_charges(euclidean(chart), [4.0, 8.0])
        with pytest.raises(DomainError, match="radii-out-of-chart"):
            adm_charges(euclidean(chart), [4.0, 8.0, 20.0])

    def test_default_radii_inside_chart(self, chart):
        radii = default_radii(chart)
        assert radii == sorted(radii)
        assert all(chart.r_inner < r < chart.r_outer for r in radii)
        assert resolve_radii(chart, [8.0, 2.0, 4.0]) == [2.0, 4.0, 8.0]


class TestCrossChecks:
    """
    Tests de la energía vía Ricci y del flujo β.
    """

    def test_beta_flux_schwarzschild(self):
        """
        β = 2(n−1)E/(n−2) = 4 para m = 1.
        """
        chart = make_chart(3, 1.0, 16.0, 33)
        estimate = beta_flux(schwarzschild(chart, 1.0))
        assert estimate.limit == pytest.approx(4.0, abs=1e-6)

    def test_ricci_energy_schwarzschild(self):
        chart = make_chart(3, 1.0, 16.0, 65)
        estimate = ricci_energy_flux(schwarzschild(chart, 1.0), [3.0, 4.0, 6.0, 8.0, 12.0])
        assert estimate.limit == pytest.approx(1.0, abs=1e-2)

    def test_ricci_energy_requires_three_dimensions(self):
        chart = make_chart(4, 1.0, 8.0, 9, 2)
        with pytest.raises(DomainError, match="unsupported-dimension"):
            ricci_energy_flux(euclidean(chart), [2.0, 3.0, 4.0])


class TestExtrapolation:
    """
    Tests de la extrapolación radial de flujos.
    """

    def test_exact_model(self):
        radii = [2.0, 4.0, 8.0, 16.0]
        limit, error = extrapolate_flux([(r, 3.0 + 2.0 / r - 0.5 / r ** 2) for r in radii], model_rate=1.0)
        assert limit == pytest.approx(3.0, abs=1e-10)
        assert error < 1e-8

    def test_three_radii_report_fit_deviation(self):
        """
        Con 3 radios el error incluye la desviación del ajuste de una sola corrección.
        """
        radii = np.array([2.0, 4.0, 8.0])
        values = 3.0 + 2.0 / radii - 4.0 / radii ** 2
        limit, error = extrapolate_flux(list(zip(radii, values)), model_rate=1.0)
        assert limit == pytest.approx(3.0, abs=1e-10)
        line = np.polyval(np.polyfit(1.0 / radii, values, 1), 1.0 / radii)
        assert error >= np.max(np.abs(line - values)) > 1e-3

    def test_three_radii_on_model(self):
        radii = [2.0, 4.0, 8.0]
        limit, error = extrapolate_flux([(r, 3.0 + 2.0 / r) for r in radii], model_rate=1.0)
        assert limit == pytest.approx(3.0, abs=1e-10)
        assert error < 1e-10

    def test_constant_series(self):
        limit, error = extrapolate_flux([(2.0, 1.5), (4.0, 1.5), (8.0, 1.5)])
        assert limit == 1.5
        assert error == 0.0

    def test_too_few_radii(self):
        with pytest.raises(FitError, match="too-few-radii"):
            extrapolate_flux([(2.0, 1.0), (4.0, 1.1)])

    def test_degenerate_radii(self):
        with pytest.raises(FitError, match="degenerate-fit"):
            extrapolate_flux([(2.0, 1.0), (2.0, 1.1), (2.0, 1.2)])


class TestFluxIdentities:
    """
    Tests de las identidades de flujo para tensores y escalares sembrados.
    """

    @pytest.fixture
    def chart(self):
        return make_chart(3, 1.0, 4.0, 17)

    def test_random_tensor(self, chart):
        rng = np.random.default_rng(42)
        T = Field.from_source(chart, random_polynomial(3, (3, 3), 3, rng), (2, 0))
        report = flux_identity_suite(T, 2.5)
        assert report.mode == 'tensor'
        assert report.max_defect < 1e-8 * 2.5 ** 3

    def test_random_scalar(self, chart):
        rng = np.random.default_rng(42)
        f = Field.from_source(chart, random_polynomial(3, (), 4, rng))
        report = flux_identity_suite(f, 2.5)
        assert report.mode == 'scalar'
        assert set(report.defects) == {'laplacian_normal_0', 'laplacian_normal_1', 'laplacian_normal_2',
                                       'radial_laplacian'}
        assert report.max_defect < 1e-8 * 2.5 ** 3

    def test_radius_outside_chart(self, chart):
        with pytest.raises(DomainError, match="radius-out-of-chart"):
            flux_identity_suite(Field.zeros(chart), 5.0)

    def test_vector_rejected(self, chart):
        with pytest.raises(TensorError):
            flux_identity_suite(Field.zeros(chart, (0, 1)), 2.0)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
