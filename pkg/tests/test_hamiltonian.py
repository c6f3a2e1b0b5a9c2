"""
Tests unitarios para el Hamiltoniano modificado: par de referencia,
formas volumétrica y de superficie, primera variación y estacionariedad.
"""

import pytest
import numpy as np
from pathlib import Path
import sys

# Agregar el directorio src al path para importar módulos
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from data.generators import bowen_york, euclidean, schwarzschild
from fields import make_chart
from hamiltonian import (HamiltonianSpec, finite_difference_gradient, hamiltonian_gradient_pairing,
                         hamiltonian_surface_form, hamiltonian_value, reference_pair, stationarity_residual,
                         window_weights)
from linearized import SymPair, bump_direction, seeded_directions
from utils.errors import DomainError, TensorError


class TestReferencePair:
    """
    Tests del par (f₀, X₀) que interpola entre 0 y (a, b).
    """

    @pytest.fixture
    def chart(self):
        return make_chart(3, 1.0, 8.0, 33)

    def test_ramp_values(self, chart):
        pair = reference_pair(2.0, (0.0, 1.0, 0.0), chart, 3.0)
        r = chart.radius
        outside = r >= 3.0
        inside = r <= 1.0
        np.testing.assert_allclose(pair.f.values[outside], 2.0)
        np.testing.assert_allclose(pair.X.values[1][outside], 1.0)
        assert np.max(np.abs(pair.f.values[inside])) == 0.0
        assert pair.asymptote == (2.0, (0.0, 1.0, 0.0))

    def test_invalid_transition_radius(self, chart):
        with pytest.raises(DomainError, match="invalid-transition-radius"):
            reference_pair(1.0, (0.0, 0.0, 0.0), chart, 9.0)
        with pytest.raises(DomainError, match="invalid-transition-radius"):
            reference_pair(1.0, (0.0, 0.0, 0.0), chart, 1.0)

    def test_shift_dimension(self, chart):
        with pytest.raises(TensorError):
            reference_pair(1.0, (0.0, 0.0), chart, 3.0)

    def test_window_weights(self, chart):
        weights = window_weights(chart, 4.0, 1.0)
        r = chart.radius
        np.testing.assert_allclose(weights[r <= 3.0], 1.0)
        np.testing.assert_allclose(weights[r >= 5.0], 0.0)
        assert np.all((weights >= 0.0) & (weights <= 1.0))


class TestHamiltonianValue:
    """
    Tests de las formas volumétrica y de superficie sobre familias exactas.
    """

    def test_euclidean_vanishes(self):
        chart = make_chart(3, 1.0, 8.0, 33)
        base = euclidean(chart)
        spec = HamiltonianSpec.build(base, 1.0, (0.0, 0.0, 0.0), 3.0)
        assert hamiltonian_value(spec, base).value == pytest.approx(0.0, abs=1e-12)
        surface = hamiltonian_surface_form(spec, base)
        assert surface.value == pytest.approx(0.0, abs=1e-12)

    def test_schwarzschild_surface_form(self):
        """
        Con (a, b) = (1, 0): (n−1)ω_{n−1}·2aE = 16π para m = 1.
        """
        chart = make_chart(3, 1.0, 16.0, 33)
        base = schwarzschild(chart, 1.0)
        spec = HamiltonianSpec.build(base, 1.0, (0.0, 0.0, 0.0), 4.75)
        surface = hamiltonian_surface_form(spec, base)
        assert surface.adm_term == pytest.approx(16.0 * np.pi, rel=1e-6)
        assert abs(surface.constraint_term) < 1e-6
        assert surface.value == pytest.approx(16.0 * np.pi, rel=1e-6)

    def test_schwarzschild_volume_form(self):
        chart = make_chart(3, 1.0, 16.0, 65)
        base = schwarzschild(chart, 1.0)
        spec = HamiltonianSpec.build(base, 1.0, (0.0, 0.0, 0.0), 4.75)
        value = hamiltonian_value(spec, base)
        assert value.value == pytest.approx(16.0 * np.pi, rel=2e-2)
        assert len(value.series) == 3
        assert set(value.to_dict()) >= {'value', 'error', 'inner_correction', 'series', 'outer_sensitivity'}

    def test_bowen_york_momentum_term(self):
        """
        Con a = 0 y b = e₃ el término ADM es 8π·P·b = 4π para P* = (0, 0, 0.5).
        """
        chart = make_chart(3, 1.0, 16.0, 65)
        base = bowen_york(chart, (0.0, 0.0, 0.5))
        spec = HamiltonianSpec.build(base, 0.0, (0.0, 0.0, 1.0), 4.75)
        surface = hamiltonian_surface_form(spec, base)
        assert surface.value == pytest.approx(4.0 * np.pi, rel=1e-5)
        volume = hamiltonian_value(spec, base)
        assert volume.value == pytest.approx(4.0 * np.pi, rel=2e-2)
        assert volume.inner_correction == pytest.approx(0.0, abs=1e-12)


class TestVariation:
    """
    Tests de la primera variación y del residuo de estacionariedad.
    """

    @pytest.fixture
    def chart(self):
        return make_chart(3, 1.0, 6.0, 49, 2)

    def test_zero_direction(self, chart):
        spec = HamiltonianSpec.build(euclidean(chart), 1.0, (0.0, 0.0, 0.0), 1.5)
        zero = SymPair.zeros(chart)
        assert hamiltonian_gradient_pairing(spec, zero) == 0.0
        assert finite_difference_gradient(spec, zero) == pytest.approx(0.0, abs=1e-12)

    def test_reference_pair_is_stationary_multiplier(self, chart):
        """
        Fuera de la rampa (f₀, X₀) es constante: DΦ̄*(f₀, X₀) se anula sobre el
        soporte y el residuo con multiplicador (f₀, X₀) es el de la dualidad.
        """
        base = euclidean(chart)
        spec = HamiltonianSpec.build(base, 1.0, (0.0, 0.0, 0.0), 1.5)
        directions = seeded_directions(chart, 3, seed=42)
        for direction in directions:
            assert hamiltonian_gradient_pairing(spec, direction) == pytest.approx(0.0, abs=1e-12)
        assert stationarity_residual(spec, spec.reference, directions) < 1e-9

    def test_constant_lapse_has_no_linear_response(self, chart):
        """
        Con f₀ ≡ 1 sobre el soporte, la parte lineal de la densidad se anula
        nodo a nodo y la derivada por diferencias también.
        """
        spec = HamiltonianSpec.build(euclidean(chart), 1.0, (0.0, 0.0, 0.0), 1.5)
        for direction in seeded_directions(chart, 2, seed=42):
            assert finite_difference_gradient(spec, direction) == pytest.approx(0.0, abs=1e-6)

    def test_gradient_pairing_matches_finite_differences(self, chart):
        """
        Dirección que cruza la rampa de f₀: el emparejamiento con el adjunto
        coincide con la derivada de H por diferencias.
        """
        spec = HamiltonianSpec.build(euclidean(chart), 1.0, (0.0, 0.0, 0.0), 3.0)
        direction = bump_direction(chart, (3.5, 0.0, 0.0), 2.0, np.diag([1.0, -0.5, 0.25]), np.zeros((3, 3)))
        pairing = hamiltonian_gradient_pairing(spec, direction)
        # ventanas planas sobre toda la rampa
        numeric = finite_difference_gradient(spec, direction, window_fractions=(0.7, 0.75, 0.8))
        assert abs(pairing) > 1e-4
        assert numeric == pytest.approx(pairing, rel=1e-3)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
