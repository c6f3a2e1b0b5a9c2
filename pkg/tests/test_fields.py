"""
Tests unitarios para el paquete de campos: cartas, tipos de decaimiento,
campos tensoriales, derivadas, cuadratura esférica, normas y perfiles.
"""

import pytest
import numpy as np
from pathlib import Path
import sys

# Agregar el directorio src al path para importar módulos
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from fields import (DecayWeight, Field, derivative, flat_divergence, flat_laplacian, gradient, make_chart,
                    random_polynomial, sphere_average, sphere_flux, sphere_flux_estimate, sphere_integral,
                    unit_sphere_area, validate_decay_type, volume_integral, weighted_norm, weighted_sup)
from fields.profiles import compact_bump, radial_profile, radial_ramp, smooth_step
from utils.errors import DomainError, TensorError, ToolkitError


class TestChart:
    """
    Tests de construcción y geometría de cartas exteriores.
    """

    @pytest.fixture
    def chart(self):
        return make_chart(3, 1.0, 8.0, 33)

    def test_spacing_and_shape(self, chart):
        """
        La malla cubre [−R, R]ⁿ con paso 2R/(N − 1).
        """
        assert chart.spacing == pytest.approx(0.5)
        assert chart.shape == (33, 33, 33)
        assert chart.coords.shape == (3, 33, 33, 33)

    @pytest.mark.parametrize("args, code", [
        ((2, 1.0, 8.0, 33), "invalid-dimension"),
        ((3, 0.5, 8.0, 33), "invalid-radii"),
        ((3, 4.0, 2.0, 33), "invalid-radii"),
        ((3, 1.0, 8.0, 7), "insufficient-resolution"),
    ])
    def test_invalid_charts(self, args, code):
        """
        Las cartas inválidas se rechazan con el código correspondiente.
        """
        with pytest.raises(DomainError, match=code):
            make_chart(*args)

    def test_unsupported_fd_order(self):
        with pytest.raises(DomainError, match="insufficient-resolution"):
            make_chart(3, 1.0, 8.0, 33, fd_order=3)

    def test_annulus_mask_excludes_ball(self, chart):
        """
        El anillo nunca contiene nodos con |x| < r_inner.
        """
        for depth in (0, 1, 2):
            mask = chart.annulus_mask(depth)
            assert np.all(chart.radius[mask] >= chart.r_inner)
            assert np.all(chart.radius[mask] <= chart.r_outer)

    def test_refined_shares_nodes(self, chart):
        """
        La carta refinada contiene todos los nodos de la original.
        """
        fine = chart.refined()
        assert fine.spacing == pytest.approx(chart.spacing / 2)
        np.testing.assert_allclose(fine.axis[::2], chart.axis)

    def test_index_of(self, chart):
        idx = chart.index_of([0.0, 0.0, 0.0])
        assert idx == (16, 16, 16)
        assert chart.radius[idx] == pytest.approx(0.0)


class TestDecayType:
    """
    Tests de validación del tipo de decaimiento (p, q, q0, α).
    """

    def test_default_q1(self):
        """
        En n = 3 con q = 0.95 y q0 = 1, q1 = min(1, 0.9, 0.9) = 0.9.
        """
        weight = validate_decay_type(DecayWeight(q=0.95, alpha=0.5, p=4.0, q0=1.0), 3)
        assert weight.q1 == pytest.approx(0.9)

    @pytest.mark.parametrize("weight", [
        DecayWeight(q=0.95, alpha=0.5, p=3.0, q0=1.0),
        DecayWeight(q=0.4, alpha=0.5, p=4.0, q0=1.0),
        DecayWeight(q=1.0, alpha=0.5, p=4.0, q0=1.0),
        DecayWeight(q=0.6, alpha=0.3, p=4.0, q0=1.0),
        DecayWeight(q=0.95, alpha=0.5, p=4.0, q0=0.0),
    ])
    def test_invalid_types(self, weight):
        """
        p ≤ n, q fuera de ((n−2)/2, n−2), q + α ≤ n − 2 o q0 ≤ 0 se rechazan.
        """
        with pytest.raises(DomainError, match="invalid-decay-type"):
            validate_decay_type(weight, 3)


class TestField:
    """
    Tests del contenedor de campos tensoriales.
    """

    @pytest.fixture
    def chart(self):
        return make_chart(3, 1.0, 4.0, 17)

    def test_constant_has_zero_partials(self, chart):
        field = Field.constant(chart, np.eye(3), (2, 0), symmetric=True)
        assert field.values.shape == (3, 3) + chart.shape
        assert np.all(field.partials() == 0)

    def test_symmetric_requires_valence_two(self, chart):
        with pytest.raises(TensorError, match="incompatible-valence"):
            Field(chart, (1, 0), np.zeros((3,) + chart.shape), symmetric=True)

    def test_incompatible_ranks(self, chart):
        """
        Sumar campos de valencias distintas es un error de tensor.
        """
        vector = Field.zeros(chart, (0, 1))
        covector = Field.zeros(chart, (1, 0))
        with pytest.raises(ToolkitError, match="incompatible-valence"):
            _ = vector + covector

    def test_analytic_arithmetic_keeps_source(self, chart):
        """
        La combinación lineal de campos analíticos sigue siendo analítica.
        """
        a = Field.constant(chart, 2.0)
        b = Field.constant(chart, 0.5)
        combined = a - b * 2.0
        assert combined.is_analytic
        np.testing.assert_allclose(combined.values, 1.0)

    def test_on_grid_drops_source(self, chart):
        field = Field.euclidean(chart).on_grid()
        assert not field.is_analytic
        np.testing.assert_allclose(field.values[0, 0], 1.0)


class TestCalculus:
    """
    Tests de derivadas coordenadas analíticas y por diferencias finitas.
    """

    @pytest.fixture
    def chart(self):
        return make_chart(3, 1.0, 4.0, 33)

    def test_grid_derivative_exact_on_cubics(self, chart):
        """
        El estarcido de orden 4 deriva exactamente polinomios de grado 3.
        """
        x = chart.coords
        field = Field(chart, (0, 0), x[0] ** 2 * x[1] + x[2] ** 3)
        d0 = derivative(field, (0,))
        mask = chart.annulus_mask(1)
        np.testing.assert_allclose(d0.values[mask], (2 * x[0] * x[1])[mask], atol=1e-9)

    def test_analytic_derivative_matches_grid(self, chart):
        """
        La derivada exacta de un polinomio aleatorio coincide con la de malla.
        """
        rng = np.random.default_rng(42)
        source = random_polynomial(3, (), 3, rng)
        analytic = Field.from_source(chart, source)
        grid = analytic.on_grid()
        mask = chart.annulus_mask(1)
        for axis in range(3):
            exact = derivative(analytic, (axis,)).values
            approx = derivative(grid, (axis,)).values
            np.testing.assert_allclose(approx[mask], exact[mask], atol=1e-8)

    def test_gradient_appends_covariant_index(self, chart):
        field = Field.zeros(chart, (0, 1))
        grad = gradient(field)
        assert grad.rank == (1, 1)
        assert grad.values.shape == (3, 3) + chart.shape

    def test_flat_laplacian_of_radius_squared(self, chart):
        """
        Δ₀|x|² = 2n.
        """
        field = Field(chart, (0, 0), chart.radius ** 2)
        mask = chart.annulus_mask(2)
        np.testing.assert_allclose(flat_laplacian(field)[mask], 6.0, atol=1e-8)

    def test_flat_divergence_of_position(self, chart):
        """
        div₀ x = n.
        """
        field = Field(chart, (0, 1), chart.coords)
        mask = chart.annulus_mask(1)
        np.testing.assert_allclose(flat_divergence(field)[mask], 3.0, atol=1e-10)

    def test_third_derivative_on_grid_rejected(self, chart):
        field = Field(chart, (0, 0), chart.radius ** 2)
        with pytest.raises(DomainError, match="stencil-out-of-domain"):
            derivative(field, (0, 1, 2))


class TestQuadrature:
    """
    Tests de cuadratura esférica.
    """

    @pytest.fixture
    def chart(self):
        return make_chart(3, 1.0, 8.0, 17)

    def test_unit_sphere_area(self):
        assert unit_sphere_area(2) == pytest.approx(2 * np.pi)
        assert unit_sphere_area(3) == pytest.approx(4 * np.pi)
        assert unit_sphere_area(4) == pytest.approx(2 * np.pi ** 2)

    def test_integral_of_constant(self, chart):
        """
        ∫_{|x|=2} 1 = 16π.
        """
        one = Field.constant(chart, 1.0)
        assert sphere_integral(one, 2.0) == pytest.approx(16 * np.pi, rel=1e-12)
        assert sphere_average(one, 2.0) == pytest.approx(1.0)

    def test_coulomb_flux(self, chart):
        """
        El flujo de x/|x|³ es 4π en cualquier radio.
        """
        field = Field.from_function(chart, lambda x: x / np.sum(x ** 2, axis=0) ** 1.5, (1, 0))
        for radius in (2.0, 5.0):
            assert sphere_flux(field, radius) == pytest.approx(4 * np.pi, rel=1e-10)

    def test_monte_carlo_in_four_dimensions(self):
        """
        En n = 4 la regla es de Monte Carlo y devuelve su error estándar.
        """
        chart = make_chart(4, 1.0, 4.0, 9)
        field = Field.from_function(chart, lambda x: x / np.sqrt(np.sum(x ** 2, axis=0)), (1, 0))
        value, error = sphere_flux_estimate(field, 2.0)
        assert value == pytest.approx(2 * np.pi ** 2 * 8.0, rel=1e-10)
        assert error == pytest.approx(0.0, abs=1e-8)

    def test_radius_out_of_chart(self, chart):
        with pytest.raises(DomainError, match="radius-out-of-chart"):
            sphere_integral(Field.constant(chart, 1.0), 9.0)


class TestNorms:
    """
    Tests de normas ponderadas e integrales de volumen.
    """

    @pytest.fixture
    def chart(self):
        return make_chart(3, 1.0, 8.0, 33)

    def test_weighted_sup_of_power(self, chart):
        """
        sup |x|²·|x|^{−2} = 1.
        """
        values = np.where(chart.radius > 0, 1.0 / np.maximum(chart.radius, 1e-12) ** 2, 0.0)
        assert weighted_sup(values, chart, 2.0) == pytest.approx(1.0)

    def test_volume_integral_of_shell(self, chart):
        """
        La suma nodal aproxima el volumen de la corteza 1 ≤ |x| ≤ 6.
        """
        mask = chart.annulus_mask(0, r_max=6.0)
        volume = volume_integral(np.ones(chart.shape), chart, mask)
        assert volume == pytest.approx(4.0 / 3.0 * np.pi * (6.0 ** 3 - 1.0), rel=5e-2)

    def test_zero_field_norms(self, chart):
        field = Field.zeros(chart, (2, 0), symmetric=True)
        weight = DecayWeight(q=0.95, k=2, alpha=0.5, p=4.0)
        assert weighted_norm(field, weight) == 0.0
        assert weighted_norm(field, weight, mode='sobolev') == 0.0

    @pytest.mark.parametrize("mode", ["holder", "sobolev"])
    def test_norm_is_homogeneous_and_subadditive(self, chart, mode):
        rng = np.random.default_rng(11)
        a = Field.from_source(chart, random_polynomial(3, (3, 3), 2, rng), (2, 0))
        b = Field.from_source(chart, random_polynomial(3, (3, 3), 2, rng), (2, 0))
        weight = DecayWeight(q=0.95, k=2, alpha=0.5, p=4.0)
        norm_a = weighted_norm(a, weight, mode)
        assert norm_a > 0.0
        assert weighted_norm(a * -2.5, weight, mode) == pytest.approx(2.5 * norm_a, rel=1e-10)
        assert weighted_norm(a + b, weight, mode) <= (norm_a + weighted_norm(b, weight, mode)) * (1 + 1e-12)

    def test_sobolev_requires_p(self, chart):
        with pytest.raises(DomainError, match="invalid-decay-type"):
            weighted_norm(Field.constant(chart, 1.0), DecayWeight(q=0.5), mode='sobolev')

    def test_unknown_mode(self, chart):
        with pytest.raises(DomainError, match="invalid-mode"):
            weighted_norm(Field.constant(chart, 1.0), DecayWeight(q=0.5), mode='lebesgue')

    def test_too_many_derivatives(self, chart):
        with pytest.raises(DomainError, match="insufficient-derivatives"):
            weighted_norm(Field.constant(chart, 1.0), DecayWeight(q=0.5, k=3))


class TestProfiles:
    """
    Tests de escalones, rampas y chichones suaves.
    """

    def test_smooth_step_values(self):
        t = np.array([-1.0, 0.0, 0.5, 1.0, 2.0])
        np.testing.assert_allclose(smooth_step(t), [0.0, 0.0, 0.5, 1.0, 1.0])

    def test_smooth_step_derivative(self):
        """
        S' coincide con el cociente incremental centrado.
        """
        t = np.linspace(0.1, 0.9, 9)
        step = 1e-6
        numeric = (smooth_step(t + step) - smooth_step(t - step)) / (2 * step)
        np.testing.assert_allclose(smooth_step(t, 1), numeric, rtol=1e-6)

    def test_compact_bump_support(self):
        bump = compact_bump([3.0, 0.0, 0.0], 1.0)
        points = np.array([[3.0, 4.5, 3.5], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
        values = bump.evaluate(points)
        assert values[0] == pytest.approx(1.0)
        assert values[1] == 0.0
        assert 0.0 < values[2] < 1.0

    def test_radial_ramp_reaches_one(self):
        ramp = radial_ramp(2.0, 4.0)
        points = np.array([[1.0, 3.0, 5.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
        np.testing.assert_allclose(ramp.evaluate(points)[[0, 2]], [0.0, 1.0])
        np.testing.assert_allclose(ramp.evaluate(points, (0,))[[0, 2]], [0.0, 0.0])

    def test_radial_profile_jet(self):
        """
        Los jets de φ(r) = r^{−1} reproducen ∂_a r^{−1} = −x_a r^{−3}.
        """
        source = radial_profile(lambda r: (1.0 / r, -1.0 / r ** 2, 2.0 / r ** 3))
        points = np.array([[1.0, 2.0], [2.0, 0.5], [-1.0, 3.0]])
        r = np.sqrt(np.sum(points ** 2, axis=0))
        for a in range(3):
            np.testing.assert_allclose(source.evaluate(points, (a,)), -points[a] / r ** 3)
        laplacian = sum(source.evaluate(points, (a, a)) for a in range(3))
        np.testing.assert_allclose(laplacian, 0.0, atol=1e-12)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
