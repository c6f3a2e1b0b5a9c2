"""
Tests unitarios para la maquinaria asintótica: problemas de Poisson
auxiliares, ajuste de la expansión, relaciones con (E, P), clasificación
de KIDs y diagnóstico de rigidez.
"""

import pytest
import numpy as np
from pathlib import Path
import sys

# Agregar el directorio src al path para importar módulos
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from asymptotics import (AuxPotentials, ExpansionFit, FlatPoissonOperator, asymptotic_kid_equations, classify_kid,
                         expansion_relations, fit_expansion, fit_radial, fit_window, known_terms,
                         ricci_identity_defect, rigidity_divY_check, rigidity_target, solve_aux_poisson)
from charges import ADMCharges, adm_charges
from constraints import InitialDataSet
from data.generators import euclidean, schwarzschild, static_lapse
from fields import Field, make_chart, radial_profile
from linearized import LapseShiftPair
from utils.errors import DomainError, FitError, SolverError


def charges_of(E, P=(0.0, 0.0, 0.0)):
    """Cargas construidas a mano para las relaciones y la clasificación."""
    return ADMCharges(float(E), tuple(float(p) for p in P), 0.0, 0.0, ())


@pytest.fixture(scope="module")
def schwarzschild_setup():
    """Schwarzschild m = 1 en una carta hasta 16 con 65 nodos por eje, con sus potenciales y cargas."""
    chart = make_chart(3, 1.0, 16.0, 65)
    ids = schwarzschild(chart, 1.0)
    return ids, solve_aux_poisson(ids), adm_charges(ids)


class TestPoissonOperator:
    """
    Tests del Laplaciano plano con Dirichlet interior y Robin exterior.
    """

    @pytest.fixture
    def chart(self):
        return make_chart(3, 1.0, 6.0, 25)

    def test_invalid_outer_condition(self, chart):
        with pytest.raises(DomainError, match="invalid-mode"):
            FlatPoissonOperator(chart, outer="neumann")

    def test_matrix_is_symmetric(self, chart):
        for outer in ("robin", "dirichlet"):
            operator = FlatPoissonOperator(chart, outer)
            assert abs(operator.matrix - operator.matrix.T).max() == 0.0
            assert np.all(operator.matrix.diagonal() < 0)

    def test_zero_source(self, chart):
        operator = FlatPoissonOperator(chart)
        solution = operator.solve(np.zeros(chart.shape))
        assert not np.any(solution)

    def test_solve_residual(self, chart):
        operator = FlatPoissonOperator(chart)
        r = np.where(chart.radius > 0, chart.radius, 1.0)
        source = np.where(operator.mask, r ** -4, 0.0)
        solution = operator.solve(source)
        assert operator.residual(solution, source) < 1e-6
        assert np.all(solution[~operator.mask] == 0.0)

    def test_nondecaying_source(self, chart):
        """
        π = r²δ produce una fuente tr₀π que crece hacia fuera.
        """
        pi = Field(chart, (0, 2), np.einsum('ij,...->ij...', np.eye(3), chart.radius ** 2), symmetric=True)
        ids = InitialDataSet(chart, Field.euclidean(chart), pi)
        with pytest.raises(SolverError, match="source-nondecaying"):
            solve_aux_poisson(ids)


class TestRadialFits:
    """
    Tests de la ventana de ajuste y de los mínimos cuadrados radiales.
    """

    @pytest.fixture
    def chart(self):
        return make_chart(3, 1.0, 16.0, 33)

    def test_exact_recovery(self):
        radii = np.linspace(4.0, 12.0, 6)
        values = 2.0 - 3.0 / radii + 0.7 * radii ** -1.9
        coefficients = fit_radial(radii, values, [0.0, -1.0, -1.9])
        np.testing.assert_allclose(coefficients, [2.0, -3.0, 0.7], atol=1e-10)

    def test_fit_errors(self):
        radii = [4.0, 6.0, 8.0]
        with pytest.raises(FitError, match="window-too-small"):
            fit_radial(radii, [1.0, 1.0, 1.0], [0.0, -1.0, -2.0, -3.0])
        with pytest.raises(FitError, match="ill-conditioned-fit"):
            fit_radial(radii, [1.0, 2.0, 3.0], [0.0, 0.0])

    def test_default_window_is_safe(self, chart):
        radii = fit_window(chart)
        inner, outer = chart.safe_radii(2)
        assert len(radii) == 6
        assert inner <= radii[0] < radii[-1] <= outer

    def test_window_validation(self, chart):
        with pytest.raises(DomainError, match="radii-out-of-chart"):
            fit_window(chart, (1.0, 8.0))
        with pytest.raises(FitError, match="window-too-small"):
            fit_window(chart, count=2)


class TestAuxPotentials:
    """
    Tests de los potenciales φ, V y del coeficiente β.
    """

    def test_euclidean_potentials_vanish(self):
        chart = make_chart(3, 1.0, 16.0, 33)
        aux = solve_aux_poisson(euclidean(chart))
        assert aux.phi.max_abs() == 0.0
        assert aux.V.max_abs() == 0.0
        assert aux.beta == pytest.approx(0.0, abs=1e-12)
        assert len(aux.components) == 3

    def test_schwarzschild_beta(self, schwarzschild_setup):
        """
        β = 2(n−1)E/(n−2) = 4 para m = 1.
        """
        _, aux, _ = schwarzschild_setup
        assert aux.beta == pytest.approx(4.0, rel=5e-2)
        assert aux.phi.max_abs() == 0.0
        for value in aux.residuals.values():
            assert value < 1e-6

    def test_known_terms(self):
        """
        Con φ = x₁ y V = 0: f conocido = b₁/(2(n−1)), X conocido = (2/(n−1))a e₁.
        """
        chart = make_chart(3, 1.0, 4.0, 17)
        aux = AuxPotentials(Field(chart, (0, 0), chart.coords[0].copy()), Field.zeros(chart, (1, 0)), 0.0, {})
        f_known, X_known = known_terms(aux, 2.0, (1.0, 0.0, 0.0))
        np.testing.assert_allclose(f_known, 0.25, atol=1e-10)
        np.testing.assert_allclose(X_known[0], 2.0, atol=1e-10)
        np.testing.assert_allclose(X_known[1:], 0.0, atol=1e-10)


class TestExpansion:
    """
    Tests del ajuste de (a, b, A, B) y de sus relaciones con las cargas.
    """

    @pytest.fixture
    def chart(self):
        return make_chart(3, 1.0, 16.0, 33)

    def test_synthetic_lapse(self, chart):
        """
        f = 1 + 5r⁻¹ + 0.3r^{−1.6} sobre datos euclídeos: a = 1, A = 5.
        """
        def profile(r):
            return (1.0 + 5.0 / r + 0.3 * r ** -1.6,
                    -5.0 / r ** 2 - 0.48 * r ** -2.6,
                    10.0 / r ** 3 + 1.248 * r ** -3.6)

        ids = euclidean(chart)
        pair = LapseShiftPair(Field.from_source(chart, radial_profile(profile)), Field.zeros(chart, (0, 1)))
        fit = fit_expansion(pair, ids, solve_aux_poisson(ids), q1=0.6)
        assert fit.a == pytest.approx(1.0, abs=1e-8)
        assert fit.A == pytest.approx(5.0, abs=2e-2)
        np.testing.assert_allclose(fit.b, 0.0, atol=1e-12)
        np.testing.assert_allclose(fit.B, 0.0, atol=1e-12)
        # El resto 0.3r^{−1.6} pesado por r^{1.6}
        assert fit.residual_norm == pytest.approx(0.3, rel=1e-6)
        assert set(fit.to_dict()) == {'a', 'b', 'A', 'B', 'residual_norm', 'radii_window'}

    def test_translation_on_euclidean(self, chart):
        ids = euclidean(chart)
        pair = LapseShiftPair.translation(chart, 1.0, (0.5, 0.0, 0.0))
        fit = fit_expansion(pair, ids, solve_aux_poisson(ids))
        assert fit.a == pytest.approx(1.0, abs=1e-10)
        np.testing.assert_allclose(fit.b, (0.5, 0.0, 0.0), atol=1e-10)
        assert fit.A == pytest.approx(0.0, abs=1e-8)
        relations = expansion_relations(fit, charges_of(0.0))
        assert relations.all_passed

    def test_schwarzschild_static_lapse(self, schwarzschild_setup):
        """
        f = (1 − m/2r)/(1 + m/2r): a = 1, A = −aE y la clasificación cae en el caso 1.
        """
        ids, aux, charges = schwarzschild_setup
        fit = fit_expansion(static_lapse(ids.chart, 1.0), ids, aux, q1=1.0)
        assert fit.a == pytest.approx(1.0, abs=1e-3)
        assert fit.A == pytest.approx(-1.0, abs=1e-2)
        relations = expansion_relations(fit, charges)
        assert relations.all_passed
        kid = classify_kid(fit.a, fit.b, charges, tolerance=1e-2)
        assert kid.case == 1
        assert kid.holds

    def test_relations_detect_wrong_coefficient(self):
        fit = ExpansionFit(1.0, (0.0, 0.0, 0.0), 0.5, (0.0, 0.0, 0.0), 0.0, (4.0, 8.0))
        relations = expansion_relations(fit, charges_of(1.0))
        assert relations.defects['A'] == pytest.approx(1.5)
        assert not relations.passed['A']
        assert relations.passed['B']
        assert not relations.all_passed

    def test_relations_with_momentum(self):
        """
        n = 3, a = 1, P = (0, 0, 0.1), E = 1: b = −2P/E, A = −E + b·P/2, B = 8aP.
        """
        P = np.array([0.0, 0.0, 0.1])
        b = -2.0 * P
        fit = ExpansionFit(1.0, tuple(b), -1.0 + float(b @ P) / 2.0, tuple(8.0 * P), 0.0, (4.0, 8.0))
        relations = expansion_relations(fit, charges_of(1.0, P))
        assert relations.all_passed
        assert relations.defects['A'] == pytest.approx(0.0, abs=1e-14)
        assert relations.defects['B'] == pytest.approx(0.0, abs=1e-14)
        assert relations.defects['proportionality'] == pytest.approx(0.0, abs=1e-14)
        assert relations.defects['B_momentum'] == pytest.approx(0.0, abs=1e-14)


class TestClassification:
    """
    Tests de los tres casos de la clasificación de KIDs asintóticos.
    """

    def test_case_one(self):
        result = classify_kid(1.0, (0.0, 0.0, -0.2), charges_of(1.0, (0.0, 0.0, 0.1)))
        assert result.case == 1
        assert result.holds
        bad = classify_kid(1.0, (0.0, 0.0, 0.2), charges_of(1.0, (0.0, 0.0, 0.1)))
        assert not bad.holds
        assert bad.defect == pytest.approx(0.4)

    def test_case_two(self):
        assert classify_kid(0.0, (0.0, 0.0, 0.0), charges_of(1.0)).holds
        result = classify_kid(0.0, (1.0, 0.0, 0.0), charges_of(1.0))
        assert result.case == 2
        assert not result.holds

    def test_case_three(self):
        assert classify_kid(1.0, (1.0, 0.0, 0.0), charges_of(0.0)).holds
        result = classify_kid(1.0, (0.0, 0.0, 0.0), charges_of(0.0, (0.0, 0.5, 0.0)))
        assert result.case == 3
        assert result.defect == pytest.approx(0.5)
        assert set(result.to_dict()) == {'case', 'statement', 'defect', 'holds'}


class TestDiagnostics:
    """
    Tests de la identidad de Ricci, las ecuaciones asintóticas y la rigidez.
    """

    @pytest.fixture
    def chart(self):
        return make_chart(3, 1.0, 6.0, 49)

    def test_euclidean_residuals_vanish(self):
        chart = make_chart(3, 1.0, 16.0, 33)
        ids = euclidean(chart)
        aux = solve_aux_poisson(ids)
        assert ricci_identity_defect(ids, aux).norm < 1e-10
        equations = asymptotic_kid_equations(ids, LapseShiftPair.translation(chart, 1.0, (0.0, 1.0, 0.0)),
                                             1.0, (0.0, 1.0, 0.0))
        assert equations.lapse.norm < 1e-10
        assert equations.shift.norm < 1e-10
        assert equations.lapse.rate > 3.0

    def test_rigidity_target_values(self, chart):
        target = rigidity_target(chart, 1.0)
        index = chart.index_of([3.0, 0.0, 0.0])
        # ρ = |x| = 3: 2n(n−2)Eρ⁴|x|^{−n−2} = 6·81/243
        assert target[index] == pytest.approx(2.0)
        assert target[chart.index_of([0.0, 0.0, 3.0])] == 0.0

    def test_harmonic_pure_trace_gives_zero(self, chart):
        """
        ω = sδ' con Δ′s = 0 anula Y_B idénticamente.
        """
        s = chart.coords[0] ** 2 - chart.coords[1] ** 2
        values = np.zeros((3, 3) + chart.shape)
        values[0, 0] = s
        values[1, 1] = s
        omega = Field(chart, (2, 0), values, symmetric=True)
        check = rigidity_divY_check(omega, 0.0, (2.5, 4.0))
        assert check.absolute < 1e-9

    def test_rigidity_closed_form(self, chart):
        """
        ω_AB = 4E∂_A∂_B F con F = r − z ln(z + r) cumple Δ′ω_AB = 4E∂_A∂_B r⁻¹.
        """
        E = 0.7
        x, y, z = chart.coords
        r = np.where(chart.radius > 0, chart.radius, 1.0)
        s = np.where(z + r > 1e-12, z + r, 1.0)
        planar = (x, y)
        values = np.zeros((3, 3) + chart.shape)
        for A in range(2):
            for B in range(2):
                values[A, B] = 4.0 * E * (float(A == B) / s - planar[A] * planar[B] / (r * s ** 2))
        omega = Field(chart, (2, 0), values, symmetric=True)
        check = rigidity_divY_check(omega, E, (2.5, 4.0))
        assert check.defect < 10.0 * chart.spacing ** 2
        assert check.defect < 5e-2
        assert check.slab == (2.5, 4.0)

    def test_rigidity_validation(self, chart):
        with pytest.raises(DomainError, match="invalid-dimension"):
            rigidity_divY_check(Field.zeros(chart, (1, 0)), 1.0, (2.5, 4.0))
        with pytest.raises(DomainError, match="radii-out-of-chart"):
            rigidity_divY_check(Field.zeros(chart, (2, 0), symmetric=True), 1.0, (20.0, 30.0))


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
