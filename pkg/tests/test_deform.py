"""
Tests unitarios para la deformación de datos iniciales: mapa de
resolución T, deformación con DEC estricta y tamaño de la deformación.
"""

import pytest
import numpy as np
from pathlib import Path
import sys

# Agregar el directorio src al path para importar módulos
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from constraints import constraint_map, mass_current
from data.generators import euclidean, schwarzschild
from deform import (DeformConfig, deform_to_target, strict_dec_deform, trust_distance, verify_deform_size)
from fields import Field, compact_bump, make_chart
from utils.config import get_solver_config
from utils.errors import DomainError, SolverError


@pytest.fixture
def chart():
    return make_chart(3, 1.0, 6.0, 33, 2)


@pytest.fixture
def bump(chart):
    return Field.from_source(chart, compact_bump((3.5, 0.0, 0.0), 1.0))


class TestDeformToTarget:
    """
    Tests del Newton sobre el mapa de resolución T.
    """

    def test_identity_target(self, chart):
        """
        Con objetivo Φ̄(g, π) el residuo inicial ya es nulo.
        """
        base = euclidean(chart)
        solution = deform_to_target(base, constraint_map(base, None, 'modified'))
        assert solution.newton_iters == 1
        assert solution.residual_norm == 0.0
        assert all(c == 0.0 for c in solution.coefficients)
        assert solution.u.max_abs() == 0.0

    def test_small_target(self, chart, bump):
        base = euclidean(chart)
        target = (Field(chart, (0, 0), 2e-3 * bump.values), Field.zeros(chart, (0, 1)))
        solution = deform_to_target(base, target)
        assert solution.residual_norm <= 1e-6
        assert solution.newton_iters <= 10
        history = solution.residual_history
        assert history[-1] < history[0]
        assert set(solution.to_dict()) >= {'newton_iters', 'residual_norm', 'coefficients', 'max_conformal_factor'}

    def test_newton_contraction_improves(self, chart, bump):
        """
        Cola cuadrática: cada paso contrae el residuo más que el anterior.
        """
        base = euclidean(chart)
        target = (Field(chart, (0, 0), 2e-3 * bump.values), Field.zeros(chart, (0, 1)))
        history = deform_to_target(base, target).residual_history
        assert len(history) >= 3
        for previous, current, following in zip(history, history[1:], history[2:]):
            assert following * previous <= current ** 2

    def test_target_too_large(self, chart):
        base = euclidean(chart)
        target = (Field(chart, (0, 0), np.full(chart.shape, 1e3)), Field.zeros(chart, (0, 1)))
        assert trust_distance(base, target) > DeformConfig().trust_radius
        with pytest.raises(SolverError, match="target-too-large"):
            deform_to_target(base, target)

    def test_target_on_other_chart(self, chart):
        other = make_chart(3, 1.0, 6.0, 17, 2)
        target = (Field.zeros(other), Field.zeros(other, (0, 1)))
        with pytest.raises(DomainError, match="invalid-radii"):
            deform_to_target(euclidean(chart), target)

    def test_unresolved_bumps(self):
        """
        Con h = 1 los chichones de orlado no caben en la banda segura.
        """
        coarse = make_chart(3, 1.0, 6.0, 13, 2)
        base = euclidean(coarse)
        with pytest.raises(DomainError, match="insufficient-resolution"):
            deform_to_target(base, constraint_map(base, None, 'modified'))

    def test_config_from_dict(self):
        config = DeformConfig.from_dict({'max_iter': 5, 'tol': 1e-8, 'unknown': 1})
        assert config.max_iter == 5
        assert config.tol == 1e-8
        assert config.trust_radius == DeformConfig().trust_radius

    def test_config_from_solver_settings(self, monkeypatch):
        monkeypatch.setenv("ADM_TOOLKIT_THREADS", "2")
        settings = get_solver_config()
        assert settings['threads'] == 2
        config = DeformConfig.from_dict(settings)
        assert config.gmres_rtol == settings['gmres_rtol']
        assert config.trust_radius == settings['trust_radius']


class TestStrictDec:
    """
    Tests de la deformación hacia Φ̄(g, π) + (2λ(μ + φ), 0).
    """

    @pytest.mark.parametrize("lam", [1e-4, 1e-3])
    def test_euclidean_gains_mass_density(self, chart, bump, lam):
        """
        Sobre (δ, 0) el objetivo es (2λφ, 0): la densidad deformada es μ̄ = λφ.
        """
        deformed, report = strict_dec_deform(euclidean(chart), lam, bump)
        solution = report.solution
        assert solution.newton_iters <= 10
        assert solution.residual_norm <= 1e-6
        mask = chart.annulus_mask(0)
        mu_bar = mass_current(deformed).mu.values
        np.testing.assert_allclose(mu_bar[mask], lam * bump.values[mask], atol=1e-6)
        assert report.margin_verdict.passed
        assert not report.degenerate
        assert deformed.metadata['deformed']

    @pytest.mark.parametrize("lam", [1e-4, 1e-3])
    def test_schwarzschild_strict_dec(self, chart, bump, lam):
        _, report = strict_dec_deform(schwarzschild(chart, 1.0), lam, bump)
        solution = report.solution
        assert solution.newton_iters <= 10
        assert solution.residual_norm <= 1e-6
        assert report.margin_verdict.passed
        assert report.consequence_verdict.passed

    def test_zero_lambda_is_degenerate(self, chart, bump):
        deformed, report = strict_dec_deform(euclidean(chart), 0.0, bump)
        assert report.degenerate
        assert report.solution.newton_iters == 1
        assert verify_deform_size(report.solution, 0.0) == 0.0
        assert report.to_dict()['lambda'] == 0.0

    def test_deformation_size_ratio(self, chart, bump):
        _, report = strict_dec_deform(euclidean(chart), 1e-3, bump)
        ratio = verify_deform_size(report.solution, 1e-3)
        assert 0.0 < ratio < np.inf

    @pytest.mark.parametrize("family", ["euclidean", "schwarzschild"])
    def test_size_over_lambda_is_stable(self, chart, bump, family):
        """
        ‖deformación‖/λ apenas cambia entre λ = 1e-4 y λ = 1e-3.
        """
        base = euclidean(chart) if family == "euclidean" else schwarzschild(chart, 1.0)
        ratios = []
        for lam in (1e-4, 1e-3):
            _, report = strict_dec_deform(base, lam, bump)
            ratios.append(verify_deform_size(report.solution, lam))
        assert ratios[1] == pytest.approx(ratios[0], rel=0.2)

    def test_invalid_inputs(self, chart, bump):
        base = euclidean(chart)
        with pytest.raises(DomainError, match="invalid-mode"):
            strict_dec_deform(base, -1e-3, bump)
        with pytest.raises(DomainError, match="invalid-bump"):
            strict_dec_deform(base, 1e-3, bump * -1.0)
        with pytest.raises(DomainError, match="invalid-bump"):
            strict_dec_deform(base, 1e-3, Field.zeros(chart))
        with pytest.raises(DomainError, match="invalid-bump"):
            strict_dec_deform(base, 1e-3, Field.zeros(chart, (0, 1)))


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
