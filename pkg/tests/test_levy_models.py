# tests/test_levy_models.py
"""
Тесты субординаторов: кумулянты, области θ, плотности Леви, выборка скачков.
"""
import math

import numpy as np
import pytest

from calculations.exceptions import DomainError, UnsupportedModel
from calculations.levy_models import (
    CompoundPoissonExpModel,
    DiracModel,
    PointMass,
    TemperedStableModel,
    cumulant,
    domains,
)


class TestCumulant:
    """Тесты кумулянты κ_L и её производных."""

    def setup_method(self):
        """Базовый набор: c = 0.4, λ = 2."""
        self.cpexp = CompoundPoissonExpModel(c=0.4, lam=2.0)
        self.dirac = DiracModel(a=1.0)
        self.ts = TemperedStableModel(c=1.0, lam=3.0, alpha=0.5)

    def test_cpexp_first_derivative_at_zero(self):
        """κ'(0) = c/λ² = 0.1."""
        assert abs(cumulant(self.cpexp, 0.0, 1) - 0.1) < 1e-15

    def test_cpexp_second_derivative_at_zero(self):
        """κ''(0) = 2c/λ³ = 0.1."""
        assert abs(self.cpexp.cumulant(0.0, 2) - 0.1) < 1e-15

    def test_cumulant_vanishes_at_zero(self):
        """κ(0) = 0 для любой модели."""
        for model in (self.cpexp, self.dirac, self.ts, TemperedStableModel(1.0, 3.0, 0.0)):
            assert model.cumulant(0.0) == 0.0

    def test_dirac_cumulant(self):
        """Dirac(1): κ(1) = e - 1."""
        assert abs(self.dirac.cumulant(1.0) - (math.e - 1.0)) < 1e-15

    def test_dirac_derivatives(self):
        """κ^{(n)}(θ) = aⁿe^{aθ}."""
        dirac = DiracModel(a=2.0)
        assert abs(dirac.cumulant(0.5, 3) - 8.0 * math.e) < 1e-12

    @pytest.mark.parametrize("theta,order", [(0.5, 0), (0.5, 1), (-1.0, 2), (0.9, 3)])
    def test_cpexp_closed_form_matches_quadrature(self, theta, order):
        """Замкнутая форма совпадает с квадратурой определяющего интеграла."""
        closed = self.cpexp.cumulant(theta, order)
        numeric = self.cpexp.quad_cumulant(theta, order)
        assert abs(closed - numeric) < 1e-9 * max(1.0, abs(closed))

    @pytest.mark.parametrize("alpha", [0.0, 0.3, 0.5, 0.9])
    @pytest.mark.parametrize("order", [0, 1, 2])
    def test_tempered_stable_closed_form_matches_quadrature(self, alpha, order):
        """κ^{(n)}(θ) = cΓ(n-α)(λ-θ)^{α-n}, κ через expm1/log1p."""
        model = TemperedStableModel(c=1.0, lam=3.0, alpha=alpha)
        closed = model.cumulant(1.2, order)
        numeric = model.quad_cumulant(1.2, order)
        assert abs(closed - numeric) < 1e-8 * max(1.0, abs(closed))

    def test_dirac_quadrature_is_point_evaluation(self):
        assert abs(self.dirac.quad_cumulant(0.7, 0) - math.expm1(0.7)) < 1e-15

    def test_array_input(self):
        """Массив θ дает массив значений."""
        thetas = np.array([-1.0, 0.0, 0.5])
        values = self.cpexp.cumulant(thetas, 0)
        assert isinstance(values, np.ndarray)
        expected = 0.4 * thetas / (2.0 * (2.0 - thetas))
        assert np.allclose(values, expected, rtol=1e-14, atol=0.0)

    def test_theta_outside_exponential_moments_raises_error(self):
        """θ ≥ Θ_L недопустимо."""
        with pytest.raises(DomainError, match="theta вне области"):
            self.cpexp.cumulant(2.0)
        with pytest.raises(DomainError, match="theta вне области"):
            self.ts.cumulant(np.array([0.0, 3.5]))

    def test_invalid_order_raises_error(self):
        with pytest.raises(DomainError, match="Порядок кумулянты"):
            self.cpexp.cumulant(0.0, 4)


class TestDomains:
    """Тесты областей D_L и D_L^g."""

    def test_cpexp_domains(self):
        """Θ_L = λ = 2, D_L = D_L^g = (-∞, 1)."""
        d = domains(CompoundPoissonExpModel(0.4, 2.0))
        assert d.theta_max == 2.0
        assert d.d_l == (-math.inf, 1.0)
        assert d.d_l_g == (-math.inf, 1.0)
        assert d.geometric_admissible

    def test_dirac_domains(self):
        """Θ_L = ∞, D_L = ℝ."""
        d = DiracModel(1.0).domains()
        assert math.isinf(d.theta_max)
        assert math.isinf(d.d_l[1])
        assert d.in_d_l(1e6)

    def test_tempered_stable_domains(self):
        """Θ_L = 3, D_L = (-∞, 1.5), D_L^g = (-∞, 2∧1.5)."""
        d = TemperedStableModel(1.0, 3.0, 0.5).domains()
        assert d.theta_max == 3.0
        assert d.d_l[1] == 1.5
        assert d.d_l_g[1] == 1.5

    def test_boundary_excluded(self):
        d = CompoundPoissonExpModel(0.4, 2.0).domains()
        assert not d.in_d_l(1.0)
        assert d.in_d_l(0.999)

    def test_delta_shrinks_geometric_domain(self):
        d = CompoundPoissonExpModel(0.4, 1.5).domains()
        assert abs(d.d_l_g_delta(1e-6)[1] - (0.5 - 1e-6)) < 1e-15
        assert not d.in_d_l_g(0.5 - 1e-7, 1e-6)

    def test_small_theta_max_not_geometric(self):
        """Θ_L ≤ 1 - геометрическая модель недоступна."""
        assert not CompoundPoissonExpModel(0.4, 0.8).domains().geometric_admissible


class TestLevyDensity:
    """Тесты плотности меры Леви."""

    def test_cpexp_density(self):
        """ℓ(1) = 0.4·e^{-2} ≈ 0.054134."""
        assert abs(CompoundPoissonExpModel(0.4, 2.0).levy_density(1.0) - 0.054134) < 1e-6

    def test_density_at_zero_raises_error(self):
        with pytest.raises(DomainError, match="z должно быть больше 0"):
            CompoundPoissonExpModel(0.4, 2.0).levy_density(0.0)

    def test_dirac_point_mass(self):
        assert DiracModel(1.0).levy_density(1.0) == PointMass(location=1.0, weight=1.0)

    def test_total_mass(self):
        """Полная масса c/λ = 0.2; умеренно устойчивая мера бесконечна."""
        model = CompoundPoissonExpModel(0.4, 2.0)
        assert abs(model.jump_mass() - 0.2) < 1e-15
        assert model.is_finite_activity
        ts = TemperedStableModel(1.0, 3.0, 0.0)
        assert math.isinf(ts.jump_mass())
        assert not ts.is_finite_activity


class TestModelConstruction:
    """Тесты валидации параметров и сериализации."""

    def test_invalid_parameters_raise_error(self):
        with pytest.raises(DomainError, match="Масштаб c"):
            CompoundPoissonExpModel(c=0.0, lam=2.0)
        with pytest.raises(DomainError, match="Параметр λ"):
            TemperedStableModel(c=1.0, lam=-1.0, alpha=0.5)
        with pytest.raises(DomainError, match="Индекс α"):
            TemperedStableModel(c=1.0, lam=3.0, alpha=1.0)
        with pytest.raises(DomainError, match="Размер скачка"):
            DiracModel(a=0.0)

    def test_to_dict(self):
        assert CompoundPoissonExpModel(0.4, 2.0).to_dict() == {"type": "cpexp", "c": 0.4, "lambda": 2.0}
        assert TemperedStableModel(1.0, 3.0, 0.5).to_dict()["type"] == "tempered_stable"

    def test_str(self):
        assert str(DiracModel(1.0)) == "dirac(a=1.0)"


class TestSampleSizes:
    """Тесты выборки размеров скачков."""

    def setup_method(self):
        self.rng = np.random.default_rng(12345)

    def test_tilted_exponential_mean(self):
        """e^{θz}·ℓ - Exp(λ-θ): среднее 1/(λ-θ)."""
        sizes = CompoundPoissonExpModel(0.4, 2.0).sample_sizes(self.rng, 200_000, theta=0.5)
        assert abs(sizes.mean() - 1.0 / 1.5) < 0.01

    def test_size_biased_mean(self):
        """z·e^{θz}·ℓ - Gamma(2, λ-θ): среднее 2/(λ-θ) = κ''/κ'."""
        model = CompoundPoissonExpModel(0.4, 2.0)
        sizes = model.sample_sizes(self.rng, 200_000, theta=0.5, size_biased=True)
        expected = model.cumulant(0.5, 2) / model.cumulant(0.5, 1)
        assert abs(sizes.mean() - expected) < 0.01

    def test_dirac_sizes_are_constant(self):
        assert np.all(DiracModel(1.5).sample_sizes(self.rng, 10, theta=0.3, size_biased=True) == 1.5)

    def test_infinite_activity_unsupported(self):
        with pytest.raises(UnsupportedModel):
            TemperedStableModel(1.0, 3.0, 0.5).sample_sizes(self.rng, 10)
