# tests/test_measure_change.py
"""
Тесты замены меры: ядра G, H, M, параметры под Q, интенсивность скачков.
"""
import math

import numpy as np
import pytest

from calculations.exceptions import DomainError, UnsupportedModel
from calculations.levy_models import CompoundPoissonExpModel, DiracModel, TemperedStableModel
from calculations.measure_change import (
    FactorParams,
    MeasureChange,
    compensator_drift,
    compensator_mass,
    eta,
    kernel_G,
    kernel_H,
    kernel_M,
    q_dynamics,
    q_jump_intensity,
)


class TestEta:
    """Тесты eta(x) = (1 - e^{-x})/x."""

    def test_zero(self):
        assert eta(0.0) == 1.0

    def test_continuity_at_series_threshold(self):
        """Ряд и прямая формула согласованы у порога 1e-4."""
        for x in (0.99e-4, 1.01e-4):
            assert abs(eta(x) - (-math.expm1(-x) / x)) < 1e-15

    def test_array(self):
        x = np.array([0.0, 1e-6, 1.0, 50.0])
        expected = np.array([1.0, 1.0 - 5e-7, 1.0 - math.exp(-1.0), 1.0 / 50.0])
        assert np.allclose(eta(x), expected, rtol=1e-12, atol=0.0)


class TestKernels:
    """Тесты ядер плотности замены меры."""

    def setup_method(self):
        """Базовый набор параметров."""
        self.fp = FactorParams(alpha_x=0.099, sigma_x=0.0158, alpha_y=0.3466)
        self.model = CompoundPoissonExpModel(0.4, 2.0)

    def test_kernel_G_identity(self):
        """θ₁ = β₁ = 0 - ядро нулевое."""
        assert kernel_G(self.fp, MeasureChange(), 3.7) == 0.0

    def test_kernel_G_level_shift(self):
        """θ₁ = 0.1, x = 5: G = 0.1/0.0158 ≈ 6.329114."""
        value = kernel_G(self.fp, MeasureChange(theta1=0.1), 5.0)
        assert abs(value - 6.329114) < 1e-6

    def test_kernel_G_speed_change(self):
        """β₁ = 1, x = 1: G = 0.099/0.0158 ≈ 6.265823."""
        value = kernel_G(self.fp, MeasureChange(beta1=1.0), 1.0)
        assert abs(value - 6.265823) < 1e-6

    def test_kernel_H_identity(self):
        y = np.array([0.0, 1.0, 3.0])
        z = np.array([0.5, 1.0, 2.0])
        assert np.all(kernel_H(self.model, self.fp, MeasureChange(), y, z) == 1.0)

    def test_kernel_H_speed_change(self):
        """θ₂ = 0, β₂ = 1, y = z = 1: H = 1 + 0.3466/κ''(0) = 4.466."""
        value = kernel_H(self.model, self.fp, MeasureChange(beta2=1.0), 1.0, 1.0)
        assert abs(value - 4.466) < 1e-12

    def test_kernel_H_esscher(self):
        """β₂ = 0: H = e^{θ₂z}."""
        value = kernel_H(self.model, self.fp, MeasureChange(theta2=0.5), 0.7, 2.0)
        assert abs(value - math.e) < 1e-12

    def test_kernel_H_invalid_arguments(self):
        with pytest.raises(DomainError, match="y должно быть неотрицательным"):
            kernel_H(self.model, self.fp, MeasureChange(), -1.0, 1.0)
        with pytest.raises(DomainError, match="z должно быть больше 0"):
            kernel_H(self.model, self.fp, MeasureChange(), 1.0, 0.0)
        with pytest.raises(DomainError, match="theta2 вне D_L"):
            kernel_H(self.model, self.fp, MeasureChange(theta2=1.0), 1.0, 1.0)

    def test_kernel_M_speed_change(self):
        """θ₂ = 0, β₂ = 1, y = z = 1: M = 1 + 0.3466/κ'(0) = 4.466."""
        value = kernel_M(self.model, self.fp, MeasureChange(beta2=1.0), 1.0, 1.0)
        assert abs(value - 4.466) < 1e-12

    def test_kernel_M_identity(self):
        assert kernel_M(self.model, self.fp, MeasureChange(), 2.0, 0.3) == 1.0

    def test_kernel_M_infinite_activity_unsupported(self):
        with pytest.raises(UnsupportedModel):
            kernel_M(TemperedStableModel(1.0, 3.0, 0.5), self.fp, MeasureChange(), 1.0, 1.0)

    def test_compensators_match_quadrature(self):
        """∫z(H-1)ℓ(dz) и ∫(H-1)ℓ(dz) совпадают с численным интегралом."""
        from scipy import integrate

        mc = MeasureChange(theta2=0.4, beta2=0.3)
        y = 1.7

        def h_minus_one(z):
            return kernel_H(self.model, self.fp, mc, y, z) - 1.0

        drift, _ = integrate.quad(lambda z: z * h_minus_one(z) * self.model.levy_density(z), 0.0, 200.0,
                                  epsabs=1e-13, limit=200)
        mass, _ = integrate.quad(lambda z: h_minus_one(z) * self.model.levy_density(z), 0.0, 200.0,
                                 epsabs=1e-13, limit=200)
        assert abs(compensator_drift(self.model, self.fp, mc, y) - drift) < 1e-8
        assert abs(compensator_mass(self.model, self.fp, mc, y) - mass) < 1e-8


class TestQDynamics:
    """Тесты параметров факторов под Q."""

    def setup_method(self):
        self.fp = FactorParams(alpha_x=0.099, sigma_x=0.0158, alpha_y=0.3466)
        self.model = CompoundPoissonExpModel(0.4, 2.0)

    def test_identity(self):
        """Q = P: параметры не меняются, снос Y - κ'(0)."""
        fq = q_dynamics(self.model, self.fp, MeasureChange())
        assert fq.alpha_x == self.fp.alpha_x
        assert fq.alpha_y == self.fp.alpha_y
        assert fq.mu_x == 0.0
        assert abs(fq.mu_y - 0.1) < 1e-15

    def test_speed_halved(self):
        """α_X(1 - β₁) = 0.0495 при β₁ = 0.5."""
        fq = q_dynamics(self.model, self.fp, MeasureChange(beta1=0.5))
        assert abs(fq.alpha_x - 0.0495) < 1e-15

    def test_spike_level(self):
        """κ'(0.5) = 0.4/2.25 ≈ 0.177778."""
        fq = q_dynamics(self.model, self.fp, MeasureChange(theta2=0.5))
        assert abs(fq.mu_y - 0.177778) < 1e-6

    def test_brownian_limit(self):
        """β₁ = 1: среднее X линейно по τ, дисперсия σ²τ."""
        fq = q_dynamics(self.model, self.fp, MeasureChange(theta1=0.2, beta1=1.0))
        assert fq.x_brownian
        assert abs(fq.x_mean(1.0, 10.0) - 3.0) < 1e-12
        assert abs(fq.x_variance(10.0) - 0.0158 ** 2 * 10.0) < 1e-15

    def test_theta2_outside_domain(self):
        with pytest.raises(DomainError, match="theta2 вне D_L"):
            q_dynamics(self.model, self.fp, MeasureChange(theta2=1.2))

    def test_invalid_beta(self):
        with pytest.raises(DomainError, match="beta2 должно лежать"):
            MeasureChange(beta2=1.5)

    def test_invalid_factor_params(self):
        with pytest.raises(DomainError, match="alpha_x"):
            FactorParams(alpha_x=0.0)
        with pytest.raises(DomainError, match="y0"):
            FactorParams(y0=-1.0)


class TestJumpIntensity:
    """Тесты интенсивности скачков под Q."""

    def setup_method(self):
        self.fp = FactorParams()
        self.model = CompoundPoissonExpModel(0.4, 2.0)

    def test_identity_is_jump_mass(self):
        assert q_jump_intensity(self.model, self.fp, MeasureChange()) == (pytest.approx(0.2), 0.0)

    def test_expected_jump_flow(self):
        """Средний поток скачков A·E[z] + B·y·E[z | состояние] = κ'(θ₂) + α_Yβ₂y."""
        mc = MeasureChange(theta2=0.3, beta2=0.4)
        y = 2.0
        base, state = q_jump_intensity(self.model, self.fp, mc, "H")
        flow = (base * self.model.cumulant(0.3, 1) / base
                + state * y * self.model.cumulant(0.3, 2) / self.model.cumulant(0.3, 1))
        assert abs(flow - (self.model.cumulant(0.3, 1) + self.fp.alpha_y * 0.4 * y)) < 1e-12

        base_m, state_m = q_jump_intensity(self.model, self.fp, mc, "M")
        flow_m = (base_m + state_m * y) * self.model.cumulant(0.3, 1) / base_m
        assert abs(flow_m - flow) < 1e-12

    def test_dirac_intensity(self):
        """Дирак: A = e^{aθ₂}."""
        base, _ = q_jump_intensity(DiracModel(1.0), self.fp, MeasureChange(theta2=0.5))
        assert abs(base - math.exp(0.5)) < 1e-12

    def test_unknown_kernel(self):
        with pytest.raises(UnsupportedModel, match="Неизвестное ядро"):
            q_jump_intensity(self.model, self.fp, MeasureChange(), "K")
