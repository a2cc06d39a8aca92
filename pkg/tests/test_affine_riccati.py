# tests/test_affine_riccati.py
"""
Тесты обобщенных уравнений Риккати: u*, классификация, решение, t_∞.
"""
import math

import numpy as np
import pytest

from calculations.affine_riccati import (
    CASE1,
    CASE2,
    CASE3,
    blow_up_time,
    classify,
    cpexp_beta2_bound,
    cpexp_roots,
    exponential_rate,
    levy_exponents,
    solve_riccati,
    u_star,
)
from calculations.exceptions import BlowUp, DomainError, UnsupportedModel, WrongCase
from calculations.levy_models import CompoundPoissonExpModel, DiracModel
from calculations.measure_change import FactorParams, MeasureChange


class TestClassification:
    """Тесты корня u* и классификации случаев."""

    def setup_method(self):
        """cpexp(c=0.4, λ=2), α_Y = 0.3466."""
        self.model = CompoundPoissonExpModel(0.4, 2.0)
        self.fp = FactorParams()

    def test_u_star_case3(self):
        """θ₂ = 0, β₂ = 0.5: u* ≈ 0.719224 < 1."""
        result = classify(self.model, self.fp, MeasureChange(beta2=0.5))
        assert result.case_tag == CASE3
        assert abs(result.u_star - 0.719224) < 1e-6
        assert abs(result.beta_bound - 1.0 / 3.0) < 1e-12

    @pytest.mark.parametrize("theta2,beta2", [(0.0, 0.2), (0.0, 0.5), (0.3, 0.7), (-1.0, 0.05)])
    def test_u_star_matches_closed_form(self, theta2, beta2):
        _, lower_root, _ = cpexp_roots(self.model, theta2, beta2)
        assert abs(u_star(self.model, self.fp, MeasureChange(theta2=theta2, beta2=beta2)) - lower_root) < 1e-9

    def test_lambda1_vanishes_at_u_star(self):
        mc = MeasureChange(theta2=0.2, beta2=0.6)
        root = u_star(self.model, self.fp, mc)
        assert abs(levy_exponents(self.model, self.fp, mc, root).lam1) < 1e-10

    def test_lambda1_single_sign_change(self):
        """Λ₁ < 0 на (0, u*) и Λ₁ > 0 на (u*, Θ_L - θ₂)."""
        mc = MeasureChange(theta2=0.2, beta2=0.6)
        root = u_star(self.model, self.fp, mc)
        grid = np.linspace(1e-3, 1.8 - 1e-3, 2000)
        signs = np.sign([levy_exponents(self.model, self.fp, mc, u).lam1 for u in grid])
        changes = np.flatnonzero(np.diff(signs))
        assert changes.size == 1
        assert signs[0] < 0
        assert grid[changes[0]] < root <= grid[changes[0] + 1]

    def test_case1(self):
        """β₂ = 0.2 ниже границы 1/3."""
        result = classify(self.model, self.fp, MeasureChange(beta2=0.2))
        assert result.case_tag == CASE1
        assert result.u_star > 1.0

    def test_case2_on_bound(self):
        """β₂ = 1/3: u₋ = 1."""
        assert classify(self.model, self.fp, MeasureChange(beta2=1.0 / 3.0)).case_tag == CASE2

    def test_boundary_betas(self):
        assert classify(self.model, self.fp, MeasureChange()).case_tag == CASE1
        result = classify(self.model, self.fp, MeasureChange(beta2=1.0))
        assert result.case_tag == CASE3
        assert result.u_star == 0.0

    def test_cpexp_bound_matches_general_bound(self):
        for theta2 in (-0.5, 0.0, 0.5):
            general = classify(self.model, self.fp, MeasureChange(theta2=theta2, beta2=0.1)).beta_bound
            assert abs(general - cpexp_beta2_bound(self.model, theta2)) < 1e-12

    def test_dirac_bound(self):
        """Dirac(1), θ₂ = 0: 1/(e - 1) ≈ 0.581977."""
        result = classify(DiracModel(1.0), self.fp, MeasureChange(beta2=0.3))
        assert abs(result.beta_bound - 0.581977) < 1e-6
        assert result.case_tag == CASE1

    def test_u_star_requires_interior_beta(self):
        with pytest.raises(DomainError, match="β₂ ∈ \\(0, 1\\)"):
            u_star(self.model, self.fp, MeasureChange())

    def test_geometric_domain_required(self):
        with pytest.raises(DomainError, match="theta2 вне D_L\\^g"):
            classify(self.model, self.fp, MeasureChange(theta2=1.5, beta2=0.2))
        with pytest.raises(DomainError, match="Θ_L > 1"):
            classify(CompoundPoissonExpModel(0.4, 0.8), self.fp, MeasureChange(beta2=0.2))

    def test_cpexp_helpers_reject_other_models(self):
        with pytest.raises(UnsupportedModel):
            cpexp_roots(DiracModel(1.0), 0.0, 0.5)
        with pytest.raises(DomainError, match="λ - θ₂ > 1"):
            cpexp_beta2_bound(self.model, 1.5)


class TestSolveRiccati:
    """Тесты численного решения."""

    def setup_method(self):
        self.model = CompoundPoissonExpModel(0.4, 2.0)
        self.fp = FactorParams()

    def test_esscher_oracle(self):
        """β₂ = 0: Ψ¹(t) = e^{-α_Y t}."""
        solution = solve_riccati(self.model, self.fp, MeasureChange(theta2=0.3), 360.0)
        assert solution.case_tag == CASE1
        assert solution.t_grid[-1] == 360.0
        assert np.max(np.abs(solution.psi1 - np.exp(-0.3466 * solution.t_grid))) < 1e-8
        psi1, _ = solution.at(2.0)
        assert abs(psi1 - 0.500074) < 1e-6

    def test_esscher_psi0(self):
        """β₂ = 0: Ψ⁰(t) = ∫₀ᵗ (κ(e^{-α_Y s} + θ₂) - κ(θ₂)) ds."""
        from scipy import integrate

        mc = MeasureChange(theta2=0.3)
        solution = solve_riccati(self.model, self.fp, mc, 20.0, t_eval=[20.0])
        expected, _ = integrate.quad(
            lambda s: self.model.cumulant(math.exp(-0.3466 * s) + 0.3) - self.model.cumulant(0.3), 0.0, 20.0,
            epsabs=0.0, epsrel=1e-12)
        assert abs(solution.psi0[-1] - expected) < 1e-8

    def test_fixed_step_order(self):
        errors = []
        for h in (1.0, 0.5, 0.25):
            solution = solve_riccati(self.model, self.fp, MeasureChange(), 8.0, fixed_step=h)
            errors.append(abs(solution.psi1[-1] - math.exp(-0.3466 * 8.0)))
        orders = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
        assert np.all(orders >= 3.8)

    def test_case1_exponential_rate(self):
        """θ₂ = 0.2, β₂ = 0.2: скорость убывания -α_Y(1 - β₂)."""
        solution = solve_riccati(self.model, self.fp, MeasureChange(theta2=0.2, beta2=0.2), 200.0)
        assert solution.case_tag == CASE1
        rate = exponential_rate(solution, 200.0)
        assert abs(rate - (-0.3466 * 0.8)) < 1e-5
        assert np.all(np.diff(solution.psi1) < 0)

    def test_case1_exponential_bound(self):
        """Ψ¹(t) ≤ exp(Λ₁(1)·t) для Case1."""
        mc = MeasureChange(theta2=0.2, beta2=0.2)
        lam1 = levy_exponents(self.model, self.fp, mc, 1.0).lam1
        assert lam1 < 0
        solution = solve_riccati(self.model, self.fp, mc, 200.0)
        bound = np.exp(lam1 * solution.t_grid)
        assert np.all(solution.psi1 <= bound * (1.0 + 1e-8))

    def test_psi1_increases_with_beta2(self):
        """θ₂ = 0.2: Ψ¹ не убывает по β₂ внутри Case1."""
        taus = np.linspace(0.0, 120.0, 121)
        previous = None
        for beta2 in (0.0, 0.1, 0.2, 0.25):
            mc = MeasureChange(theta2=0.2, beta2=beta2)
            assert classify(self.model, self.fp, mc).case_tag == CASE1
            psi1, _ = solve_riccati(self.model, self.fp, mc, 120.0, t_eval=list(taus)).at(taus)
            if previous is not None:
                assert np.all(psi1 >= previous * (1.0 - 1e-8))
            previous = psi1

    def test_case2_closed_form(self):
        """Ψ¹ ≡ 1, Ψ⁰(t) = κ(1)·t = 0.2·t."""
        solution = solve_riccati(self.model, self.fp, MeasureChange(beta2=1.0 / 3.0), 10.0, t_eval=[5.0])
        assert solution.case_tag == CASE2
        assert np.all(solution.psi1 == 1.0)
        assert abs(solution.at(5.0)[1] - 1.0) < 1e-12
        assert abs(solution.psi0[-1] - 2.0) < 1e-12

    def test_case3_blow_up(self):
        """β₂ = 0.9: время выхода совпадает с t_∞."""
        mc = MeasureChange(beta2=0.9)
        t_infinity = blow_up_time(self.model, self.fp, mc)
        assert 0.0 < t_infinity < math.inf
        with pytest.raises(BlowUp) as excinfo:
            solve_riccati(self.model, self.fp, mc, 100.0)
        error = excinfo.value
        assert abs(error.t_escape - t_infinity) < 1e-4 * t_infinity
        solution = error.solution
        assert solution.truncated
        assert solution.case_tag == CASE3
        assert solution.t_infinity == t_infinity
        assert np.all(np.diff(solution.psi1) > 0)
        assert solution.psi1[-1] < 2.0

    def test_case3_before_blow_up(self):
        mc = MeasureChange(beta2=0.9)
        t_infinity = blow_up_time(self.model, self.fp, mc)
        solution = solve_riccati(self.model, self.fp, mc, 0.5 * t_infinity)
        assert not solution.truncated
        assert solution.case_tag == CASE3

    def test_dirac_blow_up(self):
        """Θ_L = ∞: выход фиксируется на уровне отсечки Ψ¹."""
        model = DiracModel(1.0)
        mc = MeasureChange(beta2=0.9)
        assert classify(model, self.fp, mc).case_tag == CASE3
        t_infinity = blow_up_time(model, self.fp, mc)
        with pytest.raises(BlowUp) as excinfo:
            solve_riccati(model, self.fp, mc, 1000.0)
        assert abs(excinfo.value.t_escape - t_infinity) < 1e-3 * t_infinity

    def test_blow_up_time_requires_case3(self):
        with pytest.raises(WrongCase, match="Case3"):
            blow_up_time(self.model, self.fp, MeasureChange(beta2=0.2))

    def test_exponential_rate_requires_case1(self):
        solution = solve_riccati(self.model, self.fp, MeasureChange(beta2=1.0 / 3.0), 10.0)
        with pytest.raises(WrongCase):
            exponential_rate(solution, 10.0)

    def test_evaluation_outside_solution(self):
        mc = MeasureChange(beta2=0.9)
        with pytest.raises(BlowUp) as excinfo:
            solve_riccati(self.model, self.fp, mc, 100.0)
        solution = excinfo.value.solution
        with pytest.raises(BlowUp):
            solution.at(solution.horizon + 1.0)
        with pytest.raises(DomainError, match="неотрицательным"):
            solution.at(-1.0)

    def test_interpolation_between_nodes(self):
        solution = solve_riccati(self.model, self.fp, MeasureChange(theta2=0.3), 30.0)
        taus = np.linspace(0.0, 30.0, 77)
        psi1, _ = solution.at(taus)
        assert np.max(np.abs(psi1 - np.exp(-0.3466 * taus))) < 1e-7
