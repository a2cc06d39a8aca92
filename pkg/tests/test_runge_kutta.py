# tests/test_runge_kutta.py
"""
Тесты интегратора RKF45: точность, порядок, узлы вывода, барьер.
"""
import math

import numpy as np
import pytest

from calculations.runge_kutta import RKF45Integrator


def _rotation(y):
    """y'' = -y в виде системы первого порядка."""
    return np.array([y[1], -y[0]])


class TestRKF45Integrator:
    """Тесты адаптивного и фиксированного режимов."""

    def test_exponential_decay_accuracy(self):
        result = RKF45Integrator().integrate(lambda y: -y, [1.0], 5.0)
        assert not result.truncated
        assert result.t_final == 5.0
        assert abs(result.y[-1, 0] - math.exp(-5.0)) < 1e-8 * math.exp(-5.0)

    def test_output_nodes_hit_exactly(self):
        result = RKF45Integrator().integrate(lambda y: -y, [1.0], 3.0, t_eval=[0.5, 1.25, 2.0])
        for node in (0.5, 1.25, 2.0):
            assert node in result.t
        index = int(np.where(result.t == 1.25)[0][0])
        assert abs(result.y[index, 0] - math.exp(-1.25)) < 1e-9

    def test_derivative_stored_with_state(self):
        result = RKF45Integrator().integrate(lambda y: -2.0 * y, [1.0], 1.0)
        assert np.allclose(result.dydt, -2.0 * result.y, rtol=0.0, atol=1e-15)

    def test_fixed_step_order(self):
        """Ошибка формулы 4-го порядка убывает как h⁴."""
        errors = []
        for h in (0.2, 0.1, 0.05):
            result = RKF45Integrator(fixed_step=h).integrate(_rotation, [0.0, 1.0], 2.0)
            errors.append(abs(result.y[-1, 0] - math.sin(2.0)))
        orders = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
        assert np.all(orders >= 3.8)

    def test_barrier_stops_before_blow_up(self):
        """y' = y², y(0) = 1 взрывается в t = 1; барьер |y| < 1e6."""
        result = RKF45Integrator().integrate(lambda y: y ** 2, [1.0], 2.0,
                                             admissible=lambda s: bool(np.all(s < 1e6)))
        assert result.truncated
        assert 0.999 < result.t_final < 1.0
        assert np.all(result.y[:, 0] < 1e6)

    def test_invalid_arguments(self):
        with pytest.raises(ValueError, match="Шаг должен быть больше 0"):
            RKF45Integrator(fixed_step=0.0)
        with pytest.raises(ValueError, match="Горизонт"):
            RKF45Integrator().integrate(lambda y: -y, [1.0], 0.0)

    def test_step_limit(self):
        integrator = RKF45Integrator(max_step=1e-3, max_steps=10)
        with pytest.raises(RuntimeError, match="Превышено число шагов"):
            integrator.integrate(lambda y: -y, [1.0], 1.0)
