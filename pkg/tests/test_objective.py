import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import REF_A, REF_U0, scenario_input, rel_err
from epioptic.control import ControlDesign, control_derivative, control_value
from epioptic.errors import ConfigurationError
from epioptic.model import PopulationState
from epioptic.objective import (
    CostBreakdown,
    evaluate_J,
    simpson,
    surrogate_functional_closed,
    surrogate_functional_quadrature,
)
from epioptic.series import optimal_u0_closed_form
from epioptic.simulate import Trajectory, integrate, simulate_constant, simulate_controlled, simulate_uncontrolled


def default_design(u0=REF_U0, a=REF_A):
    return ControlDesign(500.0, 100.0, a, u0)


def test_simpson_exact_on_cubics():
    x = np.linspace(0, 2, 11)
    assert simpson(x**3 - x + 1, 0.2) == pytest.approx(4 - 2 + 2, rel=1e-14)


def test_simpson_odd_interval_count_uses_trapezoid_tail():
    y = np.ones(4)
    assert simpson(y, 0.5) == pytest.approx(1.5, rel=1e-15)
    with pytest.raises(ConfigurationError):
        simpson([1.0, 2.0], 0.1)


def test_simpson_fourth_order():
    f = lambda x: np.exp(-0.3 * x) * np.cos(x)
    exact = (0.3 - math.exp(-3) * (0.3 * math.cos(10) - math.sin(10))) / (0.09 + 1)
    e1 = abs(simpson(f(np.linspace(0, 10, 201)), 0.05) - exact)
    e2 = abs(simpson(f(np.linspace(0, 10, 401)), 0.025) - exact)
    assert 13 < e1 / e2 < 19


def _flat_trajectory(i_value, u_value, n=101):
    t = np.linspace(0, 10, n)
    return Trajectory(t, np.full(n, 1 - i_value), np.full(n, i_value), np.zeros(n), np.full(n, u_value), 0.1, "rk4")


def test_zero_everything():
    c = evaluate_J(_flat_trajectory(0.0, 0.0), 0.5)
    assert c == CostBreakdown(0.0, 0.0, 0.0)


def test_too_few_points():
    t = _flat_trajectory(0.1, 0.0, n=2)
    with pytest.raises(ConfigurationError):
        evaluate_J(t, 0.1)


def test_uncontrolled_cost_is_burden():
    tr = simulate_uncontrolled(scenario_input())
    c = evaluate_J(tr, REF_A)
    assert c.control_effort == 0.0
    assert c.total == c.infection_burden


@pytest.fixture(scope="module")
def default_costs():
    inp = scenario_input()
    d = ControlDesign.from_attenuation(500, 100, optimal_u0_closed_form(inp))
    return {
        "analytic": evaluate_J(simulate_controlled(inp, d), inp.a),
        "none": evaluate_J(simulate_uncontrolled(inp), inp.a),
        "max": evaluate_J(simulate_constant(inp, 0.9), inp.a),
    }


def test_analytic_control_beats_alternatives(default_costs):
    assert default_costs["analytic"].total < default_costs["none"].total
    assert default_costs["analytic"].total < default_costs["max"].total


def test_additivity(default_costs):
    for c in default_costs.values():
        assert c.total == c.infection_burden + c.control_effort


def test_step_refinement_stable(default_costs):
    inp = scenario_input()
    d = ControlDesign.from_attenuation(500, 100, optimal_u0_closed_form(inp))
    fine = evaluate_J(simulate_controlled(inp, d, 0.005), inp.a)
    assert rel_err(fine.total, default_costs["analytic"].total) <= 1e-6


def test_quadrature_order_on_default_scenario():
    inp = scenario_input()
    d = ControlDesign.from_attenuation(500, 100, optimal_u0_closed_form(inp))
    ref = evaluate_J(simulate_controlled(inp, d, 0.00625), inp.a).total
    e1 = abs(evaluate_J(simulate_controlled(inp, d, 0.1), inp.a).total - ref)
    e2 = abs(evaluate_J(simulate_controlled(inp, d, 0.05), inp.a).total - ref)
    assert 16 * 0.7 <= e1 / e2 <= 16 * 1.3


@settings(max_examples=30)
@given(st.lists(st.floats(0, 1), min_size=5, max_size=40), st.floats(0, 0.5))
def test_burden_monotone(values, bump):
    n = len(values)
    t = np.linspace(0, 1, n)
    i = np.array(values)
    base = Trajectory(t, 1 - i, i, np.zeros(n), np.zeros(n), 1 / (n - 1), "rk4")
    more = Trajectory(t, 1 - i, i + bump, np.zeros(n), np.zeros(n), 1 / (n - 1), "rk4")
    assert evaluate_J(more, 0.1).total >= evaluate_J(base, 0.1).total


# -- surrogate functional ---------------------------------------------------

def test_surrogate_zero_control():
    d = default_design(u0=0.0)
    assert surrogate_functional_quadrature(d) == 0.0
    assert surrogate_functional_closed(d) == 0.0


def test_surrogate_closed_vs_quadrature():
    d = default_design()
    assert rel_err(surrogate_functional_quadrature(d), surrogate_functional_closed(d)) <= 1e-10


def test_surrogate_quadratic_homogeneity():
    q1 = surrogate_functional_quadrature(default_design(0.3))
    q2 = surrogate_functional_quadrature(default_design(0.6))
    assert q2 / q1 == pytest.approx(4.0, rel=1e-10)


def test_surrogate_doubling_a():
    d1, d2 = default_design(), default_design(a=2 * REF_A)
    factor = math.sqrt(2) * -math.expm1(-math.sqrt(4 * REF_A) * 100) / -math.expm1(-math.sqrt(2 * REF_A) * 100)
    assert surrogate_functional_closed(d2) / surrogate_functional_closed(d1) == pytest.approx(factor, rel=1e-12)
    assert rel_err(surrogate_functional_closed(d2), surrogate_functional_quadrature(d2)) <= 1e-10


def test_surrogate_long_horizon_limit():
    d = ControlDesign(500.0, 1e4, REF_A, REF_U0)
    limit = math.sqrt(2) / 2 * math.sqrt(REF_A) * REF_U0**2
    assert surrogate_functional_closed(d) == pytest.approx(limit, rel=1e-14)


def test_derivative_squared_identity():
    d = default_design()
    for t in np.linspace(0, 100, 1000):
        assert abs(control_derivative(t, d) ** 2 - d.a / 2 * control_value(t, d) ** 2) <= 1e-12
