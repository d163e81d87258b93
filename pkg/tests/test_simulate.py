import math

import numpy as np
import pytest

from conftest import scenario_input
from epioptic.control import ControlDesign, control_value
from epioptic.errors import ConfigurationError, DivergenceError
from epioptic.model import EpidemicParams, PopulationState
from epioptic.simulate import (
    integrate,
    simulate_constant,
    simulate_controlled,
    simulate_uncontrolled,
)

P = EpidemicParams(0.2, 0.1)
X0 = PopulationState(0.95, 0.05, 0.0)


@pytest.fixture(scope="module")
def default_runs():
    from epioptic.series import optimal_u0_closed_form

    inp = scenario_input()
    design = ControlDesign.from_attenuation(500, 100, optimal_u0_closed_form(inp))
    return inp, design, simulate_controlled(inp, design), simulate_uncontrolled(inp)


def test_trajectory_shape(default_runs):
    _, _, ctrl, _ = default_runs
    assert len(ctrl) == 10001
    assert ctrl.times[0] == 0 and ctrl.times[-1] == 100
    assert np.all(np.diff(ctrl.times) > 0)
    assert np.allclose(np.diff(ctrl.times), 0.01, rtol=0, atol=1e-12)
    assert ctrl.method == "rk4"
    with pytest.raises(ValueError):
        ctrl.s[0] = 1.0


def test_conservation_rk4(default_runs):
    _, _, ctrl, free = default_runs
    assert np.max(np.abs(ctrl.total - 1)) <= 1e-8
    assert np.max(np.abs(free.total - 1)) <= 1e-8


def test_conservation_euler():
    inp = scenario_input()
    d = ControlDesign.from_attenuation(500, 100, 0.38)
    tr = simulate_controlled(inp, d, 0.01, "classical")
    assert tr.method == "classical-euler"
    assert np.max(np.abs(tr.total - 1)) <= 1e-3


def test_no_infection_subspace():
    d = ControlDesign.from_attenuation(500, 100, 0.38)
    tr = integrate(PopulationState(1, 0, 0), P, d, 100, 0.01)
    assert np.all(tr.i == 0)
    s_exact = [math.exp(-0.38 * (1 - math.exp(-d.decay * t)) / d.decay) for t in tr.times]
    assert np.allclose(tr.s, s_exact, rtol=1e-10, atol=0)
    assert np.allclose(tr.r, 1 - tr.s, rtol=0, atol=1e-14)


def test_rk4_fourth_order():
    inp = scenario_input()
    d = ControlDesign.from_attenuation(500, 100, 0.38)
    ref = simulate_controlled(inp, d, 0.0025)
    errs = []
    for h in (0.02, 0.01):
        tr = simulate_controlled(inp, d, h)
        errs.append(max(abs(tr.s[-1] - ref.s[-1]), abs(tr.i[-1] - ref.i[-1]), abs(tr.r[-1] - ref.r[-1])))
    assert 16 * 0.7 <= errs[0] / errs[1] <= 16 * 1.3


def test_null_control_is_zero_function():
    a = integrate(X0, P, None, 50, 0.01)
    b = integrate(X0, P, lambda t: 0.0, 50, 0.01)
    assert np.array_equal(a.s, b.s) and np.array_equal(a.i, b.i) and np.array_equal(a.r, b.r)


def test_grid_control_matches_function_for_linear_control():
    f = lambda t: 0.002 * t
    grid = [f(t) for t in np.arange(5001) * 0.01]
    a = integrate(X0, P, f, 50, 0.01)
    b = integrate(X0, P, grid, 50, 0.01)
    assert np.allclose(a.s, b.s, rtol=0, atol=1e-13)


def test_configuration_errors():
    with pytest.raises(ConfigurationError):
        integrate(X0, P, None, 1.0, 2.0)
    with pytest.raises(ConfigurationError):
        integrate(X0, P, None, 1.0, 0.0)
    with pytest.raises(ConfigurationError):
        integrate(X0, P, None, 1.0, 0.3)
    with pytest.raises(ConfigurationError):
        integrate(X0, P, None, 1.0, 0.1, method="dopri")


def test_divergence_reports_time():
    with pytest.raises(DivergenceError) as exc:
        integrate(PopulationState(1.0, 0.5, 0.0), EpidemicParams(1e3, 0.1), None, 10, 0.5, "classical")
    assert 0 < exc.value.time <= 10


def test_controlled_s_decreasing(default_runs):
    _, _, ctrl, _ = default_runs
    assert np.all(np.diff(ctrl.s) <= 0)


def test_controlled_i_bounded(default_runs):
    inp, design, ctrl, _ = default_runs
    coarse = simulate_controlled(inp, design, 0.02)
    assert ctrl.i[-1] < 10 * ctrl.i[0]
    assert abs(coarse.i[-1] - ctrl.i[-1]) < 1e-8


def test_zero_control_equals_uncontrolled():
    inp = scenario_input()
    d = ControlDesign.from_attenuation(500, 100, 0.0)
    a, b = simulate_controlled(inp, d), simulate_uncontrolled(inp)
    for x, y in ((a.s, b.s), (a.i, b.i), (a.r, b.r)):
        assert np.max(np.abs(x - y)) <= 1e-12


def test_uncontrolled_removed_monotone(default_runs):
    _, _, _, free = default_runs
    assert np.all(np.diff(free.r) >= 0)


def test_no_transmission_pure_decay():
    inp = scenario_input(beta=0.0)
    tr = simulate_uncontrolled(inp)
    assert np.allclose(tr.i, 0.05 * np.exp(-0.1 * tr.times), rtol=0, atol=1e-8)


def test_comparison_property(default_runs):
    _, _, ctrl, free = default_runs
    k = slice(1, None)
    assert np.all(ctrl.s[k] <= free.s[k])
    assert np.all(ctrl.i[k] <= free.i[k])
    assert np.all(ctrl.r[k] >= free.r[k])


def test_methods_agree():
    inp = scenario_input()
    d = ControlDesign.from_attenuation(500, 100, 0.38)
    rk = simulate_controlled(inp, d, 0.01)
    eu = simulate_controlled(inp, d, 1e-4, "classical")
    for t in (10, 50, 100):
        a, b = round(t / 0.01), round(t / 1e-4)
        for x, y in ((rk.s, eu.s), (rk.i, eu.i), (rk.r, eu.r)):
            assert abs(x[a] - y[b]) <= 1e-5


def test_constant_control_column():
    tr = simulate_constant(scenario_input(), 0.9)
    assert np.all(tr.u == 0.9)
