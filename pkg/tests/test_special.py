import math

import numpy as np
import pytest

from conftest import rel_err
from epioptic import special
from epioptic.errors import DomainError
from epioptic.special import EULER_GAMMA, exp_integral_e1, exp_integral_ei
from oracles import e1_quadrature, ei_quadrature

GRID = np.geomspace(1e-4, 40, 100)


def test_ei_at_one_matches_quadrature():
    assert rel_err(exp_integral_ei(1.0), ei_quadrature(1.0)) <= 1e-10


def test_ei_small_argument():
    x = 1e-8
    # gamma + ln x + x + x^2/4 + ...
    oracle = EULER_GAMMA + math.log(x) + x + x * x / 4
    assert abs(exp_integral_ei(x) - (EULER_GAMMA + math.log(x))) <= 1e-7
    assert abs(exp_integral_ei(x) - oracle) <= 1e-14


def test_e1_ei_reflection():
    assert rel_err(exp_integral_e1(2.0).value, -exp_integral_ei(-2.0)) <= 1e-12


def test_e1_at_one():
    v = exp_integral_e1(1.0)
    assert not v.branch_note
    assert rel_err(v.value, e1_quadrature(1.0)) <= 1e-10


def test_e1_negative_argument_is_flagged_real_part():
    v = exp_integral_e1(-0.5)
    assert v.branch_note
    assert v.value == -exp_integral_ei(0.5)


def _asymptotic_enclosure(x):
    """Consecutive partial sums around the smallest term of the alternating
    asymptotic series e^-x / x * sum (-1)^n n! / x^n bracket E1(x)."""
    partial, term, n = 1.0, 1.0, 0
    while (n + 1) / x < 1:
        n += 1
        term *= -n / x
        partial += term
    nxt = partial + term * -(n + 1) / x
    scale = math.exp(-x) / x
    return sorted((scale * partial, scale * nxt))


def test_e1_large_argument_asymptotic():
    lo, hi = _asymptotic_enclosure(25.0)
    mid = 0.5 * (lo + hi)
    assert (hi - lo) / 2 / mid < 1e-10
    val = exp_integral_e1(25.0).value
    assert lo <= val <= hi
    assert rel_err(val, mid) <= 1e-10


@pytest.mark.parametrize("x", [0.0, -0.0])
def test_zero_is_singular(x):
    with pytest.raises(DomainError):
        exp_integral_ei(x)
    with pytest.raises(DomainError):
        exp_integral_e1(x)


@pytest.mark.parametrize("x", [math.inf, -math.inf, math.nan])
def test_non_finite_rejected(x):
    with pytest.raises(DomainError):
        exp_integral_ei(x)


def test_derivative_of_e1():
    h = 1e-6
    for x in np.linspace(0.1, 10, 50):
        fd = (exp_integral_e1(x + h).value - exp_integral_e1(x - h).value) / (2 * h)
        assert rel_err(fd, -math.exp(-x) / x) <= 1e-6


@pytest.mark.parametrize("switch, fn", [(special.EI_SWITCH, exp_integral_ei), (special.E1_SWITCH, lambda x: exp_integral_e1(x).value)])
def test_switchover_continuity(switch, fn):
    below = math.nextafter(switch, 0.0)
    above = math.nextafter(switch, math.inf)
    assert rel_err(fn(below), fn(above)) <= 1e-12


def test_branches_agree_at_switch_points():
    x = special.EI_SWITCH
    assert rel_err(special._ei_series(x), special._ei_asymptotic(x)) <= 1e-12
    x = special.E1_SWITCH
    assert rel_err(-special._ei_series(-x), special._e1_continued_fraction(x)) <= 1e-12


def test_quadrature_grid_positive_and_negative():
    for x in GRID:
        assert rel_err(exp_integral_e1(x).value, e1_quadrature(x)) <= 1e-10
        assert rel_err(exp_integral_ei(x), ei_quadrature(x)) <= 1e-10
        assert rel_err(exp_integral_ei(-x), ei_quadrature(-x)) <= 1e-10
        assert rel_err(exp_integral_e1(-x).value, -ei_quadrature(x)) <= 1e-10


@pytest.mark.parametrize("x", [1e-6, 1e-3, 0.37, 3.0, 45.0, 50.0])
def test_accuracy_range_edges(x):
    assert rel_err(exp_integral_ei(x), ei_quadrature(x)) <= 1e-12
    assert rel_err(exp_integral_ei(-x), ei_quadrature(-x)) <= 1e-12
