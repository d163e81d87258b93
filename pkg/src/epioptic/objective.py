"""Cost functionals: the true cost along simulated paths and the surrogate
``int (u')^2 + (A/2) u^2`` whose Euler-Lagrange equation gives the control family."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .control import ControlDesign, control_derivative, control_value
from .errors import ConfigurationError
from .simulate import Trajectory

SURROGATE_NODES = 20000


def simpson(y, dx: float) -> float:
    """Composite Simpson on a uniform grid; a trailing odd interval gets the trapezoid rule."""
    y = np.asarray(y, dtype=float)
    n = len(y) - 1
    if n < 2:
        raise ConfigurationError("Simpson quadrature needs at least 3 grid points")
    m = n - (n % 2)
    total = dx / 3.0 * (y[0] + 4.0 * y[1:m:2].sum() + 2.0 * y[2:m - 1:2].sum() + y[m])
    if m < n:
        total += 0.5 * dx * (y[m] + y[n])
    return float(total)


@dataclass(frozen=True)
class CostBreakdown:
    infection_burden: float
    control_effort: float
    total: float

    @classmethod
    def of(cls, burden: float, effort: float) -> CostBreakdown:
        return cls(burden, effort, burden + effort)


def evaluate_J(trajectory: Trajectory, a: float) -> CostBreakdown:
    """``J = int I dt + int (A/2) u^2 dt`` by Simpson on the trajectory grid."""
    if a < 0:
        raise ConfigurationError(f"cost weight must be nonnegative, got {a!r}")
    if len(trajectory) < 3:
        raise ConfigurationError("need at least 3 grid points")
    burden = simpson(trajectory.i, trajectory.step)
    effort = simpson(0.5 * a * trajectory.u**2, trajectory.step)
    return CostBreakdown.of(burden, effort)


def surrogate_functional_quadrature(design: ControlDesign, nodes: int = SURROGATE_NODES) -> float:
    """Simpson quadrature of ``(u')^2 + (A/2) u^2`` over ``[0, T]``."""
    ts = np.linspace(0.0, design.t_horizon, nodes + 1)
    u = np.array([control_value(t, design) for t in ts])
    du = np.array([control_derivative(t, design) for t in ts])
    return simpson(du**2 + 0.5 * design.a * u**2, design.t_horizon / nodes)


def surrogate_functional_closed(design: ControlDesign) -> float:
    """Analytic value of the surrogate functional.

    On the family ``(u')^2 = (A/2) u^2``, so the integrand is ``A u^2`` and
    the integral is ``(sqrt(2 A) / 2) U0^2 (1 - exp(-sqrt(2 A) T))``.
    """
    r2a = math.sqrt(2.0 * design.a)
    return 0.5 * r2a * design.u0**2 * -math.expm1(-r2a * design.t_horizon)
