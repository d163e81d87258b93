"""Scalar calibration solvers and a Pontryagin forward-backward sweep.

The sweep solves the full problem (minimize ``int I + (A/2) u^2`` subject to
the controlled SIR system and ``0 <= u <= u_max``) without the early-stage
approximations, and serves as the reference the exponential family is
measured against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BracketError, ConfigurationError
from .model import PopulationState
from .objective import CostBreakdown, evaluate_J
from .series import CalibrationInput, residual_scale, stationarity_residual, surrogate_cost
from .simulate import Trajectory, integrate

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class RootResult:
    value: float
    residual: float
    iterations: int
    bracket: tuple[float, float]
    scale: float = 1.0

    @property
    def relative_residual(self) -> float:
        return abs(self.residual) / self.scale if self.scale else abs(self.residual)


def bisect(f, lo: float, hi: float, tol: float = 1e-12, max_iter: int = 200) -> tuple[float, int, tuple[float, float]]:
    """Plain bisection. Returns ``(midpoint, iterations, final bracket)``."""
    if not lo < hi:
        raise BracketError(f"empty interval [{lo}, {hi}]")
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo, 0, (lo, lo)
    if fhi == 0:
        return hi, 0, (hi, hi)
    if (flo < 0) == (fhi < 0):
        raise BracketError(f"no sign change on [{lo}, {hi}]: f = {flo:.6g}, {fhi:.6g}")
    it = 0
    while hi - lo > tol and it < max_iter:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        it += 1
        if fm == 0:
            return mid, it, (mid, mid)
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi), it, (lo, hi)


def scan_sign_changes(f, lo: float, hi: float, n: int = 2000) -> list[tuple[float, float, int]]:
    """Subintervals of an ``n``-cell scan where ``f`` changes sign, with the
    direction of the crossing (+1 rising, -1 falling)."""
    xs = np.linspace(lo, hi, n + 1)
    fs = [f(float(x)) for x in xs]
    out = []
    for k in range(n):
        if fs[k] * fs[k + 1] < 0:
            out.append((float(xs[k]), float(xs[k + 1]), 1 if fs[k + 1] > fs[k] else -1))
    return out


def solve_u0_bisection(inp: CalibrationInput, bracket: tuple[float, float], tol: float = 1e-12) -> RootResult:
    """Root of dK/dU0 inside ``bracket``; ``tol`` bounds the final bracket width."""
    f = lambda x: stationarity_residual(x, inp)
    x, it, br = bisect(f, bracket[0], bracket[1], tol)
    return RootResult(x, f(x), it, br, residual_scale(x, inp))


def golden_section_minimize(f, lo: float, hi: float, tol: float = 1e-9, max_iter: int = 500) -> tuple[float, int]:
    """Golden-section search for a minimum of ``f`` on ``[lo, hi]``.

    The interval must bracket a minimum: ``f`` decreasing at ``lo`` and
    increasing at ``hi``.
    """
    if not lo < hi:
        raise BracketError(f"empty interval [{lo}, {hi}]")
    probe = 1e-6 * (hi - lo)
    falling_at_lo = f(lo + probe) < f(lo)
    rising_at_hi = f(hi - probe) < f(hi)
    if not (falling_at_lo and rising_at_hi):
        raise BracketError(
            f"[{lo}, {hi}] does not bracket a minimum "
            f"(decreasing at lo: {falling_at_lo}, increasing at hi: {rising_at_hi})"
        )
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    it = 0
    while hi - lo > tol and it < max_iter:
        it += 1
        if f1 < f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = f(x2)
    return 0.5 * (lo + hi), it


def minimize_K_golden(inp: CalibrationInput, interval: tuple[float, float], tol: float = 1e-9) -> float:
    """Direct minimization of the surrogate cost K(U0) on ``interval``."""
    x, _ = golden_section_minimize(lambda u: surrogate_cost(u, inp), interval[0], interval[1], tol)
    return x


@dataclass(frozen=True)
class PmpSolution:
    times: np.ndarray
    control_grid: np.ndarray
    adjoints: np.ndarray  # shape (n + 1, 3): lambda_S, lambda_I, lambda_R
    trajectory: Trajectory
    cost: CostBreakdown
    converged: bool
    sweeps: int
    cost_history: list[float] = field(default_factory=list)


def _adjoint_sweep(traj: Trajectory, u: np.ndarray, beta: float, mu: float) -> np.ndarray:
    """Integrate the costate equations backwards from zero terminal values (RK4).

    States and control at half steps are linear interpolants of the grid.
    """
    n = len(traj) - 1
    h = traj.step
    S, I, U = traj.s.tolist(), traj.i.tolist(), u.tolist()
    lam = np.zeros((n + 1, 3))

    def rhs(ls, li, lr, s, i, uu):
        # -dH/dS, -dH/dI, -dH/dR with H = I + A u^2/2 + lambda . f
        return (
            ls * (beta * i + uu) - li * beta * i - lr * uu,
            -1.0 + ls * beta * s - li * (beta * s - mu) - lr * mu,
            0.0,
        )

    ls = li = lr = 0.0
    h2, h6 = 0.5 * h, h / 6.0
    for k in range(n, 0, -1):
        sm, im, um = 0.5 * (S[k] + S[k - 1]), 0.5 * (I[k] + I[k - 1]), 0.5 * (U[k] + U[k - 1])
        a1, b1, c1 = rhs(ls, li, lr, S[k], I[k], U[k])
        a2, b2, c2 = rhs(ls - h2 * a1, li - h2 * b1, lr - h2 * c1, sm, im, um)
        a3, b3, c3 = rhs(ls - h2 * a2, li - h2 * b2, lr - h2 * c2, sm, im, um)
        a4, b4, c4 = rhs(ls - h * a3, li - h * b3, lr - h * c3, S[k - 1], I[k - 1], U[k - 1])
        ls -= h6 * (a1 + 2 * a2 + 2 * a3 + a4)
        li -= h6 * (b1 + 2 * b2 + 2 * b3 + b4)
        lr -= h6 * (c1 + 2 * c2 + 2 * c3 + c4)
        lam[k - 1] = (ls, li, lr)
    return lam


def pmp_forward_backward_sweep(
    inp: CalibrationInput,
    u_max: float = 0.9,
    step: float = 0.01,
    damping: float = 0.5,
    max_sweeps: int = 500,
    tol: float = 1e-8,
    r0: float = 0.0,
    initial_control: np.ndarray | None = None,
) -> PmpSolution:
    """Forward-backward sweep with damped updates toward
    ``u* = clamp(S (lambda_S - lambda_R) / A, 0, u_max)``.

    Stops when successive control grids differ by at most ``tol`` in max
    norm; otherwise returns the last iterate with ``converged=False``.
    """
    if not 0 < damping <= 1:
        raise ConfigurationError(f"damping must lie in (0, 1], got {damping!r}")
    if u_max < 0:
        raise ConfigurationError("u_max must be nonnegative")
    a, beta, mu = inp.a, inp.beta, inp.mu
    initial = PopulationState(inp.s0, inp.i0, r0)
    n = round(inp.t_horizon / step)
    u = np.zeros(n + 1) if initial_control is None else np.clip(np.asarray(initial_control, float), 0.0, u_max)

    traj = integrate(initial, inp.params, u, inp.t_horizon, step, "rk4")
    history = [evaluate_J(traj, a).total]
    converged = False
    sweeps = 0
    lam = np.zeros((n + 1, 3))
    while sweeps < max_sweeps:
        sweeps += 1
        lam = _adjoint_sweep(traj, u, beta, mu)
        target = np.clip(traj.s * (lam[:, 0] - lam[:, 2]) / a, 0.0, u_max)
        u_new = (1.0 - damping) * u + damping * target
        change = float(np.max(np.abs(u_new - u)))
        u = u_new
        traj = integrate(initial, inp.params, u, inp.t_horizon, step, "rk4")
        history.append(evaluate_J(traj, a).total)
        if change <= tol:
            converged = True
            break
    return PmpSolution(traj.times, u, lam, traj, evaluate_J(traj, a), converged, sweeps, history)
