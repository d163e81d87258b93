"""Fixed-step integration of the SIR system with vaccination."""
from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from .control import ControlDesign, control_value
from .errors import ConfigurationError, DivergenceError, DomainError
from .model import EpidemicParams, PopulationState, sir_rates
from .series import CalibrationInput

METHODS = ("classical-euler", "rk4")
_ALIASES = {"classical": "classical-euler", "euler": "classical-euler", "classical-euler": "classical-euler", "rk4": "rk4"}

ControlInput = Callable[[float], float] | Sequence[float] | np.ndarray | None


def normalize_method(method: str) -> str:
    try:
        return _ALIASES[method.lower()]
    except KeyError:
        raise ConfigurationError(f"unknown method {method!r}; choose from {METHODS}") from None


@dataclass(frozen=True)
class Trajectory:
    """States and applied controls on a uniform grid ``times[k] = k * step``."""

    times: np.ndarray
    s: np.ndarray
    i: np.ndarray
    r: np.ndarray
    u: np.ndarray
    step: float
    method: str

    def __post_init__(self):
        n = len(self.times)
        if not all(len(x) == n for x in (self.s, self.i, self.r, self.u)):
            raise ConfigurationError("trajectory columns differ in length")
        for arr in (self.times, self.s, self.i, self.r, self.u):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return len(self.times)

    @property
    def total(self) -> np.ndarray:
        return self.s + self.i + self.r

    def state(self, k: int) -> PopulationState:
        return PopulationState(float(self.s[k]), float(self.i[k]), float(self.r[k]))

    @property
    def states(self) -> list[PopulationState]:
        return [self.state(k) for k in range(len(self))]

    def conservation_drift(self) -> float:
        return float(np.max(np.abs(self.total - self.total[0])))


def _grid(t_end: float, step: float) -> tuple[int, float]:
    if not (math.isfinite(step) and step > 0):
        raise ConfigurationError(f"step must be positive, got {step!r}")
    if not math.isfinite(t_end) or step > t_end:
        raise ConfigurationError(f"step {step!r} exceeds t_end {t_end!r}")
    n = round(t_end / step)
    if abs(n * step - t_end) > 1e-9 * t_end:
        raise ConfigurationError(f"t_end {t_end!r} is not a whole number of steps of {step!r}")
    return n, t_end / n


def integrate(
    initial: PopulationState,
    params: EpidemicParams,
    control: ControlInput,
    t_end: float,
    step: float = 0.01,
    method: str = "rk4",
) -> Trajectory:
    """Integrate from t = 0 to ``t_end``.

    ``control`` is ``None`` (no vaccination), a function of time, or the
    control sampled on the output grid (``n + 1`` values, linearly
    interpolated at RK4 half steps).
    """
    method = normalize_method(method)
    n, h = _grid(t_end, step)
    times = np.arange(n + 1) * h
    times[-1] = t_end

    if control is None:
        u_grid = np.zeros(n + 1)
        u_half = np.zeros(n)
    elif callable(control):
        u_grid = np.array([control(float(t)) for t in times])
        u_half = np.array([control(float(t) + 0.5 * h) for t in times[:-1]]) if method == "rk4" else np.zeros(n)
    else:
        u_grid = np.asarray(control, dtype=float).copy()
        if u_grid.shape != (n + 1,):
            raise ConfigurationError(f"control grid has shape {u_grid.shape}, expected ({n + 1},)")
        u_half = 0.5 * (u_grid[:-1] + u_grid[1:])
    if not np.all(np.isfinite(u_grid)) or not np.all(np.isfinite(u_half)):
        raise DomainError("control values must be finite")

    beta, mu = params.beta, params.mu
    S = np.empty(n + 1)
    I = np.empty(n + 1)
    R = np.empty(n + 1)
    s, i, r = initial.s, initial.i, initial.r
    S[0], I[0], R[0] = s, i, r
    ug = u_grid.tolist()
    uh = u_half.tolist()

    if method == "rk4":
        h2, h6 = 0.5 * h, h / 6.0
        for k in range(n):
            a1, b1, c1 = sir_rates(s, i, beta, mu, ug[k])
            um = uh[k]
            a2, b2, c2 = sir_rates(s + h2 * a1, i + h2 * b1, beta, mu, um)
            a3, b3, c3 = sir_rates(s + h2 * a2, i + h2 * b2, beta, mu, um)
            a4, b4, c4 = sir_rates(s + h * a3, i + h * b3, beta, mu, ug[k + 1])
            s += h6 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
            i += h6 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
            r += h6 * (c1 + 2.0 * c2 + 2.0 * c3 + c4)
            S[k + 1], I[k + 1], R[k + 1] = s, i, r
    else:
        for k in range(n):
            ds, di, dr = sir_rates(s, i, beta, mu, ug[k])
            s += h * ds
            i += h * di
            r += h * dr
            S[k + 1], I[k + 1], R[k + 1] = s, i, r

    finite = np.isfinite(S) & np.isfinite(I) & np.isfinite(R)
    if not finite.all():
        raise DivergenceError(float(times[np.argmin(finite)]))
    return Trajectory(times, S, I, R, u_grid, h, method)


def initial_state(inp: CalibrationInput, r0: float = 0.0) -> PopulationState:
    return PopulationState(inp.s0, inp.i0, r0)


def simulate_controlled(
    inp: CalibrationInput, design: ControlDesign, step: float = 0.01, method: str = "rk4", r0: float = 0.0
) -> Trajectory:
    return integrate(initial_state(inp, r0), inp.params, lambda t: control_value(t, design), design.t_horizon, step, method)


def simulate_uncontrolled(inp: CalibrationInput, step: float = 0.01, method: str = "rk4", r0: float = 0.0) -> Trajectory:
    return integrate(initial_state(inp, r0), inp.params, None, inp.t_horizon, step, method)


def simulate_constant(
    inp: CalibrationInput, u: float, step: float = 0.01, method: str = "rk4", r0: float = 0.0
) -> Trajectory:
    return integrate(initial_state(inp, r0), inp.params, lambda t: u, inp.t_horizon, step, method)
