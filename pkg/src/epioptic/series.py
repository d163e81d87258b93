"""Early-stage closed forms and the calibration of the initial intensity U0.

Along the control family ``u = U0 exp(-k t)`` (``k = sqrt(A/2)``) the
susceptibles, when infection is neglected, follow
``S(t) = S0 exp(c (e^{-k t} - 1))`` with ``c = sqrt(2) U0 / sqrt(A)``, and the
infected then solve a linear ODE whose solution involves E1.  Truncating
``I(t)`` at degree four makes the cost ``K(U0)`` a cubic polynomial in U0 whose
stationary points have a closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .control import decay_rate
from .errors import DegenerateError, DomainError, NoRealRootError
from .model import EpidemicParams
from .special import exp_integral_e1

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class CalibrationInput:
    params: EpidemicParams
    s0: float
    i0: float
    t_horizon: float
    a: float

    def __post_init__(self):
        if self.s0 < 0 or self.i0 < 0:
            raise DomainError("initial fractions must be nonnegative")
        if not self.t_horizon > 0:
            raise DomainError("horizon must be positive")
        if not self.a > 0:
            raise DomainError("cost weight must be positive")

    @property
    def beta(self) -> float:
        return self.params.beta

    @property
    def mu(self) -> float:
        return self.params.mu

    @property
    def infection_pressure(self) -> float:
        """beta * S0"""
        return self.params.beta * self.s0


@dataclass(frozen=True)
class SeriesCoefficients:
    """Intermediate quantities of the quartic expansion at a given U0.

    ``infected_series`` is ``i0 + i0 (bS - mu) t + c2 t^2 + (i0/12) c3 t^3
    - (i0/48) c4 t^4`` and ``K`` is built from ``e2 .. e5`` the same way.
    ``v`` and ``w`` do not depend on U0.
    """

    c2: float
    c3: float
    c4: float
    e2: float
    e3: float
    e4: float
    e5: float
    f4: float
    f5: float
    v: float
    w: float


def _check_a(a: float) -> None:
    if not a > 0:
        raise DomainError(f"cost weight must be positive, got {a!r}")


def susceptible_exact_earlystage(t: float, s0: float, u0: float, a: float) -> float:
    """S(t) under vaccination alone."""
    _check_a(a)
    if t < 0:
        raise DomainError("time must be nonnegative")
    ra = math.sqrt(a)
    return s0 * math.exp(SQRT2 * u0 * math.expm1(-decay_rate(a) * t) / ra)


def susceptible_series(t: float, s0: float, u0: float, a: float) -> float:
    """Degree-2 Taylor polynomial of :func:`susceptible_exact_earlystage`."""
    return s0 - s0 * u0 * t + s0 * (0.25 * SQRT2 * u0 * math.sqrt(a) + 0.5 * u0**2) * t**2


def _ei_exponent(t: float, inp: CalibrationInput, u0: float) -> float:
    # log(I(t)/i0); valid for any real t, callers enforce t >= 0
    ra = math.sqrt(inp.a)
    c = SQRT2 * u0 / ra
    z_t = -c * math.exp(-decay_rate(inp.a) * t)
    z_0 = -c
    # both arguments negative: the -i*pi of each branch cancels in the difference
    diff = exp_integral_e1(z_t).value - exp_integral_e1(z_0).value
    return inp.infection_pressure * SQRT2 * math.exp(-c) * diff / ra - inp.mu * t


def infected_exact(t: float, inp: CalibrationInput, u0: float) -> float:
    """I(t) driven by the early-stage susceptibles, in closed form via E1."""
    if t < 0:
        raise DomainError("time must be nonnegative")
    if u0 == 0:
        raise DomainError("U0 = 0 puts E1 at its singularity; simulate the uncontrolled system instead")
    return inp.i0 * math.exp(_ei_exponent(t, inp, u0))


def series_coefficients(inp: CalibrationInput, u0: float) -> SeriesCoefficients:
    bs, mu, i0, a, T = inp.infection_pressure, inp.mu, inp.i0, inp.a, inp.t_horizon
    ra = math.sqrt(a)
    r2a = SQRT2 * ra
    decay_T = math.exp(-r2a * T)

    c2 = i0 * (-0.5 * bs * u0 + 0.5 * bs**2 - bs * mu + 0.5 * mu**2)
    c3 = (
        bs * u0 * r2a + 2 * bs * u0**2 - 6 * bs**2 * u0 + 6 * bs * u0 * mu
        + 2 * bs**3 - 6 * bs**2 * mu + 6 * bs * mu**2 - 2 * mu**3
    )
    c4 = (
        bs * u0 * a + 3 * bs * u0**2 * r2a + 2 * bs * u0**3
        - 4 * bs**2 * u0 * r2a - 14 * bs**2 * u0**2
        + 4 * bs * u0 * mu * r2a + 8 * bs * u0**2 * mu + 12 * bs**3 * u0 - 24 * bs**2 * u0 * mu
        + 12 * bs * u0 * mu**2 - 2 * bs**4 + 8 * bs**3 * mu - 12 * bs**2 * mu**2
        + 8 * bs * mu**3 - 2 * mu**4
    )
    e2 = 0.5 * i0 * (bs - mu)
    e3 = c2 / 3.0
    f4 = i0 / 48.0 * (bs * r2a + 4 * bs * u0 - 6 * bs**2 + 6 * bs * mu)
    f5 = (
        bs * a + 6 * bs * u0 * r2a + 6 * bs * u0**2 - 4 * bs**2 * r2a - 28 * bs**2 * u0
        + 4 * bs * mu * r2a + 16 * bs * u0 * mu + 12 * bs**3 - 24 * bs**2 * mu + 12 * bs * mu**2
    )
    v = (
        -14 * i0 * T**5 * bs**2 + 3 * i0 * T**5 * bs * r2a + 8 * i0 * T**5 * bs * mu
        - 60 * r2a + 60 * r2a * decay_T - 10 * i0 * T**4 * bs
    )
    w = (
        960 * i0 * T**5 * bs * mu * r2a * decay_T
        + 20 * i0**2 * T**9 * bs**2 * mu
        - 1200 * r2a * decay_T * i0 * T**4 * bs
        + 12 * i0**2 * T**10 * bs**2 * a
        + 124 * i0**2 * T**10 * bs**4
        + 100 * i0**2 * T**9 * bs**3
        - 140 * i0**2 * T**8 * bs**2
        + 7200 * a
        + 1200 * i0 * T**4 * bs * r2a
        + 1680 * i0 * T**5 * bs**2 * r2a
        - 960 * i0 * T**5 * bs * mu * r2a
        - 14400 * a * decay_T
        + 7200 * a * decay_T**2
        - 60 * i0**2 * T**10 * bs**3 * r2a
        - 80 * i0**2 * T**10 * bs**3 * mu
        - 1680 * i0 * T**5 * bs**2 * r2a * decay_T
        + 24 * i0**2 * T**10 * bs**2 * r2a * mu
        - 720 * i0 * T**5 * bs * a
        + 720 * i0 * T**5 * bs * a * decay_T
        - 30 * i0**2 * T**9 * bs**2 * r2a
        - 8 * i0**2 * T**10 * bs**2 * mu**2
    )
    # the cubic and quartic K coefficients coincide with the t^3, t^4 ones of I(t)
    return SeriesCoefficients(c2, c3, c4, e2, e3, c3, c4, f4, f5, v, w)


def infected_series(t: float, inp: CalibrationInput, u0: float) -> float:
    """Degree-4 Taylor polynomial of :func:`infected_exact` at t = 0."""
    co = series_coefficients(inp, u0)
    i0 = inp.i0
    return (
        i0 + i0 * (inp.infection_pressure - inp.mu) * t + co.c2 * t**2
        + i0 / 12.0 * co.c3 * t**3 - i0 / 48.0 * co.c4 * t**4
    )


def _control_effort_integral(u0: float, a: float, T: float) -> float:
    # int_0^T (A/2) u^2 dt for the exponential family
    r2a = SQRT2 * math.sqrt(a)
    return 0.25 * r2a * u0**2 * -math.expm1(-r2a * T)


def surrogate_cost(u0: float, inp: CalibrationInput) -> float:
    """K(U0): integral over [0, T] of the quartic I(t) plus (A/2) u(t)^2."""
    co = series_coefficients(inp, u0)
    T, i0 = inp.t_horizon, inp.i0
    return (
        i0 * T + co.e2 * T**2 + co.e3 * T**3 + i0 / 48.0 * co.e4 * T**4 - i0 / 240.0 * co.e5 * T**5
        + _control_effort_integral(u0, inp.a, T)
    )


def _residual_terms(u0: float, inp: CalibrationInput) -> tuple[float, ...]:
    co = series_coefficients(inp, u0)
    T, i0 = inp.t_horizon, inp.i0
    r2a = SQRT2 * math.sqrt(inp.a)
    return (
        -i0 * inp.infection_pressure * T**3 / 6.0,
        co.f4 * T**4,
        -i0 / 240.0 * co.f5 * T**5,
        0.5 * r2a * u0 * -math.expm1(-r2a * T),
    )


def stationarity_residual(u0: float, inp: CalibrationInput) -> float:
    """dK/dU0, a quadratic in U0."""
    return math.fsum(_residual_terms(u0, inp))


def residual_scale(u0: float, inp: CalibrationInput) -> float:
    """Sum of the magnitudes of the terms of dK/dU0; the natural unit for
    judging how close a residual is to zero."""
    return math.fsum(abs(x) for x in _residual_terms(u0, inp))


def optimal_u0_closed_form(inp: CalibrationInput) -> float:
    """Larger root of dK/dU0 = 0, ``-(V - sqrt(W)) / (6 i0 T^5 beta S0)``.

    Since the U0^2 coefficient of dK/dU0 is negative, this root is where the
    residual crosses from positive to negative.
    """
    denom = 6.0 * inp.i0 * inp.t_horizon**5 * inp.infection_pressure
    if denom == 0:
        raise DegenerateError("i0 * beta * S0 = 0: the stationarity condition is linear with root U0 = 0")
    co = series_coefficients(inp, 0.0)
    if co.w < 0:
        raise NoRealRootError(f"W = {co.w!r} < 0: no real stationary point")
    return -(co.v - math.sqrt(co.w)) / denom


def calibrated_u0(inp: CalibrationInput) -> float:
    """Closed-form U0, falling back to 0 when i0 * beta * S0 = 0.

    In that case every infection-driven term of dK/dU0 vanishes and the
    remaining term is proportional to U0.
    """
    try:
        return optimal_u0_closed_form(inp)
    except DegenerateError:
        return 0.0


# Toy SI model: I' = (beta S0 - u) I with the same control family.

def toy_infected_exact(t: float, beta: float, s0: float, i0: float, u0: float, a: float) -> float:
    _check_a(a)
    if t < 0:
        raise DomainError("time must be nonnegative")
    ra = math.sqrt(a)
    return i0 * math.exp((-u0 * SQRT2 + beta * s0 * t * ra + u0 * SQRT2 * math.exp(-decay_rate(a) * t)) / ra)


def toy_infected_linear(t: float, beta: float, s0: float, i0: float, u0: float) -> float:
    return i0 * (1.0 + beta * s0 * t - t * u0)


def toy_surrogate_cost(u0: float, beta: float, s0: float, i0: float, t_horizon: float, a: float) -> float:
    """K(U0) for the toy model, using the linearized I(t)."""
    T = t_horizon
    return (
        i0 * T + 0.5 * i0 * T**2 * beta * s0 - 0.5 * i0 * T**2 * u0
        + _control_effort_integral(u0, a, T)
    )


def toy_optimal_u0(beta: float, s0: float, i0: float, t_horizon: float, a: float) -> float:
    _check_a(a)
    if not t_horizon > 0:
        raise DomainError("horizon must be positive")
    ra = math.sqrt(a)
    return -0.5 * i0 * t_horizon**2 * SQRT2 / (ra * math.expm1(-SQRT2 * ra * t_horizon))
