"""Real exponential integrals Ei and E1.

Ei uses its convergent power series up to ``EI_SWITCH`` and the asymptotic
expansion beyond.  E1 on the positive axis uses the power series up to
``E1_SWITCH`` and a modified-Lentz continued fraction above it.  For negative
arguments E1 returns the real part of the principal branch, ``-Ei(-x)``;
the dropped ``-i*pi`` is constant and cancels in every difference of E1 values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

EULER_GAMMA = 0.57721566490153286061
EPS = 2.0**-53
EI_SWITCH = 40.0
E1_SWITCH = 1.0
_MAX_TERMS = 500
_TINY = 1e-300


@dataclass(frozen=True)
class ExpIntegralValue:
    value: float
    branch_note: bool = False

    def __float__(self) -> float:
        return self.value


def _ei_series(x: float) -> float:
    # gamma + ln|x| + sum x^n / (n n!)
    term = 1.0
    total = 0.0
    for n in range(1, _MAX_TERMS):
        term *= x / n
        contrib = term / n
        total += contrib
        if abs(contrib) <= EPS * abs(total):
            break
    return EULER_GAMMA + math.log(abs(x)) + total


def _ei_asymptotic(x: float) -> float:
    # e^x / x * sum n! / x^n, stopped at the smallest term
    total = 1.0
    term = 1.0
    for n in range(1, int(x) + 1):
        nxt = term * n / x
        if nxt > term:
            break
        term = nxt
        total += term
        if term <= EPS * total:
            break
    return math.exp(x) / x * total


def _e1_continued_fraction(x: float) -> float:
    # E1(x) = e^-x / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...)))
    b = x + 1.0
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for n in range(1, _MAX_TERMS):
        an = -float(n * n)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) <= EPS:
            return h * math.exp(-x)
    raise ArithmeticError(f"E1 continued fraction did not converge at x={x!r}")


def _e1_positive(x: float) -> float:
    if x <= E1_SWITCH:
        return -_ei_series(-x)
    return _e1_continued_fraction(x)


def exp_integral_ei(x: float) -> float:
    """Principal-value exponential integral ``Ei(x) = -PV int_{-x}^inf e^-t / t dt``."""
    x = float(x)
    if x == 0:
        raise DomainError("Ei has a logarithmic singularity at 0")
    if not math.isfinite(x):
        raise DomainError(f"argument must be finite, got {x!r}")
    if x < 0:
        return -_e1_positive(-x)
    if x <= EI_SWITCH:
        return _ei_series(x)
    return _ei_asymptotic(x)


def exp_integral_e1(x: float) -> ExpIntegralValue:
    """Order-one exponential integral ``E1(x) = int_1^inf e^(-x t) / t dt``.

    Negative ``x`` yields the real part ``-Ei(-x)`` with ``branch_note`` set.
    """
    x = float(x)
    if x == 0:
        raise DomainError("E1 has a logarithmic singularity at 0")
    if not math.isfinite(x):
        raise DomainError(f"argument must be finite, got {x!r}")
    if x > 0:
        return ExpIntegralValue(_e1_positive(x))
    return ExpIntegralValue(-exp_integral_ei(-x), branch_note=True)
