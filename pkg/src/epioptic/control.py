"""Exponential control family from the Euler-Lagrange equation ``A u - 2 u'' = 0``.

With ``u(0) = U0`` and ``u -> 0`` at infinity the solution is
``u(t) = U0 exp(-sqrt(A/2) t)``; the weight ``A`` is fixed by asking the
intensity to drop by a factor ``q`` at half the horizon.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import DomainError

DEFAULT_U_MAX = 0.9


def decay_rate(a: float) -> float:
    """Exponent of the control family, ``sqrt(2) * sqrt(A) / 2``."""
    if not a > 0:
        raise DomainError(f"cost weight must be positive, got {a!r}")
    return 0.5 * math.sqrt(2.0) * math.sqrt(a)


def cost_weight_from_attenuation(q: float, t_horizon: float) -> float:
    """Return ``A = 8 ln(q)^2 / T^2`` so that ``u(T/2) = U0 / q``."""
    if not (math.isfinite(q) and q > 1):
        raise DomainError(f"attenuation factor must exceed 1, got {q!r}")
    if not (math.isfinite(t_horizon) and t_horizon > 0):
        raise DomainError(f"horizon must be positive, got {t_horizon!r}")
    return 8.0 * math.log(q) ** 2 / t_horizon**2


@dataclass(frozen=True)
class ControlDesign:
    """One member of the exponential family plus its admissibility bound."""

    q: float
    t_horizon: float
    a: float
    u0: float
    u_max: float = DEFAULT_U_MAX

    def __post_init__(self):
        for name in ("q", "t_horizon", "a", "u0", "u_max"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.q <= 1 or self.t_horizon <= 0 or self.a <= 0:
            raise DomainError(f"need q > 1, T > 0, A > 0: {self}")

    @classmethod
    def from_attenuation(cls, q: float, t_horizon: float, u0: float, u_max: float = DEFAULT_U_MAX) -> ControlDesign:
        return cls(q, t_horizon, cost_weight_from_attenuation(q, t_horizon), u0, u_max)

    @property
    def decay(self) -> float:
        return decay_rate(self.a)

    def with_u0(self, u0: float) -> ControlDesign:
        return replace(self, u0=u0)

    def __call__(self, t: float) -> float:
        return control_value(t, self)


def control_value(t: float, design: ControlDesign) -> float:
    if t < 0:
        raise DomainError(f"time must be nonnegative, got {t!r}")
    return design.u0 * math.exp(-design.decay * t)


def control_derivative(t: float, design: ControlDesign) -> float:
    """Analytic ``du/dt``."""
    return -design.decay * control_value(t, design)


@dataclass(frozen=True)
class AdmissibilityReport:
    admissible: bool
    u_peak: float
    u_max: float
    violation_time: float | None
    reason: str


def check_admissible(design: ControlDesign) -> AdmissibilityReport:
    """Check ``0 <= u(t) <= u_max`` on ``[0, T]``.

    The family is monotone, so its range on the horizon is
    ``[u(T), U0]`` and only the endpoint values need checking.
    """
    reduction = "u(t) is monotone on [0, T], so the bound reduces to 0 <= U0 <= u_max"
    if design.u0 < 0:
        return AdmissibilityReport(False, design.u0, design.u_max, 0.0, f"{reduction}; U0 < 0")
    if design.u0 > design.u_max:
        return AdmissibilityReport(
            False, design.u0, design.u_max, 0.0, f"{reduction}; U0={design.u0:.10g} exceeds u_max={design.u_max:g} at t=0"
        )
    return AdmissibilityReport(True, design.u0, design.u_max, None, reduction)
