"""SIR state types and the vaccination-controlled vector field."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError


def _require_finite(**values: float) -> None:
    for name, v in values.items():
        if not math.isfinite(v):
            raise DomainError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class EpidemicParams:
    """Infection rate ``beta`` and recovery rate ``mu``, both per day."""

    beta: float = 0.2
    mu: float = 0.1

    def __post_init__(self):
        _require_finite(beta=self.beta, mu=self.mu)
        # beta = 0 is accepted: it is the no-outbreak degenerate scenario
        if self.beta < 0 or self.mu <= 0:
            raise DomainError(f"need beta >= 0 and mu > 0, got {self.beta}, {self.mu}")


@dataclass(frozen=True)
class PopulationState:
    """Susceptible, infected and removed fractions of a normalized population."""

    s: float
    i: float
    r: float = 0.0

    def __post_init__(self):
        _require_finite(s=self.s, i=self.i, r=self.r)
        if self.s < 0 or self.i < 0 or self.r < 0:
            raise DomainError(f"compartments must be nonnegative: {self}")

    @property
    def total(self) -> float:
        return self.s + self.i + self.r

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.s, self.i, self.r)


@dataclass(frozen=True)
class StateDerivative:
    ds: float
    di: float
    dr: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.ds, self.di, self.dr)


def sir_rates(s: float, i: float, beta: float, mu: float, u: float) -> tuple[float, float, float]:
    """Raw right-hand side on plain floats; used by the integrators' inner loops.

    ``dr`` is assembled from the same two products as ``ds`` and ``di`` so the
    three rates cancel exactly when summed.
    """
    infection = beta * s * i
    recovery = mu * i
    vaccination = u * s
    return (-infection - vaccination, infection - recovery, recovery + vaccination)


def controlled_vector_field(state: PopulationState, params: EpidemicParams, u: float) -> StateDerivative:
    """Time derivative of ``state`` under vaccination rate ``u``.

    No clamping is applied: ``u`` may be any finite number.
    """
    _require_finite(u=u)
    return StateDerivative(*sir_rates(state.s, state.i, params.beta, params.mu, u))


def uncontrolled_vector_field(state: PopulationState, params: EpidemicParams) -> StateDerivative:
    return controlled_vector_field(state, params, 0.0)
