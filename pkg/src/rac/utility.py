"""Constant-relative-risk-aversion utility and its expectation over a
log-normal consumption level.

The shifted form u(c) = (c^(1-rho) - 1)/(1-rho) is zero at c = 1 for every
rho and tends to ln(c) as rho -> 1, so it is the form used whenever values
are compared across different rho. The unshifted form c^(1-rho)/(1-rho) has
no log limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NonPositiveConsumption, UndefinedAtLogLimit
from .moments import SampleMoments


@dataclass(frozen=True)
class UtilitySpec:
    """Curvature parameter and form choice for the utility function."""

    rho: float
    shifted: bool = True

    def __post_init__(self):
        if not (self.rho >= 0 and math.isfinite(self.rho)):
            raise ValueError("rho must be finite and >= 0")


@dataclass(frozen=True)
class UtilityComparison:
    """A certain utility next to the discounted, factor-scaled expectation.

    uncertain is beta * eta * expected_u by construction.
    """

    certain: float
    uncertain: float
    eta: float
    beta: float
    expected_u: float


def crra_utility(c: float, spec: UtilitySpec) -> float:
    """u(c) under `spec`.

    Shifted: (c^(1-rho) - 1)/(1-rho), equal to ln(c) at rho = 1. Computed as
    expm1((1-rho) ln c)/(1-rho), which stays accurate arbitrarily close to
    the log limit. Unshifted: c^(1-rho)/(1-rho), undefined at rho = 1.
    """
    if c <= 0:
        raise NonPositiveConsumption(f"consumption must be positive, got {c}")
    a = 1.0 - spec.rho
    if spec.shifted:
        if a == 0.0:
            return math.log(c)
        return math.expm1(a * math.log(c)) / a
    if a == 0.0:
        raise UndefinedAtLogLimit("unshifted form has no value at rho = 1")
    return math.exp(a * math.log(c)) / a


def expected_utility_unconditional(m: SampleMoments, spec: UtilitySpec) -> float:
    """E[u(c)] treating the consumption level as log-normal(mu_z, sigma2_z).

    With a = 1 - rho the log-normal moment gives
    (exp(a*mu_z + a^2*sigma2_z/2) - 1)/a; at rho = 1 this is mu_z exactly.
    Only the shifted form has the limit, so the unshifted form is rejected.
    """
    if not spec.shifted:
        raise UndefinedAtLogLimit("expected utility uses the shifted form")
    a = 1.0 - spec.rho
    if a == 0.0:
        return m.mu_z
    return math.expm1(a * m.mu_z + 0.5 * a * a * m.sigma2_z) / a


def uncertain_utility(expected_u: float, beta: float, eta: float) -> float:
    """beta * eta * expected_u, the factor-scaled discounted expectation."""
    if not 0.0 < beta <= 1.0:
        raise ValueError(f"beta must be in (0, 1], got {beta}")
    if eta <= 0:
        raise ValueError(f"eta must be positive, got {eta}")
    return beta * eta * expected_u


def make_comparison(
    certain: float, expected_u: float, beta: float, eta: float
) -> UtilityComparison:
    """Build a UtilityComparison with uncertain = beta*eta*expected_u."""
    return UtilityComparison(
        certain=certain,
        uncertain=uncertain_utility(expected_u, beta, eta),
        eta=eta,
        beta=beta,
        expected_u=expected_u,
    )


def implied_consumption(
    theta_t: float,
    theta_next: float,
    z_t: float,
    z_next: float,
    p_t: float,
    q_t: float,
    y_t: float,
) -> float:
    """Consumption from the budget identity of the two-asset endowment economy.

    c_t = theta_t*y_t + theta_t*p_t + z_t*q_t - z_next*q_t - theta_next*p_t

    theta holds equity (dividend y, price p), z holds the riskless bond
    (price q). Market clearing is theta = 1, z = 0, which returns y_t.
    """
    c = theta_t * y_t + theta_t * p_t + z_t * q_t - z_next * q_t - theta_next * p_t
    if c <= 0:
        raise NonPositiveConsumption(f"budget identity gives non-positive consumption {c}")
    return c
