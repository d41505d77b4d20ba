"""Risk-attitude classification from a certain/uncertain utility comparison.

A sufficiency factor away from one allocates extra utility to the uncertain
side: negative allocation when eta < 1, positive when eta > 1. Comparing the
certain utility of the last realized year against the discounted, scaled
expectation for the following year then places the investor in one of five
attitudes. Two definition groups exist; they agree on the concave cases and
differ in how explicitly curvature enters.

Group one (definitions 1-5) assumes a strictly concave certain-utility curve
but its not-enough-risk-averse rule (definition 5) nevertheless requires a
strictly convex increasing curve; the rule is kept exactly as defined, so
under group one a negative allocation with a negative utility gap on a
concave curve is unclassifiable. Group two (definitions 6-10) carries the
curvature requirement in every rule.

Horizontal curves use the sign rules with the curvature conditions waived,
except that not-enough-risk-averse is rejected outright (InvalidCombination).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .dataset import MarketDataset
from .errors import InvalidCombination, Unclassifiable
from .moments import compute_moments
from .utility import (
    UtilityComparison,
    UtilitySpec,
    crra_utility,
    expected_utility_unconditional,
    make_comparison,
)

DEFAULT_TOLERANCE = 1e-9


class Curvature(Enum):
    STRICTLY_CONCAVE = "strictly-concave"
    STRICTLY_CONVEX_INCREASING = "strictly-convex-increasing"
    LINEAR = "linear"
    HORIZONTAL = "horizontal"


class DefinitionGroup(Enum):
    ONE = "one"
    TWO = "two"


class AllocationSign(Enum):
    NEGATIVE = "negative"
    POSITIVE = "positive"
    ZERO = "zero"


class Label(Enum):
    RISK_AVERSE = "Risk-averse"
    RISK_LOVING = "Risk-loving"
    NOT_ENOUGH_RISK_LOVING = "Not enough risk-loving"
    NOT_ENOUGH_RISK_AVERSE = "Not enough risk-averse"
    RISK_NEUTRAL = "Risk-neutral"


@dataclass(frozen=True)
class RiskAttitude:
    label: Label
    group: DefinitionGroup
    defining_equation: int
    allocation: AllocationSign


def _sign_from_eta(eta: float) -> AllocationSign:
    if eta <= 0:
        raise ValueError(f"eta must be positive, got {eta}")
    if eta < 1.0:
        return AllocationSign.NEGATIVE
    if eta > 1.0:
        return AllocationSign.POSITIVE
    return AllocationSign.ZERO


def allocation_sign(eta: float, rho: float) -> AllocationSign:
    """Sign of the extra utility allocated by eta, valid for rho >= 0."""
    if rho < 0:
        raise ValueError(f"rho must be >= 0, got {rho}")
    return _sign_from_eta(eta)


def _attitude(label, group, equation, alloc):
    return RiskAttitude(label=label, group=group, defining_equation=equation, allocation=alloc)


def classify(
    cmp: UtilityComparison,
    curvature: Curvature,
    group: DefinitionGroup = DefinitionGroup.TWO,
    tol: float = DEFAULT_TOLERANCE,
) -> RiskAttitude:
    """Map a utility comparison to a risk attitude.

    delta = certain - uncertain. |delta| <= tol is risk-neutral regardless of
    allocation sign (definition 4 or 10). Otherwise a zero allocation
    (eta = 1) matches no definition; the sign rules are per the module
    docstring.
    """
    if tol < 0:
        raise ValueError("tol must be >= 0")
    delta = cmp.certain - cmp.uncertain
    alloc = _sign_from_eta(cmp.eta)
    one = group is DefinitionGroup.ONE

    if abs(delta) <= tol:
        return _attitude(Label.RISK_NEUTRAL, group, 4 if one else 10, alloc)

    if alloc is AllocationSign.ZERO:
        raise Unclassifiable(
            "eta = 1 allocates no extra utility; no definition covers a "
            "nonzero utility gap without an allocation"
        )

    negative = alloc is AllocationSign.NEGATIVE
    gap_up = delta > 0

    if curvature is Curvature.HORIZONTAL:
        if negative and gap_up:
            return _attitude(Label.RISK_AVERSE, group, 1 if one else 6, alloc)
        if not negative and not gap_up:
            return _attitude(Label.RISK_LOVING, group, 2 if one else 8, alloc)
        if not negative and gap_up:
            return _attitude(Label.NOT_ENOUGH_RISK_LOVING, group, 3 if one else 7, alloc)
        raise InvalidCombination(
            "not-enough-risk-averse is rejected under a horizontal curve"
        )

    if one:
        if negative and gap_up:
            return _attitude(Label.RISK_AVERSE, group, 1, alloc)
        if not negative and not gap_up:
            return _attitude(Label.RISK_LOVING, group, 2, alloc)
        if not negative and gap_up:
            return _attitude(Label.NOT_ENOUGH_RISK_LOVING, group, 3, alloc)
        # negative allocation, delta < 0
        if curvature is Curvature.STRICTLY_CONVEX_INCREASING:
            return _attitude(Label.NOT_ENOUGH_RISK_AVERSE, group, 5, alloc)
        raise Unclassifiable(
            "group one: negative allocation with certain < uncertain is "
            "defined only for a strictly convex increasing curve"
        )

    if curvature is Curvature.STRICTLY_CONCAVE:
        if negative and gap_up:
            return _attitude(Label.RISK_AVERSE, group, 6, alloc)
        if not negative and gap_up:
            return _attitude(Label.NOT_ENOUGH_RISK_LOVING, group, 7, alloc)
        raise Unclassifiable(
            "group two: certain < uncertain matches no concave-curve definition"
        )
    if curvature is Curvature.STRICTLY_CONVEX_INCREASING:
        if not negative and not gap_up:
            return _attitude(Label.RISK_LOVING, group, 8, alloc)
        if negative and not gap_up:
            return _attitude(Label.NOT_ENOUGH_RISK_AVERSE, group, 9, alloc)
        raise Unclassifiable(
            "group two: certain > uncertain matches no convex-curve definition"
        )
    raise Unclassifiable(
        f"group two has no definition for a {curvature.value} curve with a "
        "nonzero utility gap"
    )


def curvature_from_rho(rho: float) -> Curvature:
    """Curvature of the shifted power utility: concave for rho > 0, linear
    at rho = 0."""
    if rho < 0:
        raise ValueError(f"rho must be >= 0, got {rho}")
    return Curvature.STRICTLY_CONCAVE if rho > 0 else Curvature.LINEAR


def classify_pipeline(
    d: MarketDataset,
    eta: float,
    rho: float,
    beta: float,
    group: DefinitionGroup = DefinitionGroup.TWO,
    tol: float = DEFAULT_TOLERANCE,
) -> tuple[UtilityComparison, RiskAttitude]:
    """Dataset -> moments -> utilities -> attitude, in one call.

    The certain side is the shifted utility of the next-to-last year's
    consumption; the uncertain side is beta * eta * E[u] with the
    expectation taken over the full-span log-level moments of `d`.
    """
    spec = UtilitySpec(rho=rho, shifted=True)
    m = compute_moments(d)
    certain = crra_utility(d.consumption.values[-2], spec)
    expected = expected_utility_unconditional(m, spec)
    cmp = make_comparison(certain, expected, beta, eta)
    return cmp, classify(cmp, curvature_from_rho(rho), group, tol)
