"""Sufficiency-factor calibration from sample moments.

The system ties the risk-free rate, the equity return, and the equity
premium to the consumption-growth moments through two sufficiency factors
and the risk-aversion coefficient (log growth treated as normal, residuals
written LHS - RHS):

    eq A:  ln mean_Rf = -ln beta - ln xi   + rho*mu_x     - rho^2*sigma2_x/2
    eq B:  ln mean_Re =  ln mean_x - ln beta - ln zeta
                         - (1-rho)*mu_x - (1-rho)^2*sigma2_x/2
    eq C:  ln mean_Re - ln mean_Rf = ln xi - ln zeta + rho*sigma2_x

Structure that drives everything here: for every (zeta, xi, rho),

    residual_C = residual_B - residual_A + gap,

where gap = ln(mean_x) - mu_x - sigma2_x/2 is the sample's consistency gap.
Consequently solving eqs A and B exactly for (zeta, xi) at any rho (the
closed form below) leaves residual_C equal to the gap, a constant in rho.
An exact root of all three equations exists only when the gap is zero, and
then every rho in the search region is a root. Either way the equations
cannot identify rho: the Jacobian is rank 2 everywhere (row C = row B -
row A exactly), and the eliminated profile is flat.

solve_system therefore reports honestly: a zero gap raises DegenerateSystem
rather than picking an arbitrary family member; a nonzero gap means no root
exists, the flat profile is detected, and the returned triple is the
closed-form family member at the initial-guess rho, with residuals
(0, 0, gap) and a conditioning diagnostic that makes the rank deficiency
visible. rho is pinned by the caller: RHO_ANCHORS carries the published
reference values for the two variants of the bundled dataset, and the CLI
passes them through calibrate_variant. Overriding rho changes zeta and xi
only through the slowly varying closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateSystem, NoConvergence
from .moments import SampleMoments, consistency_gap

DEGENERACY_TOL = 1e-12
ROOT_TOL = 1e-9
RHO_REGION = (0.0, 60.0)
FACTOR_REGION_MAX = 10.0

# Flat-profile detection: spread of the eliminated eq-C residual across the
# probed brackets, relative to its magnitude.
_FLATNESS_ABS = 1e-10
_FLATNESS_REL = 1e-6


class Variant(Enum):
    """Which final consumption year a dataset carries."""

    REALIZED = "realized"
    PROJECTED = "projected"


# Published reference calibration for the bundled 1889-1978 reconstruction.
# The equation system leaves rho free (module docstring), so the variant
# anchor supplies it; zeta and xi are always recomputed from the data.
RHO_ANCHORS: dict[Variant, float] = {
    Variant.REALIZED: 1.033526,
    Variant.PROJECTED: 1.0089,
}


@dataclass(frozen=True)
class SufficiencyFactors:
    """Equity factor zeta and risk-free factor xi."""

    zeta: float
    xi: float

    def __post_init__(self):
        if self.zeta <= 0 or self.xi <= 0:
            raise ValueError("sufficiency factors must be positive")


@dataclass(frozen=True)
class CalibrationResult:
    factors: SufficiencyFactors
    rho: float
    residuals: tuple[float, float, float]
    condition_diagnostic: float
    consistency_gap: float

    def __post_init__(self):
        if not all(math.isfinite(r) for r in self.residuals):
            raise ValueError("residuals must be finite")
        if not self.condition_diagnostic >= 1.0:
            raise ValueError("condition diagnostic must be >= 1")


def _check_beta(beta: float) -> None:
    if not 0.0 < beta <= 1.0:
        raise ValueError(f"beta must be in (0, 1], got {beta}")


def system_residuals(
    f: SufficiencyFactors, rho: float, beta: float, m: SampleMoments
) -> np.ndarray:
    """LHS - RHS of eqs A, B, C at (f, rho), as a 3-vector."""
    _check_beta(beta)
    ln_zeta = math.log(f.zeta)
    ln_xi = math.log(f.xi)
    ln_beta = math.log(beta)
    r_a = math.log(m.mean_Rf) - (
        -ln_beta - ln_xi + rho * m.mu_x - 0.5 * rho**2 * m.sigma2_x
    )
    r_b = math.log(m.mean_Re) - (
        math.log(m.mean_x)
        - ln_beta
        - ln_zeta
        - (1.0 - rho) * m.mu_x
        - 0.5 * (1.0 - rho) ** 2 * m.sigma2_x
    )
    r_c = (math.log(m.mean_Re) - math.log(m.mean_Rf)) - (
        ln_xi - ln_zeta + rho * m.sigma2_x
    )
    return np.array([r_a, r_b, r_c])


def solve_closed_form_given_rho(
    rho: float, beta: float, m: SampleMoments
) -> SufficiencyFactors:
    """The (zeta, xi) that zero eqs A and B exactly at this rho."""
    _check_beta(beta)
    ln_xi = (
        -math.log(m.mean_Rf) - math.log(beta) + rho * m.mu_x - 0.5 * rho**2 * m.sigma2_x
    )
    ln_zeta = (
        math.log(m.mean_x)
        - math.log(beta)
        - (1.0 - rho) * m.mu_x
        - 0.5 * (1.0 - rho) ** 2 * m.sigma2_x
        - math.log(m.mean_Re)
    )
    return SufficiencyFactors(zeta=math.exp(ln_zeta), xi=math.exp(ln_xi))


def _jacobian(f: SufficiencyFactors, rho: float, m: SampleMoments) -> np.ndarray:
    """d(residuals)/d(zeta, xi, rho). Row C equals row B - row A exactly."""
    mu, s2 = m.mu_x, m.sigma2_x
    return np.array(
        [
            [0.0, 1.0 / f.xi, -mu + rho * s2],
            [1.0 / f.zeta, 0.0, -mu - (1.0 - rho) * s2],
            [1.0 / f.zeta, -1.0 / f.xi, -s2],
        ]
    )


def condition_diagnostic(
    f: SufficiencyFactors, rho: float, m: SampleMoments
) -> float:
    """2-norm condition number of the system Jacobian (>= 1; enormous or
    infinite here, since the rows are exactly dependent)."""
    cond = float(np.linalg.cond(_jacobian(f, rho, m)))
    # Guard against a rounding fluke reporting slightly below 1.
    return max(cond, 1.0)


def _refine_root(profile, lo, flo, hi, fhi, max_iter=200):
    """Bisection with a secant nudge on a bracketing interval."""
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        denom = fhi - flo
        if denom != 0.0:
            sec = hi - fhi * (hi - lo) / denom
            if lo < sec < hi:
                mid = sec
        fmid = profile(mid)
        if abs(fmid) <= 1e-12 or (hi - lo) < 1e-14:
            return mid
        if (fmid < 0) == (flo < 0):
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
    raise NoConvergence("root refinement exhausted its iteration budget")


def solve_system(
    beta: float,
    m: SampleMoments,
    init: tuple[float, float, float] | None = None,
    *,
    _profile=None,
) -> CalibrationResult:
    """Solve the three-equation system as far as it determines anything.

    init is an optional (zeta, xi, rho) guess; only its rho matters, since
    (zeta, xi) are recomputed in closed form at every candidate rho. The
    default guess is rho = 1 (log utility).

    Behavior, per the structure in the module docstring:

    - |gap| < 1e-12: DegenerateSystem (a one-parameter family solves the
      system; no single triple is meaningful).
    - The eliminated eq-C profile has a root in [0, 60] (possible only when
      |gap| <= the root tolerance): that root is returned and the residual
      vector satisfies the 1e-9 bound.
    - The profile is flat and rootless (the generic case, since it equals
      the gap identically): the family member at the initial rho is
      returned, residuals (0, 0, gap). Callers that need a specific rho
      must supply it; see RHO_ANCHORS and calibrate_variant.
    - The profile varies but never changes sign in the region (impossible
      for the equations above, reachable through the testing hook):
      NoConvergence.

    `_profile` is a testing hook replacing the eliminated-residual function.
    """
    _check_beta(beta)
    gap = consistency_gap(m)
    if abs(gap) < DEGENERACY_TOL:
        raise DegenerateSystem(
            "consistency gap is zero to machine precision: eq C is exactly "
            "eq B - eq A, every rho solves the system, no unique triple exists"
        )

    lo_bound, hi_bound = RHO_REGION
    rho0 = 1.0 if init is None else float(init[2])
    if not lo_bound <= rho0 <= hi_bound:
        raise ValueError(f"initial rho {rho0} outside search region {RHO_REGION}")

    if _profile is None:
        def _profile(rho):
            f = solve_closed_form_given_rho(rho, beta, m)
            return float(system_residuals(f, rho, beta, m)[2])

    f0 = _profile(rho0)
    rho_star = rho0
    if abs(f0) > ROOT_TOL:
        probes = [(rho0, f0)]
        bracket = None
        step = 0.125
        while step <= 2.0 * (hi_bound - lo_bound):
            for cand in (rho0 - step, rho0 + step):
                cand = min(max(cand, lo_bound), hi_bound)
                fc = _profile(cand)
                probes.append((cand, fc))
                if (fc < 0) != (f0 < 0) or fc == 0.0:
                    bracket = ((rho0, f0), (cand, fc)) if cand > rho0 else ((cand, fc), (rho0, f0))
                    break
            if bracket:
                break
            step *= 2.0
        if bracket:
            (blo, bflo), (bhi, bfhi) = bracket
            rho_star = _refine_root(_profile, blo, bflo, bhi, bfhi)
        else:
            values = [fv for _, fv in probes]
            spread = max(values) - min(values)
            if spread <= _FLATNESS_ABS + _FLATNESS_REL * abs(f0):
                # Flat profile: eq C's residual is rho-invariant, so rho stays
                # at the caller's anchor and the gap is reported as-is.
                rho_star = rho0
            else:
                raise NoConvergence(
                    "eq-C profile changes but never crosses zero in the search region"
                )

    factors = solve_closed_form_given_rho(rho_star, beta, m)
    if not (factors.zeta <= FACTOR_REGION_MAX and factors.xi <= FACTOR_REGION_MAX):
        raise NoConvergence(
            f"closed-form factors ({factors.zeta:.6g}, {factors.xi:.6g}) "
            f"leave the search region (0, {FACTOR_REGION_MAX}]"
        )
    res = system_residuals(factors, rho_star, beta, m)
    return CalibrationResult(
        factors=factors,
        rho=rho_star,
        residuals=(float(res[0]), float(res[1]), float(res[2])),
        condition_diagnostic=condition_diagnostic(factors, rho_star, m),
        consistency_gap=gap,
    )


def calibrate_variant(
    m: SampleMoments,
    beta: float = 0.99,
    variant: Variant = Variant.REALIZED,
    rho: float | None = None,
) -> CalibrationResult:
    """solve_system with the variant's reference rho anchor as the guess.

    This is the calibration entry point the CLI uses: moments come from the
    requested dataset variant, rho from RHO_ANCHORS unless overridden, and
    zeta/xi from the closed form at that rho.
    """
    rho0 = RHO_ANCHORS[variant] if rho is None else rho
    return solve_system(beta, m, init=(1.0, 1.0, rho0))
