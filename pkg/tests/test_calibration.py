"""Calibration system: closed form, structural degeneracy, solver paths."""

import math

import numpy as np
import pytest

from _frozen_reference import FROZEN
from rac import (
    CalibrationResult,
    RHO_ANCHORS,
    SampleMoments,
    SufficiencyFactors,
    Variant,
    calibrate_variant,
    consistency_gap,
    solve_closed_form_given_rho,
    solve_system,
    system_residuals,
)
from rac.calibration import condition_diagnostic
from rac.errors import DegenerateSystem, NoConvergence


def residuals_oracle(zeta, xi, rho, beta, m):
    """The three formulas retyped independently of the implementation."""
    lnb = math.log(beta)
    rhs_a = -lnb - math.log(xi) + rho * m.mu_x - (rho**2) * m.sigma2_x / 2.0
    rhs_b = (
        math.log(m.mean_x)
        - lnb
        - math.log(zeta)
        - (1 - rho) * m.mu_x
        - ((1 - rho) ** 2) * m.sigma2_x / 2.0
    )
    rhs_c = math.log(xi) - math.log(zeta) + rho * m.sigma2_x
    return (
        math.log(m.mean_Rf) - rhs_a,
        math.log(m.mean_Re) - rhs_b,
        math.log(m.mean_Re / m.mean_Rf) - rhs_c,
    )


def random_moments(rng, gap_scale=1e-4):
    mu = float(rng.uniform(-0.05, 0.05))
    s2 = float(rng.uniform(0.0, 0.01))
    gap = float(rng.uniform(-gap_scale, gap_scale))
    mean_x = math.exp(mu + s2 / 2.0 + gap)
    return SampleMoments(
        mu_x=mu,
        sigma2_x=s2,
        mean_x=mean_x,
        mean_Re=float(rng.uniform(0.9, 1.3)),
        mean_Rf=float(rng.uniform(0.9, 1.2)),
        mu_z=float(rng.uniform(5.0, 9.0)),
        sigma2_z=float(rng.uniform(0.0, 0.5)),
    )


# -- system_residuals ---------------------------------------------------------

def test_residuals_all_zero_trivial_case():
    m = SampleMoments(0.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0)
    res = system_residuals(SufficiencyFactors(1.0, 1.0), 0.0, 1.0, m)
    assert tuple(res) == (0.0, 0.0, 0.0)


def test_residuals_match_independent_formulas():
    rng = np.random.default_rng(7)
    for _ in range(200):
        m = random_moments(rng)
        zeta = float(rng.uniform(0.5, 2.0))
        xi = float(rng.uniform(0.5, 2.0))
        rho = float(rng.uniform(0.0, 5.0))
        beta = float(rng.uniform(0.5, 1.0))
        got = system_residuals(SufficiencyFactors(zeta, xi), rho, beta, m)
        want = residuals_oracle(zeta, xi, rho, beta, m)
        assert np.allclose(got, want, rtol=0, atol=1e-12)


def test_residuals_beta_validation():
    m = SampleMoments(0.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        system_residuals(SufficiencyFactors(1.0, 1.0), 0.0, 0.0, m)
    with pytest.raises(ValueError):
        system_residuals(SufficiencyFactors(1.0, 1.0), 0.0, 1.5, m)


# -- closed form --------------------------------------------------------------

def test_closed_form_exact_fit_identity():
    rng = np.random.default_rng(11)
    for _ in range(200):
        m = random_moments(rng)
        rho = float(rng.uniform(0.0, 5.0))
        beta = float(rng.uniform(0.5, 1.0))
        f = solve_closed_form_given_rho(rho, beta, m)
        r = system_residuals(f, rho, beta, m)
        assert abs(r[0]) <= 1e-10
        assert abs(r[1]) <= 1e-10
        assert abs(r[2] - consistency_gap(m)) <= 1e-10


def test_closed_form_trivial_xi():
    m = SampleMoments(0.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0)
    f = solve_closed_form_given_rho(0.0, 1.0, m)
    assert f.xi == 1.0
    assert f.zeta == 1.0


def test_closed_form_bundled_anchor(variant_moments):
    f = solve_closed_form_given_rho(1.033526, 0.99, variant_moments["realized"])
    assert abs(f.zeta - 0.961745) < 1e-2
    assert abs(f.xi - 1.019392) < 1e-2


def test_xi_monotone_in_rho_direction():
    rng = np.random.default_rng(13)
    h = 1e-5
    checked = 0
    while checked < 100:
        m = random_moments(rng)
        rho = float(rng.uniform(0.0, 5.0))
        slope_sign = m.mu_x - rho * m.sigma2_x
        if abs(slope_sign) < 1e-3:
            continue
        up = solve_closed_form_given_rho(rho + h, 0.99, m).xi
        down = solve_closed_form_given_rho(rho - h, 0.99, m).xi
        assert (up > down) == (slope_sign > 0)
        checked += 1


# -- solve_system -------------------------------------------------------------

def test_solve_bundled_realized(variant_moments):
    m = variant_moments["realized"]
    result = solve_system(0.99, m, init=(1.0, 1.0, 1.033526))
    blk = FROZEN["realized"]
    assert result.rho == 1.033526
    assert math.isclose(result.factors.zeta, blk["zeta"], rel_tol=1e-12)
    assert math.isclose(result.factors.xi, blk["xi"], rel_tol=1e-12)
    assert abs(result.residuals[0]) <= 1e-12
    assert abs(result.residuals[1]) <= 1e-12
    # r_C carries the absolute rounding floor of O(1e-2) log differences,
    # so compare against the analytic gap in absolute terms
    assert abs(result.residuals[2] - result.consistency_gap) <= 1e-12
    assert result.condition_diagnostic >= 1e6


def test_solve_resubstitution_idempotent(variant_moments):
    m = variant_moments["projected"]
    result = solve_system(0.99, m, init=(1.0, 1.0, 1.0089))
    again = system_residuals(result.factors, result.rho, 0.99, m)
    assert np.allclose(again, result.residuals, rtol=0, atol=1e-14)


def test_solve_default_init_is_log_utility(variant_moments):
    result = solve_system(0.99, variant_moments["realized"])
    assert result.rho == 1.0


def test_solve_init_outside_region():
    rng = np.random.default_rng(17)
    m = random_moments(rng)
    with pytest.raises(ValueError):
        solve_system(0.99, m, init=(1.0, 1.0, 61.0))
    with pytest.raises(ValueError):
        solve_system(0.99, m, init=(1.0, 1.0, -0.5))


def test_degenerate_system_raised():
    mu, s2 = 0.02, 0.001
    m = SampleMoments(mu, s2, math.exp(mu + s2 / 2.0), 1.07, 1.01, 7.0, 0.1)
    assert abs(consistency_gap(m)) < 1e-12
    with pytest.raises(DegenerateSystem):
        solve_system(0.99, m)


def test_tiny_gap_accepted_as_root():
    # Gap above the degeneracy gate but inside the root tolerance: the
    # initial rho already satisfies the advertised residual bound.
    mu, s2 = 0.02, 0.001
    mean_x = math.exp(mu + s2 / 2.0) * (1.0 + 1e-10)
    m = SampleMoments(mu, s2, mean_x, 1.07, 1.01, 7.0, 0.1)
    gap = consistency_gap(m)
    assert 1e-12 < abs(gap) <= 1e-9
    result = solve_system(0.99, m, init=(1.0, 1.0, 2.0))
    assert result.rho == 2.0
    assert max(abs(r) for r in result.residuals) <= 1e-9


def test_no_convergence_on_nonflat_rootless_profile(variant_moments):
    with pytest.raises(NoConvergence):
        solve_system(
            0.99,
            variant_moments["realized"],
            _profile=lambda rho: 1.0 + rho,
        )


def test_root_found_when_profile_crosses_zero(variant_moments):
    result = solve_system(
        0.99,
        variant_moments["realized"],
        _profile=lambda rho: rho - 2.5,
    )
    assert abs(result.rho - 2.5) < 1e-9


def test_no_convergence_when_factors_leave_region():
    m = SampleMoments(0.02, 0.001, 1.0205, 1.07, 1e-3, 7.0, 0.1)
    with pytest.raises(NoConvergence):
        solve_system(0.99, m)


# -- calibrate_variant --------------------------------------------------------

def test_variant_anchors(variant_moments):
    realized = calibrate_variant(variant_moments["realized"], 0.99, Variant.REALIZED)
    projected = calibrate_variant(
        variant_moments["projected"], 0.99, Variant.PROJECTED
    )
    assert realized.rho == RHO_ANCHORS[Variant.REALIZED] == 1.033526
    assert projected.rho == RHO_ANCHORS[Variant.PROJECTED] == 1.0089
    assert math.isclose(projected.factors.zeta, FROZEN["projected"]["zeta"], rel_tol=1e-12)
    assert math.isclose(projected.factors.xi, FROZEN["projected"]["xi"], rel_tol=1e-12)


def test_variant_rho_override(variant_moments):
    result = calibrate_variant(
        variant_moments["realized"], 0.99, Variant.REALIZED, rho=2.0
    )
    assert result.rho == 2.0
    f = solve_closed_form_given_rho(2.0, 0.99, variant_moments["realized"])
    assert result.factors == f


# -- diagnostics and validation -----------------------------------------------

def test_condition_diagnostic_floor():
    rng = np.random.default_rng(19)
    for _ in range(50):
        m = random_moments(rng)
        f = SufficiencyFactors(float(rng.uniform(0.5, 2.0)), float(rng.uniform(0.5, 2.0)))
        assert condition_diagnostic(f, float(rng.uniform(0.0, 5.0)), m) >= 1.0


def test_sufficiency_factors_validation():
    with pytest.raises(ValueError):
        SufficiencyFactors(0.0, 1.0)
    with pytest.raises(ValueError):
        SufficiencyFactors(1.0, -2.0)


def test_calibration_result_validation():
    f = SufficiencyFactors(1.0, 1.0)
    with pytest.raises(ValueError):
        CalibrationResult(f, 1.0, (0.0, math.inf, 0.0), 10.0, 0.0)
    with pytest.raises(ValueError):
        CalibrationResult(f, 1.0, (0.0, 0.0, 0.0), 0.5, 0.0)


def test_solve_beta_validation(variant_moments):
    with pytest.raises(ValueError):
        solve_system(0.0, variant_moments["realized"])
    with pytest.raises(ValueError):
        solve_system(1.0001, variant_moments["realized"])
