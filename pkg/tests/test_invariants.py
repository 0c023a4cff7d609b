"""Quadrature invariants, Taylor coefficients, and the series inverses.

Oracles: circle closed forms, the arc-length/curvature quadrature route,
scale covariance, and the Legendre-duality residual between the alpha and
beta series.
"""

import math

import numpy as np
import pytest

from billiards.errors import NonConvergent, OutOfRange
from billiards.geometry import DomainSpec, build_domain
from billiards.invariants import (
    alpha_coefficients,
    alpha_series_eval,
    beta_coefficients,
    beta_series_derivative,
    beta_series_eval,
    caustic_length_coefficients,
    compute_invariants,
    isoperimetric_defect,
    lazutkin_of_rotation,
    rotation_of_lazutkin,
)

PI = math.pi


def circle_targets(R):
    cbrtR = R ** (1.0 / 3.0)
    return (
        2 * PI * R,
        2 * PI * cbrtR,
        18 * PI / cbrtR,
        18 * PI / R,
        281 * PI / 22400 / R ** (5.0 / 3.0),
    )


@pytest.mark.parametrize("R", [1.0, 2.0, 0.5])
def test_circle_invariants_closed_form(R):
    dom = build_domain(DomainSpec.circle(R))
    inv = compute_invariants(dom, 256)
    for value, target in zip(inv.as_tuple(), circle_targets(R)):
        assert math.isclose(value, target, rel_tol=1e-12)


def test_quadrature_reports_doubled_grid(circle_domain):
    inv = compute_invariants(circle_domain, 256)
    assert inv.quadrature_N == 512


def test_quadrature_rejects_bad_N(circle_domain):
    with pytest.raises(OutOfRange):
        compute_invariants(circle_domain, 63)
    with pytest.raises(OutOfRange):
        compute_invariants(circle_domain, 127)


def test_quadrature_nonconvergent_when_capped():
    dom = build_domain(DomainSpec.ellipse(1.0, 0.92))
    with pytest.raises(NonConvergent):
        compute_invariants(dom, 64, rel_tol=1e-10, max_N=128)


@pytest.mark.parametrize("spec_name", ["ellipse", "fourier"])
def test_dual_quadrature_routes_agree(spec_name, ellipse_domain, fourier_domain):
    dom = ellipse_domain if spec_name == "ellipse" else fourier_domain
    inv_rho = compute_invariants(dom, 2048)
    inv_arc = compute_invariants(dom, 2048, form="arclength")
    for a, b in zip(inv_rho.as_tuple(), inv_arc.as_tuple()):
        assert math.isclose(a, b, rel_tol=1e-8)


@pytest.mark.parametrize("lam", [0.5, 2.0, 3.0])
def test_scale_covariance(lam):
    base = build_domain(DomainSpec.ellipse(1.0, 0.55))
    scaled = build_domain(DomainSpec.ellipse(lam, 0.55))
    inv0 = compute_invariants(base, 1024)
    inv1 = compute_invariants(scaled, 1024)
    powers = {"I1": 1.0, "I3": 1 / 3, "I5": -1 / 3, "I7": -1.0, "I9": -5 / 3}
    for name, power in powers.items():
        assert math.isclose(getattr(inv1, name), lam**power * getattr(inv0, name), rel_tol=1e-11)


def test_beta_series_horner_matches_powers(ellipse_domain):
    # beta_k are derivatives at 0, so each term carries 1/k!
    b = beta_coefficients(compute_invariants(ellipse_domain, 512))
    for w in (0.01, 0.07, 0.15):
        direct = sum(
            getattr(b, f"beta{k}") * w**k / math.factorial(k) for k in (1, 3, 5, 7, 9)
        )
        assert math.isclose(float(beta_series_eval(b, w)), direct, rel_tol=1e-14)


def test_beta_series_derivative_matches_fd(ellipse_domain):
    b = beta_coefficients(compute_invariants(ellipse_domain, 512))
    eps = 1e-6
    for w in (0.02, 0.1):
        fd = (float(beta_series_eval(b, w + eps)) - float(beta_series_eval(b, w - eps))) / (2 * eps)
        assert math.isclose(fd, float(beta_series_derivative(b, w)), rel_tol=1e-8)


def test_circle_beta_slope_is_minus_perimeter(circle_domain):
    b = beta_coefficients(compute_invariants(circle_domain, 512))
    assert math.isclose(b.beta1, -circle_domain.total_length, rel_tol=1e-12)


def test_alpha_series_against_exact_circle_conjugate(circle_domain):
    """Legendre duality on the circle, where both sides are exact.

    beta(w) = -2 sin(pi w) gives c = beta'(w) = -2 pi cos(pi w) and
    alpha(c) = w c + 2 sin(pi w); the series truncation error drops by
    ~2^9 per halving of w.
    """
    inv = compute_invariants(circle_domain, 512)
    alpha = alpha_coefficients(inv)
    residuals = []
    for w in (0.2, 0.1, 0.05):
        c = -2 * PI * math.cos(PI * w)
        exact = w * c + 2 * math.sin(PI * w)
        residuals.append(abs(float(alpha_series_eval(alpha, c)) - exact))
    assert residuals[0] < 1e-6
    # the omitted term scales like u^{11/2} ~ w^{11}: each halving gains ~2^11
    assert residuals[0] / residuals[1] > 1000
    assert residuals[1] / residuals[2] > 1000


def test_legendre_duality_on_ellipse(ellipse_domain):
    """alpha(beta'(w)) = w beta'(w) - beta(w) up to the truncation order."""
    inv = compute_invariants(ellipse_domain, 2048)
    b = beta_coefficients(inv)
    alpha = alpha_coefficients(inv)
    prev = None
    for w in (0.08, 0.04, 0.02):
        c = float(beta_series_derivative(b, w))
        lhs = float(alpha_series_eval(alpha, c))
        rhs = w * c - float(beta_series_eval(b, w))
        resid = abs(lhs - rhs)
        if prev is not None:
            assert prev / max(resid, 1e-18) > 2**7
        prev = resid
    assert prev < 1e-13


def test_alpha_series_domain_check(circle_domain):
    alpha = alpha_coefficients(compute_invariants(circle_domain, 512))
    with pytest.raises(OutOfRange):
        alpha_series_eval(alpha, -alpha.ell0 - 1e-3)
    # clamped at the corner point
    assert float(alpha_series_eval(alpha, -alpha.ell0)) == 0.0


def test_lazutkin_parameter_circle_closed_form(circle_domain):
    """On the unit circle the caustic at rotation w has radius cos(pi w),
    so the chord-minus-arc defect is exactly 2 sin(pi w) - 2 pi w cos(pi w).
    The degree-9 series should miss it only at the w^11 order."""
    inv = compute_invariants(circle_domain, 512)
    residuals = []
    for w in (0.2, 0.1, 0.05):
        exact = 2.0 * math.sin(PI * w) - 2.0 * PI * w * math.cos(PI * w)
        residuals.append(abs(float(lazutkin_of_rotation(inv, w)) - exact))
    assert residuals[0] / residuals[1] > 1000
    assert residuals[1] / residuals[2] > 1000
    assert residuals[2] < 1e-15


def test_lazutkin_rotation_roundtrip(ellipse_domain):
    inv = compute_invariants(ellipse_domain, 2048)
    for w in (0.005, 0.02, 0.05):
        L = float(lazutkin_of_rotation(inv, w))
        assert L > 0
        back = float(rotation_of_lazutkin(inv, L))
        assert abs(back - w) < 1e-10 * max(1.0, 1.0 / w)


def test_rotation_of_lazutkin_rejects_negative(ellipse_domain):
    inv = compute_invariants(ellipse_domain, 512)
    with pytest.raises(OutOfRange):
        rotation_of_lazutkin(inv, -1e-3)


def test_caustic_length_series_on_circle(circle_domain):
    """|Gamma|(L) against the exact concentric-circle pair."""
    inv = compute_invariants(circle_domain, 512)
    cl = caustic_length_coefficients(inv)
    for zeta in (0.06, 0.03):
        rho0 = math.cos(zeta)
        L = 2.0 * rho0 * (math.tan(zeta) - zeta)
        series = inv.I1 - cl.a * L ** (2 / 3) + cl.b * L ** (4 / 3) + cl.c * L**2 + cl.d * L ** (8 / 3)
        assert math.isclose(series, 2 * PI * rho0, abs_tol=1e-10)


def test_isoperimetric_defect_signs(circle_domain, ellipse_domain, fourier_domain):
    assert abs(isoperimetric_defect(compute_invariants(circle_domain, 512))) < 1e-10
    assert isoperimetric_defect(compute_invariants(ellipse_domain, 1024)) < -1e-3
    assert isoperimetric_defect(compute_invariants(fourier_domain, 1024)) < -1e-6
