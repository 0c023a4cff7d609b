"""Exact elliptical tables: invariants, beta series, caustics, inverse problem."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from billiards.ellipse import (
    EllipseParams,
    caustic_length,
    ellipse_beta_series,
    ellipse_invariants,
    ellipse_params,
    recover_ellipse,
    rotation_of_caustic,
    uniqueness_functional,
)
from billiards.elliptic import complete_E, complete_K
from billiards.errors import DomainError, OutOfRange
from billiards.geometry import DomainSpec, build_domain
from billiards.invariants import beta_coefficients, compute_invariants

PI = math.pi


# ------------------------------------------------------------------- params


def test_params_validation():
    with pytest.raises(DomainError):
        ellipse_params(-1.0, 0.3)
    with pytest.raises(DomainError):
        ellipse_params(1.0, 1.0)
    with pytest.raises(DomainError):
        ellipse_params(1.0, -0.1)
    par = ellipse_params(2.0, 0.6)
    assert par.b == pytest.approx(2.0 * math.sqrt(1 - 0.36), rel=1e-15)
    assert par.mu0 == pytest.approx(math.acosh(1 / 0.6), rel=1e-15)
    assert ellipse_params(1.0, 0.0).mu0 == math.inf


def test_params_frozen():
    par = ellipse_params(1.0, 0.5)
    with pytest.raises(AttributeError):
        par.a = 2.0


# -------------------------------------------------- invariants (dual routes)


@pytest.mark.parametrize("a,h", [(1.0, 0.3), (2.0, 0.55)])
def test_closed_form_invariants_match_quadrature(a, h):
    par = ellipse_params(a, h)
    i1, i3, i5 = ellipse_invariants(par)
    dom = build_domain(DomainSpec.ellipse(a, h))
    inv = compute_invariants(dom, 2048)
    assert i1 == pytest.approx(inv.I1, rel=1e-12)
    assert i3 == pytest.approx(inv.I3, rel=1e-12)
    assert i5 == pytest.approx(inv.I5, rel=1e-10)


@pytest.mark.parametrize("a,h", [(1.0, 0.3), (1.4, 0.65)])
def test_closed_form_beta_matches_quadrature_chain(a, h):
    par = ellipse_params(a, h)
    exact = ellipse_beta_series(par)
    dom = build_domain(DomainSpec.ellipse(a, h))
    num = beta_coefficients(compute_invariants(dom, 4096))
    assert num.beta1 == pytest.approx(exact.beta1, rel=1e-12)
    assert num.beta3 == pytest.approx(exact.beta3, rel=1e-11)
    assert num.beta5 == pytest.approx(exact.beta5, rel=1e-10)
    assert num.beta7 == pytest.approx(exact.beta7, rel=1e-9)
    assert num.beta9 == pytest.approx(exact.beta9, rel=1e-8)


def test_beta_series_circle_limit():
    # h -> 0 must reproduce the circle derivatives (-2pi, 2pi^3, ...)
    exact = ellipse_beta_series(ellipse_params(1.0, 1e-8))
    circle = (-2 * PI, 2 * PI**3, -2 * PI**5, 2 * PI**7, -2 * PI**9)
    got = (exact.beta1, exact.beta3, exact.beta5, exact.beta7, exact.beta9)
    for g, w in zip(got, circle):
        assert g == pytest.approx(w, rel=1e-16 + 1e-7)


def test_beta1_is_minus_perimeter():
    par = ellipse_params(1.5, 0.7)
    exact = ellipse_beta_series(par)
    assert exact.beta1 == pytest.approx(-4 * 1.5 * complete_E(0.7), rel=1e-14)


# ----------------------------------------------------------------- caustics


def test_caustic_length_against_direct_quadrature():
    par = ellipse_params(1.0, 0.5)
    mu = 0.6 * par.mu0
    c = par.a * par.h
    A, B = c * math.cosh(mu), c * math.sinh(mu)

    def speed(t):
        return math.hypot(A * math.sin(t), B * math.cos(t))

    quarter, err = quad(speed, 0.0, PI / 2, epsabs=1e-13, limit=200)
    assert err < 1e-10
    assert caustic_length(par, mu) == pytest.approx(4 * quarter, rel=1e-12)


def test_caustic_degenerates_to_focal_segment():
    par = ellipse_params(1.0, 0.5)
    # as mu -> 0 the caustic collapses onto the focal segment, length -> 4c
    # (mu below ~1e-8 would round cosh(mu)^2 to exactly 1 in double precision)
    assert caustic_length(par, 1e-6) == pytest.approx(4 * par.a * par.h, rel=1e-10)


def test_caustic_approaches_boundary():
    par = ellipse_params(1.0, 0.5)
    dom = build_domain(DomainSpec.ellipse(1.0, 0.5))
    near = caustic_length(par, par.mu0 * (1 - 1e-10))
    assert near == pytest.approx(dom.total_length, rel=1e-8)


def test_mu_domain_guards():
    par = ellipse_params(1.0, 0.5)
    for bad in (0.0, -0.1, par.mu0, par.mu0 + 1.0):
        with pytest.raises(DomainError):
            caustic_length(par, bad)
    with pytest.raises(DomainError):
        rotation_of_caustic(ellipse_params(1.0, 0.0), 0.5)


# ----------------------------------------------------------------- rotation


def test_rotation_limits_and_monotonicity():
    par = ellipse_params(1.0, 0.5)
    # omega climbs to 1/2 as mu -> 0, but only at the rate 1/log(1/mu)
    w6 = rotation_of_caustic(par, 1e-6)
    w4 = rotation_of_caustic(par, 1e-4)
    assert w4 < w6 < 0.5
    assert 0.5 - w6 < 0.02
    assert rotation_of_caustic(par, par.mu0 * (1 - 1e-12)) == pytest.approx(
        0.0, abs=1e-5
    )
    mus = np.linspace(1e-4, par.mu0 * (1 - 1e-4), 60)
    omegas = [rotation_of_caustic(par, m) for m in mus]
    assert all(b < a for a, b in zip(omegas, omegas[1:]))


def test_rotation_continuous_across_branch_flip():
    # the arcsin argument peaks at 1 inside the range; omega must stay smooth
    par = ellipse_params(1.0, 0.5)
    I_star = math.cosh(par.mu0) ** 2 / (1.0 + math.tanh(par.mu0) ** 2)
    mu_star = math.acosh(math.sqrt(I_star))
    below = rotation_of_caustic(par, mu_star * (1 - 1e-9))
    above = rotation_of_caustic(par, mu_star * (1 + 1e-9))
    assert abs(below - above) < 1e-7


# ---------------------------------------------------------- inverse problem


def test_uniqueness_functional_shape():
    assert uniqueness_functional(0.0) == pytest.approx(PI * PI / 4.0, rel=1e-15)
    xs = np.linspace(0.0, 0.9999, 40)
    vals = [uniqueness_functional(x) for x in xs]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 0.05
    with pytest.raises(DomainError):
        uniqueness_functional(1.0)
    with pytest.raises(DomainError):
        uniqueness_functional(-0.2)


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("h", [0.1, 0.45, 0.8])
def test_recover_ellipse_roundtrip(a, h):
    exact = ellipse_beta_series(ellipse_params(a, h))
    a_got, h_got = recover_ellipse(exact.beta1, exact.beta3)
    assert a_got == pytest.approx(a, abs=1e-10 * a)
    assert h_got == pytest.approx(h, abs=1e-10)


def test_recover_circle_from_exact_pair():
    # the unit circle has derivative pair (-2 pi, 2 pi^3), pinning h = 0
    a_got, h_got = recover_ellipse(-2 * PI, 2 * PI**3)
    assert h_got == 0.0
    assert a_got == pytest.approx(1.0, rel=1e-14)


def test_recover_rejects_bad_signs_and_impossible_ratio():
    with pytest.raises(OutOfRange):
        recover_ellipse(2.0, 1.0)
    with pytest.raises(OutOfRange):
        recover_ellipse(-2.0, -1.0)
    with pytest.raises(OutOfRange):
        # ratio above pi^2/4 cannot come from any ellipse
        recover_ellipse(-1.0, 4.0 * (PI * PI / 4.0) * 1.01)
