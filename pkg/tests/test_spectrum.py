"""Maximal marked length spectrum: orbit search, closed forms, duality."""

import math

import numpy as np
import pytest

from billiards.errors import NoConvergence, OutOfRange
from billiards.geometry import DomainSpec, build_domain
from billiards.spectrum import (
    beta_at_rational,
    compare_spectrum_vs_series,
    marked_length,
    max_periodic_orbit,
)

PI = math.pi


# ------------------------------------------------------------ exact circles


@pytest.mark.parametrize("R", [1.0, 2.0])
def test_circle_polygon_lengths(R):
    # the maximizer with winding p/q is the regular star polygon:
    # ML = 2 q R sin(pi p / q)
    dom = build_domain(DomainSpec.circle(R))
    cases = [(1, 2), (1, 3), (1, 4), (1, 5), (2, 5), (1, 6), (1, 7), (3, 7)]
    for p, q in cases:
        got = marked_length(dom, p, q)
        want = 2 * q * R * math.sin(PI * p / q)
        assert got == pytest.approx(want, rel=1e-12), (p, q)


def test_circle_square_orbit_is_8_sqrt2():
    dom = build_domain(DomainSpec.circle(2.0))
    assert marked_length(dom, 1, 4) == pytest.approx(8 * math.sqrt(2.0), rel=1e-13)


def test_orbit_points_describe_a_regular_triangle(circle_domain):
    orbit = max_periodic_orbit(circle_domain, 1, 3)
    assert orbit.p == 1 and orbit.q == 3
    assert orbit.lifted_points.shape == (3,)
    # consecutive gaps of a regular triangle on the unit circle
    gaps = np.diff(np.append(orbit.lifted_points, orbit.lifted_points[0] + 2 * PI))
    assert np.allclose(gaps, 2 * PI / 3, atol=1e-9)
    pos = orbit.phases()
    assert np.all((pos >= 0) & (pos < orbit.ell0))
    assert np.allclose(pos, orbit.lifted_points % (2 * PI))


# ------------------------------------------------- symmetry and degeneracies


@pytest.mark.parametrize("fixture", ["circle_domain", "ellipse_domain"])
def test_reversed_winding_gives_equal_length(fixture, request):
    dom = request.getfixturevalue(fixture)
    assert marked_length(dom, 1, 3) == pytest.approx(
        marked_length(dom, 2, 3), rel=1e-10
    )


def test_ellipse_bouncing_orbit_is_major_axis(ellipse_domain):
    # ML(1/2) = twice the major axis = 4a for a = 1
    assert marked_length(ellipse_domain, 1, 2) == pytest.approx(4.0, rel=1e-11)


def test_ellipse_bouncing_orbit_scales():
    dom = build_domain(DomainSpec.ellipse(1.7, 0.6))
    assert marked_length(dom, 1, 2) == pytest.approx(4 * 1.7, rel=1e-11)


# --------------------------------------------------------- search mechanics


def test_length_history_is_monotone(fourier_domain):
    orbit = max_periodic_orbit(fourier_domain, 1, 5)
    hist = orbit.length_history
    assert len(hist) >= 1
    slack = 4e-16 * max(1.0, abs(hist[-1]))
    for a, b in zip(hist, hist[1:]):
        assert b >= a - slack
    assert orbit.total_length == pytest.approx(hist[-1], abs=1e-12)


def test_residual_meets_tolerance(fourier_domain):
    tol = 1e-9 * fourier_domain.total_length
    orbit = max_periodic_orbit(fourier_domain, 2, 7, tol=tol)
    assert orbit.residual < tol


def test_invalid_rationals_rejected(circle_domain):
    with pytest.raises(OutOfRange):
        max_periodic_orbit(circle_domain, 1, 1)
    with pytest.raises(OutOfRange):
        max_periodic_orbit(circle_domain, 0, 3)
    with pytest.raises(OutOfRange):
        max_periodic_orbit(circle_domain, 3, 2)
    with pytest.raises(OutOfRange):
        max_periodic_orbit(circle_domain, 2, 4)
    with pytest.raises(OutOfRange):
        max_periodic_orbit(circle_domain, 1, 3, tol=0.0)


def test_unreachable_tolerance_raises(fourier_domain):
    with pytest.raises(NoConvergence):
        max_periodic_orbit(fourier_domain, 1, 5, tol=1e-30, max_iter=3)


def test_beta_at_rational_sign_and_value(circle_domain):
    # beta(1/2) on the unit circle: -ML/q = -4/2
    assert beta_at_rational(circle_domain, 1, 2) == pytest.approx(-2.0, rel=1e-12)


# ------------------------------------------------------------------ duality


def test_poncelet_duality_on_ellipse(ellipse_domain):
    # the (1,3) maximizer circumscribes the confocal caustic with rotation
    # number exactly 1/3; its length must equal q*Q(caustic) + p*|caustic|
    from billiards.caustics import confocal_ellipse_probe
    from billiards.ellipse import ellipse_params, rotation_of_caustic

    par = ellipse_params(1.0, 0.5)
    lo, hi = 1e-9, par.mu0 - 1e-9
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if rotation_of_caustic(par, mid) > 1.0 / 3.0:
            lo = mid
        else:
            hi = mid
    mu = 0.5 * (lo + hi)
    probe = confocal_ellipse_probe(par, mu, table=ellipse_domain)
    ml = marked_length(ellipse_domain, 1, 3, tol=1e-13 * ellipse_domain.total_length)
    assert ml == pytest.approx(3 * probe.lazutkin_Q + 1 * probe.length, rel=1e-10)


# -------------------------------------------------------------- comparisons


def test_compare_report_structure(ellipse_domain):
    rationals = [(1, q) for q in (8, 10, 12, 14)]
    report = compare_spectrum_vs_series(ellipse_domain, rationals)
    rows, fit = report["rows"], report["fit"]
    assert [(r["p"], r["q"]) for r in rows] == rationals
    for r in rows:
        assert r["beta_numeric"] < 0 and r["beta_series"] < 0
        assert r["orbit_residual"] >= 0
        assert r["omega"] == pytest.approx(r["p"] / r["q"])
    assert fit["points_used"] >= 3
    # beta converges to the series at the w^10 rate or faster
    assert fit["exponent"] > 8.0
    assert report["max_abs_residual"] == pytest.approx(
        max(abs(r["residual"]) for r in rows)
    )


def test_compare_rejects_bad_rationals(circle_domain):
    with pytest.raises(OutOfRange):
        compare_spectrum_vs_series(circle_domain, [(2, 4)])


def test_compare_threads_match_serial(ellipse_domain):
    rationals = [(1, q) for q in (8, 11, 14)]
    serial = compare_spectrum_vs_series(ellipse_domain, rationals, workers=1)
    threaded = compare_spectrum_vs_series(ellipse_domain, rationals, workers=2)
    for a, b in zip(serial["rows"], threaded["rows"]):
        assert a == b
    assert serial["fit"] == threaded["fit"]
