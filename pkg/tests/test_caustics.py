"""Caustic probes: string-construction invariant, chord-defect series, launch."""

import math

import numpy as np
import pytest

from billiards.caustics import (
    concentric_circle_probe,
    confocal_ellipse_probe,
    delta_series_of_L,
    geometric_lazutkin_Q,
    launch_tangent,
    lazutkin_integral,
    lazutkin_series_L_of_delta,
)
from billiards.dynamics import step
from billiards.ellipse import ellipse_params
from billiards.errors import DomainError, OutOfRange, TangencyNotFound

PI = math.pi


# ----------------------------------------------------------- circular probes


@pytest.mark.parametrize("zeta", [0.2, 0.7, 1.2])
@pytest.mark.parametrize("R", [1.0, 2.0])
def test_concentric_probe_closed_form(R, zeta):
    probe = concentric_circle_probe(R, R * math.cos(zeta))
    assert probe.length == pytest.approx(2 * PI * R * math.cos(zeta), rel=1e-14)
    want = 2 * R * math.sin(zeta) - 2 * R * zeta * math.cos(zeta)
    assert probe.lazutkin_Q == pytest.approx(want, rel=1e-14)


def test_geometric_Q_matches_closed_form(circle_domain):
    probe = concentric_circle_probe(1.0, 0.8)
    values = [
        geometric_lazutkin_Q(circle_domain, probe, phi_b)
        for phi_b in (0.0, 1.2, 2.5, 4.0, 5.9)
    ]
    for v in values:
        assert v == pytest.approx(probe.lazutkin_Q, abs=1e-12)
    assert max(values) - min(values) < 1e-12


def test_invalid_probe_radii_rejected():
    with pytest.raises(DomainError):
        concentric_circle_probe(1.0, 1.5)
    with pytest.raises(DomainError):
        concentric_circle_probe(1.0, 0.0)
    with pytest.raises(DomainError):
        concentric_circle_probe(1.0, -0.2)


# ------------------------------------------------------- chord-defect window


def test_lazutkin_integral_circle_closed_form():
    rho0 = 0.9
    probe = concentric_circle_probe(1.0, rho0)
    for delta in (0.15, 0.4, 0.9):
        got = lazutkin_integral(probe, 0.6, delta)
        want = 2 * rho0 * (math.tan(delta) - delta)
        assert got == pytest.approx(want, abs=1e-13)


def test_series_matches_integral_to_high_order():
    par = ellipse_params(1.0, 0.5)
    probe = confocal_ellipse_probe(par, 0.5 * par.mu0)
    phi = 0.7
    jets = probe.caustic_rho(phi, order=6)
    deltas = (0.2, 0.1, 0.05)
    resid = [
        abs(lazutkin_integral(probe, phi, d) - lazutkin_series_L_of_delta(jets, d))
        for d in deltas
    ]
    slope = np.polyfit(np.log(deltas), np.log(resid), 1)[0]
    assert 10.5 < slope < 11.5
    assert resid[-1] < 1e-13


def test_delta_of_L_roundtrip():
    par = ellipse_params(1.0, 0.5)
    probe = confocal_ellipse_probe(par, 0.5 * par.mu0)
    jets = probe.caustic_rho(1.9, order=6)
    errs = []
    for delta in (0.2, 0.1):
        L = lazutkin_series_L_of_delta(jets, delta)
        errs.append(abs(delta_series_of_L(jets, L) - delta))
    # the inverse series carries terms through L^{7/3} ~ delta^7, so the
    # roundtrip error decays like delta^9
    assert 2**8 < errs[0] / errs[1] < 2**10
    assert errs[1] < 1e-9


def test_window_and_jet_guards(circle_domain):
    probe = concentric_circle_probe(1.0, 0.7)
    with pytest.raises(OutOfRange):
        lazutkin_integral(probe, 0.0, PI / 2)
    with pytest.raises(OutOfRange):
        lazutkin_integral(probe, 0.0, 0.0)
    with pytest.raises(OutOfRange):
        probe.caustic_rho(0.0, order=7)
    jets = probe.caustic_rho(0.0, order=6)
    with pytest.raises(OutOfRange):
        delta_series_of_L(jets, -1e-3)
    with pytest.raises(OutOfRange):
        delta_series_of_L(jets[:4], 1e-3)
    with pytest.raises(OutOfRange):
        lazutkin_series_L_of_delta(jets[:4], 0.1)


# ----------------------------------------------------------- confocal probes


def test_confocal_probe_length_two_routes():
    par = ellipse_params(1.3, 0.6)
    probe = confocal_ellipse_probe(par, 0.4 * par.mu0)
    # closed form against the arclength quadrature of the built geometry
    assert probe.length == pytest.approx(probe.geometry.total_length, rel=1e-12)


def test_confocal_Q_is_constant_along_boundary(ellipse_domain):
    par = ellipse_params(1.0, 0.5)
    probe = confocal_ellipse_probe(par, 0.6 * par.mu0, table=ellipse_domain)
    values = [
        geometric_lazutkin_Q(ellipse_domain, probe, phi_b)
        for phi_b in (0.3, 1.1, 2.0, 3.7, 5.5)
    ]
    spread = max(values) - min(values)
    assert spread < 1e-10 * max(abs(v) for v in values)
    assert values[0] == pytest.approx(probe.lazutkin_Q, rel=1e-10)


# ------------------------------------------------------------------- launch


def test_launch_tangent_on_circle(circle_domain):
    rho0 = 0.75
    probe = concentric_circle_probe(1.0, rho0)
    for phi_b in (0.0, 1.3, 3.9):
        p = launch_tangent(circle_domain, probe, phi_b)
        assert p.phi == pytest.approx(math.acos(rho0), abs=1e-10)
        assert p.s == pytest.approx(phi_b % (2 * PI), abs=1e-10)


def test_launched_orbit_stays_tangent(circle_domain):
    # every chord of the launched orbit keeps distance rho0 from the center
    rho0 = 0.6
    probe = concentric_circle_probe(1.0, rho0)
    center = np.array([0.0, 1.0])
    p = launch_tangent(circle_domain, probe, 0.9)
    for _ in range(5):
        nxt = step(circle_domain, p)
        a = circle_domain.point_at(p.s)
        b = circle_domain.point_at(nxt.s)
        d = b - a
        w = center - a
        dist = abs(d[0] * w[1] - d[1] * w[0]) / math.hypot(d[0], d[1])
        assert dist == pytest.approx(rho0, abs=1e-10)
        p = nxt


def test_tangency_requires_boundary_point_outside_probe(circle_domain):
    # an oversized probe swallows the top of the unit table; from a boundary
    # point inside the probe there are no tangent lines at all
    probe = concentric_circle_probe(2.0, 1.5)
    with pytest.raises(TangencyNotFound):
        geometric_lazutkin_Q(circle_domain, probe, PI)
