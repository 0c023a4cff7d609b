"""Caustic probes and the Lazutkin invariant Q.

A probe is a convex curve placed inside the table that is (or is suspected
to be) a caustic.  Three independent routes to the tangent-line data are
provided and cross-checked in the test-suite:

* ``lazutkin_integral``   -- exact chord-length defect L(phi, delta) by
  adaptive quadrature of the probe's radius of curvature;
* the Taylor series ``lazutkin_series_L_of_delta`` / ``delta_series_of_L``
  in the half-width delta of the tangency window;
* ``geometric_lazutkin_Q`` -- string-construction value Q = t1 + t2 - arc
  from an actual tangent-line computation against the outer boundary.

For a genuine caustic both L (at fixed delta measured in the Lazutkin
parameter) and Q are constant along the curve, and Q ties into the alpha
series through Q = alpha(-|Gamma|).
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .dynamics import PhasePoint
from .ellipse import EllipseParams, caustic_length
from .errors import DomainError, OutOfRange, QuadratureFailure, TangencyNotFound
from .geometry import TWO_PI, Domain, DomainSpec, build_domain

_CBRT32 = (3.0 / 2.0) ** (1.0 / 3.0)
_CBRT32_SQ = _CBRT32 * _CBRT32


@dataclass(frozen=True)
class CausticProbe:
    """Convex probe curve positioned inside a billiard table.

    geometry:   the probe's own shape (tangent-angle parametrization),
    offset:     rigid translation from the probe frame into the table frame,
    length:     perimeter |Gamma| of the probe,
    lazutkin_Q: the invariant Q of the (table, probe) pair when known.
    """

    geometry: Domain
    offset: tuple
    length: float
    lazutkin_Q: float

    def caustic_rho(self, phi, order: int = 0):
        """Jets of the probe's radius of curvature r(phi), up to order 6."""
        if order > 6:
            raise OutOfRange(f"probe jets are supported up to order 6, got {order}")
        return self.geometry.rho_jets(phi, order=order)

    def point_at(self, phi):
        """Probe point in table-frame coordinates."""
        return np.asarray(self.geometry.point_at(phi)) + np.asarray(self.offset)

    def arclength_of_phi(self, phi):
        return self.geometry.arclength_of_phi(phi)


def concentric_circle_probe(table_radius: float, caustic_radius: float) -> CausticProbe:
    """Circle of radius rho0 concentric with a circular table of radius R.

    Every chord tangent to the probe makes the angle zeta with the table,
    cos(zeta) = rho0/R, and Q has the closed form 2R sin(zeta) - 2R zeta cos(zeta).
    """
    R, rho0 = float(table_radius), float(caustic_radius)
    if not 0.0 < rho0 < R:
        raise DomainError(f"need 0 < caustic_radius < table_radius, got {rho0} vs {R}")
    zeta = math.acos(rho0 / R)
    Q = 2.0 * R * math.sin(zeta) - 2.0 * R * zeta * math.cos(zeta)
    geometry = build_domain(DomainSpec.circle(rho0), resolution=64)
    return CausticProbe(
        geometry=geometry,
        offset=(0.0, R - rho0),
        length=TWO_PI * rho0,
        lazutkin_Q=Q,
    )


def confocal_ellipse_probe(
    params: EllipseParams,
    mu: float,
    table: Domain | None = None,
    resolution: int = 512,
) -> CausticProbe:
    """Confocal ellipse x^2/cosh(mu)^2 + y^2/sinh(mu)^2 = (a h)^2, 0 < mu < mu0.

    The probe's Q is evaluated once by the geometric string construction at
    a reference boundary point (it is constant along a true caustic).
    """
    mu = float(mu)
    length = caustic_length(params, mu)  # validates 0 < mu < mu0
    c = params.a * params.h
    A_c = c * math.cosh(mu)
    B_c = c * math.sinh(mu)
    h_c = 1.0 / math.cosh(mu)
    geometry = build_domain(DomainSpec.ellipse(a=A_c, h=h_c), resolution=resolution)
    b_out = params.a * math.sqrt(1.0 - params.h**2)
    probe = CausticProbe(
        geometry=geometry,
        offset=(0.0, b_out - B_c),
        length=length,
        lazutkin_Q=math.nan,
    )
    if table is None:
        table = build_domain(DomainSpec.ellipse(a=params.a, h=params.h), resolution=resolution)
    Q = geometric_lazutkin_Q(table, probe, 0.0)
    return dataclasses.replace(probe, lazutkin_Q=Q)


def lazutkin_integral(probe: CausticProbe, phi: float, delta: float) -> float:
    """Chord-length defect of the tangent line over the window [phi-delta, phi+delta].

    L = sec(delta) * int_{-d}^{d} cos(u) r(phi+u) du  -  int_{-d}^{d} r(phi+u) du,
    where r is the probe's radius of curvature.  Requires 0 < delta < pi/2.
    """
    delta = float(delta)
    if not 0.0 < delta < math.pi / 2.0:
        raise OutOfRange(f"delta must lie in (0, pi/2), got {delta}")

    def r(u: float) -> float:
        return float(probe.caustic_rho(phi + u, order=0)[0])

    weighted, err1 = quad(lambda u: math.cos(u) * r(u), -delta, delta, epsabs=1e-14, epsrel=1e-12, limit=200)
    plain, err2 = quad(r, -delta, delta, epsabs=1e-14, epsrel=1e-12, limit=200)
    value = weighted / math.cos(delta) - plain
    if max(err1, err2) > 1e-9 * max(1.0, abs(weighted), abs(plain)):
        raise QuadratureFailure(
            f"quadrature error {max(err1, err2):.3e} too large at phi={phi}, delta={delta}"
        )
    return value


def lazutkin_series_L_of_delta(r_jets, delta: float) -> float:
    """Taylor value of the chord defect L(delta) from probe jets at the midpoint.

    Needs the even jets (r, r'', r'''', r^(6)); accurate to O(delta^11).
    """
    jets = [float(j) for j in r_jets]
    if len(jets) < 7:
        raise OutOfRange(f"need jets up to order 6 (7 values), got {len(jets)}")
    r0, r2, r4, r6 = jets[0], jets[2], jets[4], jets[6]
    d2 = delta * delta
    c3 = 2.0 * r0 / 3.0
    c5 = (r2 + 4.0 * r0) / 15.0
    c7 = (3.0 * r4 + 32.0 * r2 + 136.0 * r0) / 1260.0
    c9 = (r6 + 20.0 * r4 + 232.0 * r2 + 992.0 * r0) / 22680.0
    return delta * d2 * (c3 + d2 * (c5 + d2 * (c7 + d2 * c9)))


def delta_series_of_L(r_jets, L: float) -> float:
    """Inverse series delta(L) in powers of L^(1/3) from probe jets at the midpoint."""
    jets = [float(j) for j in r_jets]
    if len(jets) < 7:
        raise OutOfRange(f"need jets up to order 6 (7 values), got {len(jets)}")
    if L < 0.0:
        raise OutOfRange(f"chord defect must be nonnegative, got {L}")
    r0, r2, r4, r6 = jets[0], jets[2], jets[4], jets[6]
    e0 = _CBRT32 * r0 ** (-1.0 / 3.0)
    e1 = (-r2 - 4.0 * r0) / (20.0 * r0**2)
    e2 = _CBRT32_SQ * (
        -15.0 * r4 * r0 + 288.0 * r0 * r2 + 56.0 * r2**2 + 216.0 * r0**2
    ) / (8400.0 * r0 ** (11.0 / 3.0))
    e3 = _CBRT32 * (
        -5.0 * r6 * r0**2
        + 260.0 * r4 * r0**2
        - 1976.0 * r0**2 * r2
        - 1224.0 * r0 * r2**2
        - 182.0 * r2**3
        + 90.0 * r4 * r0 * r2
        - 288.0 * r0**3
    ) / (100800.0 * r0 ** (16.0 / 3.0))
    t = L ** (1.0 / 3.0)
    t2 = t * t
    return t * (e0 + t2 * (e1 + t2 * (e2 + t2 * e3)))


def _tangency_data(domain: Domain, probe: CausticProbe, phi_boundary: float, n_scan: int = 1440):
    """Both tangent lines from the boundary point with tangent angle phi_boundary.

    Returns (theta_in, theta_out, t_in, t_out): probe parameters of the
    incoming/outgoing tangency and the corresponding tangent-segment lengths.
    """
    P = np.asarray(domain.point_at(phi_boundary), dtype=float)
    thetas = np.linspace(0.0, TWO_PI, n_scan, endpoint=False)
    C = np.asarray(probe.point_at(thetas), dtype=float)
    vx = P[0] - C[..., 0]
    vy = P[1] - C[..., 1]
    g = np.cos(thetas) * vy - np.sin(thetas) * vx

    def g_scalar(theta: float) -> float:
        c = probe.point_at(theta)
        return math.cos(theta) * (P[1] - c[1]) - math.sin(theta) * (P[0] - c[0])

    roots = []
    for i in range(n_scan):
        j = (i + 1) % n_scan
        lo, hi = thetas[i], thetas[i] + TWO_PI / n_scan
        gi, gj = g[i], g[j]
        if gi == 0.0:
            roots.append(lo)
        elif gi * gj < 0.0:
            roots.append(brentq(g_scalar, lo, hi, xtol=1e-14, rtol=8.9e-16))
    # collapse duplicates (a root sitting on a grid node is seen twice)
    unique = []
    for r in sorted(roots):
        if not unique or min(abs(r - unique[-1]), TWO_PI - abs(r - unique[-1])) > 1e-9:
            unique.append(r)
    if len(unique) >= 2 and TWO_PI - (unique[-1] - unique[0]) <= 1e-9:
        unique.pop()
    if len(unique) != 2:
        raise TangencyNotFound(
            f"expected 2 tangent lines from the boundary point, found {len(unique)}"
        )
    incoming = outgoing = None
    for theta in unique:
        c = probe.point_at(theta)
        dot = math.cos(theta) * (P[0] - c[0]) + math.sin(theta) * (P[1] - c[1])
        if dot > 0.0:
            incoming = (theta, dot)
        else:
            outgoing = (theta, -dot)
    if incoming is None or outgoing is None:
        raise TangencyNotFound("could not tell incoming from outgoing tangency")
    return incoming[0], outgoing[0], incoming[1], outgoing[1]


def geometric_lazutkin_Q(domain: Domain, probe: CausticProbe, phi_boundary: float) -> float:
    """String-construction invariant Q = t1 + t2 - arc at a boundary point.

    t1, t2 are the tangent-segment lengths from the point to the probe and
    arc is the probe arc between the tangencies on the side facing the point.
    """
    theta_a, theta_b, t_in, t_out = _tangency_data(domain, probe, phi_boundary)
    if theta_b < theta_a:
        theta_b += TWO_PI
    arc = float(probe.arclength_of_phi(theta_b) - probe.arclength_of_phi(theta_a))
    return float(t_in + t_out - arc)


def launch_tangent(domain: Domain, probe: CausticProbe, phi_boundary: float) -> PhasePoint:
    """Phase point at the boundary whose outgoing chord is tangent to the probe."""
    _, theta_b, _, _ = _tangency_data(domain, probe, phi_boundary)
    angle = (theta_b - phi_boundary) % TWO_PI
    if not 0.0 < angle < math.pi:
        raise TangencyNotFound(
            f"outgoing tangent direction gives reflection angle {angle:.6f} outside (0, pi)"
        )
    s = float(domain.arclength_of_phi(phi_boundary)) % domain.total_length
    return PhasePoint(s=s, phi=angle)
