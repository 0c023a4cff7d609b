"""The billiard map: chords, reflection steps, orbits, Lazutkin coordinates.

Phase space is the annulus (s, phi) with s the arc-length position on the
boundary and phi in (0, pi) the angle between the outgoing chord and the
positive tangent.  The generating function is the chord length l(s, s'),
whose partials encode the reflection angles:

    dl/ds = -cos(phi),   dl/ds' = cos(phi').

The successor solver works in the tangent-angle parameter: the ray leaving
gamma(tau0) in direction psi = tau0 + phi crosses the boundary at the unique
theta* in (psi, psi + pi) where the signed cross product of the ray direction
with the point offset changes sign (the cross product is strictly increasing
there for a convex curve, so the bracket is guaranteed).  Tangent angles lift
monotonically along an orbit, which gives the lifted arc positions for free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import CoincidentPoints, OutOfRange, RootNotBracketed
from .geometry import TWO_PI, Domain


@dataclass(frozen=True)
class PhasePoint:
    """Boundary point s with outgoing direction angle phi in (0, pi)."""

    s: float
    phi: float

    def __post_init__(self):
        if not (0.0 < self.phi < math.pi):
            raise OutOfRange(f"reflection angle must lie in (0, pi), got {self.phi!r}")
        if not math.isfinite(self.s):
            raise OutOfRange(f"arc position must be finite, got {self.s!r}")


@dataclass(frozen=True)
class Trajectory:
    """Orbit segment: phase points plus lifted (universal cover) arc positions."""

    points: tuple
    lifted_s: np.ndarray
    ell0: float

    def __len__(self) -> int:
        return len(self.points)


def _positions(domain: Domain, s):
    tau = domain._phi_of_s_lifted(np.asarray(s, dtype=float) % domain.total_length)
    return tau, domain.point_at(tau)


def _check_distinct(domain: Domain, s0, s1) -> None:
    gap = np.asarray(s1, dtype=float) - np.asarray(s0, dtype=float)
    gap = np.abs(gap) % domain.total_length
    gap = np.minimum(gap, domain.total_length - gap)
    if np.any(gap < 1e-12 * max(1.0, domain.total_length)):
        raise CoincidentPoints("chord endpoints coincide modulo the perimeter")


def chord_length(domain: Domain, s0, s1):
    """Euclidean distance between the boundary points at arc positions s0, s1."""
    _check_distinct(domain, s0, s1)
    _, p0 = _positions(domain, s0)
    _, p1 = _positions(domain, s1)
    diff = p1 - p0
    out = np.hypot(diff[..., 0], diff[..., 1])
    return float(out) if out.ndim == 0 else out


def chord_length_partials(domain: Domain, s0, s1):
    """(dl/ds0, dl/ds1) = (-cos phi0, +cos phi1), computed from exact tangents."""
    _check_distinct(domain, s0, s1)
    tau0, p0 = _positions(domain, s0)
    tau1, p1 = _positions(domain, s1)
    diff = p1 - p0
    ell = np.hypot(diff[..., 0], diff[..., 1])
    ux, uy = diff[..., 0] / ell, diff[..., 1] / ell
    d0 = -(ux * np.cos(tau0) + uy * np.sin(tau0))
    d1 = ux * np.cos(tau1) + uy * np.sin(tau1)
    if np.ndim(d0) == 0:
        return float(d0), float(d1)
    return d0, d1


def _chord_derivatives(domain: Domain, s0, s1):
    """Length, first and second partials of the chord in one pass (vectorized).

    Returns (ell, d0, d1, h00, h01, h11) where h** are the second partials;
    used by the spectrum optimizer which needs the full cyclic tridiagonal
    Hessian.
    """
    tau0, p0 = _positions(domain, s0)
    tau1, p1 = _positions(domain, s1)
    diff = p1 - p0
    ell = np.hypot(diff[..., 0], diff[..., 1])
    ux, uy = diff[..., 0] / ell, diff[..., 1] / ell
    c0, s0t = np.cos(tau0), np.sin(tau0)
    c1, s1t = np.cos(tau1), np.sin(tau1)
    cos0 = ux * c0 + uy * s0t
    cos1 = ux * c1 + uy * s1t
    sin0 = c0 * uy - s0t * ux
    sin1 = ux * s1t - uy * c1
    k0 = 1.0 / domain.rho(tau0)
    k1 = 1.0 / domain.rho(tau1)
    h00 = sin0**2 / ell - k0 * sin0
    h11 = sin1**2 / ell - k1 * sin1
    h01 = sin0 * sin1 / ell
    return ell, -cos0, cos1, h00, h01, h11


def _advance_tangent_angle(domain: Domain, tau0: float, phi: float) -> float:
    """Tangent-angle parameter of the next reflection point.

    Solves g(theta) = cross(ray direction, gamma(theta) - gamma(tau0)) = 0
    on (psi, psi + pi), psi = tau0 + phi, where g is strictly increasing and
    changes sign; the departure point itself (the trivial root at tau0) lies
    outside the bracket by construction.
    """
    psi = tau0 + phi
    p0 = domain.point_at(tau0)
    dx, dy = math.cos(psi), math.sin(psi)

    def g(theta):
        b = domain.point_at(theta)
        return dx * (float(b[1]) - float(p0[1])) - dy * (float(b[0]) - float(p0[0]))

    pad = 1e-9
    lo, hi = psi + pad, psi + math.pi - pad
    g_lo, g_hi = g(lo), g(hi)
    if g_lo >= 0.0:
        theta = lo  # grazing shot: root hugs the lower end; Newton refines
    elif g_hi <= 0.0:
        theta = hi
    else:
        try:
            theta = brentq(g, lo, hi, xtol=1e-12, maxiter=200)
        except ValueError as exc:  # pragma: no cover - bracket is analytic
            raise RootNotBracketed(f"ray-boundary bracket failed: {exc}") from exc
    for _ in range(3):
        slope = float(domain.rho(theta)) * math.sin(theta - psi)
        if slope <= 0.0:
            break
        delta = g(theta) / slope
        theta = min(max(theta - delta, psi + 0.25 * pad), psi + math.pi - 0.25 * pad)
        if abs(delta) <= 1e-15 * max(1.0, abs(theta)):
            break
    return theta


def step(domain: Domain, p: PhasePoint) -> PhasePoint:
    """One reflection of the billiard map."""
    s_now = p.s % domain.total_length
    tau0 = domain._phi_of_s_lifted(s_now)
    theta = _advance_tangent_angle(domain, tau0, p.phi)
    phi1 = theta - (tau0 + p.phi)
    s1 = float(domain.arclength_of_phi(theta)) % domain.total_length
    return PhasePoint(s=s1, phi=phi1)


def iterate(domain: Domain, p0: PhasePoint, n: int) -> Trajectory:
    """Iterate the billiard map n times, tracking the lifted arc position."""
    if n < 1:
        raise OutOfRange(f"need at least one step, got n = {n}")
    ell0 = domain.total_length
    s_now = p0.s % ell0
    tau = float(domain._phi_of_s_lifted(s_now))
    phi = p0.phi
    points = [PhasePoint(s=s_now, phi=phi)]
    lifted = [float(domain.arclength_of_phi(tau))]
    for _ in range(n):
        theta = _advance_tangent_angle(domain, tau, phi)
        phi = theta - (tau + phi)
        tau = theta
        s_lift = float(domain.arclength_of_phi(tau))
        lifted.append(s_lift)
        points.append(PhasePoint(s=s_lift % ell0, phi=phi))
    return Trajectory(points=tuple(points), lifted_s=np.array(lifted), ell0=ell0)


def rotation_number_estimate(traj: Trajectory) -> float:
    """Mean fraction of perimeter advanced per reflection.

    For n >= 4 the plain secant (x_n - x_0)/(n l0) is refined by differencing
    two trailing windows of M = floor(n/2) consecutive positions, which
    cancels the O(1/n) boundary term of the Birkhoff average and leaves an
    O(1/n^2) error for orbits on invariant curves.
    """
    x = traj.lifted_s
    n = x.size - 1
    if n < 1:
        raise OutOfRange("trajectory has no steps")
    if n < 4:
        return float(x[-1] - x[0]) / (n * traj.ell0)
    m = n // 2
    tail = x[x.size - 2 * m :]
    return float(math.fsum(tail[m:]) - math.fsum(tail[:m])) / (m * m * traj.ell0)


def lazutkin_coordinates(domain: Domain, p: PhasePoint):
    """Lazutkin chart (x, y): x in [0, 1) rescales the boundary so that the
    map becomes x' = x + y + O(y^3), y' = y + O(y^4) near y = 0.

    x = C^{-1} int_0^s k^{2/3} ds and y = 4 C^{-1} k^{-1/3} sin(phi/2), with
    C the full-period value of the integral (= I3).
    """
    total = domain.lazutkin_total()
    tau = domain._phi_of_s_lifted(p.s % domain.total_length)
    x = float(domain.lazutkin_x_raw(tau)) / total % 1.0
    y = 4.0 * float(np.cbrt(domain.rho(tau))) * math.sin(0.5 * p.phi) / total
    return x, y
