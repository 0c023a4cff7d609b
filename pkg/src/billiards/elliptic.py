"""Legendre elliptic integrals in the modulus convention.

``complete_K``/``complete_E`` use the arithmetic-geometric mean and
``incomplete_F`` a descending Landen transformation; all three are scalar
and self-contained.  ``incomplete_E`` / ``incomplete_F_fast`` wrap the scipy
ufuncs (which take the *parameter* m = k**2 — the convention switch is
quarantined here) and are the vectorized route used by the geometry
internals; tests cross-check both routes against direct quadrature.
"""

from __future__ import annotations

import math

from scipy.special import ellipeinc as _ellipeinc
from scipy.special import ellipkinc as _ellipkinc

from .errors import DomainError

_AGM_TOL = 1e-14


def _check_modulus(k: float) -> None:
    if not 0.0 <= k < 1.0:
        raise DomainError(f"modulus must satisfy 0 <= k < 1, got {k!r}")


def complete_K(k: float) -> float:
    """Complete elliptic integral of the first kind,
    K(k) = int_0^{pi/2} (1 - k^2 sin^2 t)^{-1/2} dt."""
    _check_modulus(k)
    a, b = 1.0, math.sqrt(1.0 - k * k)
    while abs(a - b) > _AGM_TOL * a:
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (a + b)


def complete_E(k: float) -> float:
    """Complete elliptic integral of the second kind,
    E(k) = int_0^{pi/2} (1 - k^2 sin^2 t)^{1/2} dt."""
    _check_modulus(k)
    a, b = 1.0, math.sqrt(1.0 - k * k)
    c = k
    csum = 0.5 * c * c
    weight = 1.0
    while abs(c) > _AGM_TOL:
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        csum += weight * c * c
        weight *= 2.0
    return math.pi / (a + b) * (1.0 - csum)


def incomplete_F(z: float, k: float) -> float:
    """Incomplete elliptic integral of the first kind,
    F(z, k) = int_0^z (1 - k^2 sin^2 t)^{-1/2} dt, by descending Landen.

    The primary range is z in [0, pi/2]; other real z are reduced with the
    quasi-periodicity F(z + n*pi, k) = F(z, k) + 2n*K(k) and oddness.
    """
    _check_modulus(k)
    if z == 0.0:
        return 0.0
    if z < 0.0:
        return -incomplete_F(-z, k)
    if z > 0.5 * math.pi:
        n = math.floor(z / math.pi + 0.5)
        z0 = z - n * math.pi
        base = 2.0 * n * complete_K(k)
        if z0 == 0.0:
            return base
        return base + math.copysign(incomplete_F(abs(z0), k), z0)
    if k == 0.0:
        return z
    # DLMF 19.8.5-19.8.7: track phi through the AGM, F = phi_N / (2^N agm).
    a, b = 1.0, math.sqrt(1.0 - k * k)
    phi = z
    steps = 0
    while abs(a - b) > _AGM_TOL * a:
        raw = math.atan2(b * math.sin(phi), a * math.cos(phi))
        branch = round((phi - raw) / math.pi)
        phi += raw + branch * math.pi
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        steps += 1
    return phi / (2.0 ** steps) / (0.5 * (a + b))


def incomplete_E(z, k: float):
    """Incomplete elliptic integral of the second kind,
    E(z, k) = int_0^z (1 - k^2 sin^2 t)^{1/2} dt.

    Vectorized in z; quasi-periodic extension to all real z is inherited
    from the underlying implementation.
    """
    if not 0.0 <= k < 1.0:
        raise DomainError(f"modulus must satisfy 0 <= k < 1, got {k!r}")
    return _ellipeinc(z, k * k)


def incomplete_F_fast(z, k: float):
    """Vectorized incomplete F; same function as :func:`incomplete_F`
    computed through scipy.  Kept as a separate route so the two
    implementations can be checked against each other."""
    if not 0.0 <= k < 1.0:
        raise DomainError(f"modulus must satisfy 0 <= k < 1, got {k!r}")
    return _ellipkinc(z, k * k)
