"""Closed-form reference values for elliptical tables.

The ellipse x^2/a^2 + y^2/b^2 = 1 with eccentricity h (b = a*sqrt(1 - h^2))
is completely integrable: its caustics are the confocal ellipses indexed by
mu in (0, mu0), cosh(mu0) = 1/h.  Everything here reduces to complete and
incomplete elliptic integrals, giving an exact oracle for the invariant,
beta-series, caustic-length and rotation-number machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .elliptic import complete_E, complete_K, incomplete_F
from .errors import DomainError, OutOfRange
from .invariants import BetaExpansion

__all__ = [
    "EllipseParams",
    "ellipse_params",
    "complete_K",
    "complete_E",
    "incomplete_F",
    "ellipse_invariants",
    "ellipse_beta_series",
    "caustic_length",
    "rotation_of_caustic",
    "uniqueness_functional",
    "recover_ellipse",
]


@dataclass(frozen=True)
class EllipseParams:
    """Semi-major axis a, eccentricity h, and mu0 = arccosh(1/h)."""

    a: float
    h: float
    mu0: float = None  # type: ignore[assignment]

    def __post_init__(self):
        if not (math.isfinite(self.a) and self.a > 0.0):
            raise DomainError(f"semi-major axis must be positive, got {self.a!r}")
        if not 0.0 <= self.h < 1.0:
            raise DomainError(f"eccentricity must lie in [0, 1), got {self.h!r}")
        if self.mu0 is None:
            mu0 = math.acosh(1.0 / self.h) if self.h > 0.0 else math.inf
            object.__setattr__(self, "mu0", mu0)

    @property
    def b(self) -> float:
        return self.a * math.sqrt(1.0 - self.h * self.h)


def ellipse_params(a: float = 1.0, h: float = 0.0) -> EllipseParams:
    return EllipseParams(a=float(a), h=float(h))


def ellipse_invariants(params: EllipseParams) -> tuple:
    """(I1, I3, I5) in closed form; I1 is the perimeter."""
    a, h = params.a, params.h
    E = complete_E(h)
    K = complete_K(h)
    one = 1.0 - h * h
    I1 = 4.0 * a * E
    I3 = 4.0 * a ** (1.0 / 3.0) * one ** (1.0 / 3.0) * K
    I5 = 36.0 * a ** (-1.0 / 3.0) * one ** (-1.0 / 3.0) * (-15.0 * E + 8.0 * (2.0 - h * h) * K)
    return I1, I3, I5


def ellipse_beta_series(params: EllipseParams) -> BetaExpansion:
    """Odd Taylor coefficients beta_k of Mather's beta-function, exactly.

    In the circular limit h -> 0 these reduce to
    (-2*pi, 2*pi^3, -2*pi^5, 2*pi^7, -2*pi^9) times the radius.
    """
    a, h = params.a, params.h
    E = complete_E(h)
    K = complete_K(h)
    h2 = h * h
    one = 1.0 - h2
    c1 = -4.0 * E
    c3 = (8.0 / 3.0) * one * K**3
    c5 = (8.0 / 15.0) * one * K**4 * (15.0 * E - 8.0 * (2.0 - h2) * K)
    c7 = (16.0 / 315.0) * one * K**5 * (
        630.0 * E * E
        - 630.0 * (2.0 - h2) * K * E
        + (136.0 * h2 * h2 - 631.0 * h2 + 631.0) * K * K
    )
    c9 = (8.0 * one * K**6 / 2835.0) * (
        75600.0 * (h2 - 2.0) * K * E * E
        + 4.0 * (h2 - 2.0) * (992.0 * h2 * h2 - 5741.0 * h2 + 5741.0) * K**3
        + 1323.0 * (24.0 * h2 * h2 - 109.0 * h2 + 109.0) * K * K * E
        + 52920.0 * E**3
    )
    return BetaExpansion(
        beta1=math.factorial(1) * c1 * a,
        beta3=math.factorial(3) * c3 * a,
        beta5=math.factorial(5) * c5 * a,
        beta7=math.factorial(7) * c7 * a,
        beta9=math.factorial(9) * c9 * a,
    )


def _check_mu(params: EllipseParams, mu: float) -> float:
    mu = float(mu)
    if params.h == 0.0:
        raise DomainError("a circle has no confocal caustic family (h = 0)")
    if not 0.0 < mu < params.mu0:
        raise DomainError(f"mu must lie in (0, {params.mu0!r}), got {mu!r}")
    return mu


def caustic_length(params: EllipseParams, mu: float) -> float:
    """Perimeter of the confocal caustic at parameter mu, 0 < mu < mu0."""
    mu = _check_mu(params, mu)
    I = math.cosh(mu) ** 2
    return 4.0 * params.a * params.h * math.sqrt(I) * complete_E(1.0 / math.sqrt(I))


def rotation_of_caustic(params: EllipseParams, mu: float) -> float:
    """Rotation number of the invariant circle tangent to the caustic at mu.

    omega = F(z, 1/sqrt(I)) / (4 K(1/sqrt(I))) with I = cosh(mu)^2 and
    sin(z) = 2 T sqrt(t I) / (t + I T^2), t = cosh(mu0)^2 - I, T = tanh(mu0);
    z crosses pi/2 at I = cosh(mu0)^2 / (1 + T^2), where the arcsin branch flips.
    Limits: omega -> 1/2 as mu -> 0 (focal segment), omega -> 0 as mu -> mu0.
    """
    mu = _check_mu(params, mu)
    I = math.cosh(mu) ** 2
    T = math.tanh(params.mu0)
    t = math.cosh(params.mu0) ** 2 - I
    arg = 2.0 * T * math.sqrt(t * I) / (t + I * T * T)
    z = math.asin(min(arg, 1.0))
    I_star = math.cosh(params.mu0) ** 2 / (1.0 + T * T)
    if I < I_star:
        z = math.pi - z
    kmod = 1.0 / math.sqrt(I)
    return incomplete_F(z, kmod) / (4.0 * complete_K(kmod))


def uniqueness_functional(x: float) -> float:
    """f(x) = (1 - x^2) K(x)^3 / E(x), strictly decreasing from pi^2/4 to 0 on [0, 1).

    Its injectivity is what lets (beta1, beta3) pin down an ellipse uniquely.
    """
    x = float(x)
    if not 0.0 <= x < 1.0:
        raise DomainError(f"argument must lie in [0, 1), got {x!r}")
    return (1.0 - x * x) * complete_K(x) ** 3 / complete_E(x)


def recover_ellipse(beta1: float, beta3: float) -> tuple:
    """Invert (beta1, beta3) -> (a, h) using the uniqueness functional.

    For an ellipse beta1 = -4*E(h)*a and beta3 = 16*(1-h^2)*K(h)^3*a, so
    beta3 / (-4*beta1) = f(h); bisection recovers h, then a follows.
    """
    beta1, beta3 = float(beta1), float(beta3)
    if not (beta1 < 0.0 < beta3):
        raise OutOfRange(f"need beta1 < 0 < beta3, got ({beta1!r}, {beta3!r})")
    target = beta3 / (-4.0 * beta1)
    ceiling = math.pi * math.pi / 4.0
    if target > ceiling * (1.0 + 1e-12):
        raise OutOfRange(
            f"beta3/(-4*beta1) = {target!r} exceeds pi^2/4; no ellipse matches"
        )
    if target >= ceiling:
        h = 0.0
    else:
        lo, hi = 0.0, 1.0 - 1e-13
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if uniqueness_functional(mid) >= target:
                lo = mid
            else:
                hi = mid
            if hi - lo < 1e-16:
                break
        h = 0.5 * (lo + hi)
    a = beta1 / (-4.0 * complete_E(h))
    return a, h
