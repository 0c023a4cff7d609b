"""Curvature invariants I1..I9 and the derived beta/alpha/L series.

The five invariants are integrals of algebraic expressions in the radius of
curvature rho(phi) and its derivatives (equivalently, in the curvature k(s)
and its arc-length derivatives).  From them:

* beta series: beta(omega) = sum_k beta_k omega^k / k!, odd k through 9;
* alpha series: alpha(c) = (c+l0)^{3/2} (alpha0 + alpha1 (c+l0) + ...)
  with plain (non-factorial) coefficients, the convex conjugate of beta
  expanded at its singular base point c = -l0;
* Lazutkin invariant of an invariant curve: L(omega) = omega beta'(omega)
  - beta(omega) as a series in omega, and the inverse series omega(L).

Both integrand routes (rho-form over phi, curvature-form over arc length)
are implemented separately; they must agree and tests hold them to 1e-8.
Evaluation uses the periodic trapezoidal rule, which is spectrally accurate
for these smooth periodic integrands, with a doubling self-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonConvergent, OutOfRange
from .geometry import TWO_PI, Domain

_SQRT2 = math.sqrt(2.0)
_CBRT32 = (1.5) ** (1.0 / 3.0)
_CBRT32_SQ = (1.5) ** (2.0 / 3.0)


@dataclass(frozen=True)
class InvariantSet:
    """I1, I3, I5, I7, I9 (units length^1, ^{1/3}, ^{-1/3}, ^{-1}, ^{-5/3})."""

    I1: float
    I3: float
    I5: float
    I7: float
    I9: float
    quadrature_N: int

    def as_tuple(self) -> tuple:
        return (self.I1, self.I3, self.I5, self.I7, self.I9)


@dataclass(frozen=True)
class BetaExpansion:
    """Odd Taylor coefficients beta_k of beta at omega = 0 (even ones vanish)."""

    beta1: float
    beta3: float
    beta5: float
    beta7: float
    beta9: float


@dataclass(frozen=True)
class AlphaExpansion:
    """Expansion of alpha at its base point c = -ell0 (square-root singularity)."""

    ell0: float
    alpha0: float
    alpha1: float
    alpha2: float
    alpha3: float


@dataclass(frozen=True)
class CausticLengthCoeffs:
    """Coefficients of |Gamma| = ell0 - a L^{2/3} + b L^{4/3} + c L^2 + d L^{8/3}."""

    a: float
    b: float
    c: float
    d: float


def _integrands_rho(jets) -> np.ndarray:
    """The five integrands in (rho, rho', rho'', rho''') over dphi."""
    rho, d1, d2, d3 = jets
    cr = np.cbrt(rho)
    f1 = rho
    f3 = cr
    f5 = 9.0 / cr + 8.0 * d1**2 / cr**7
    f7 = 9.0 / rho + 24.0 * (d1**2 + d2**2) / rho**3 - 40.0 * d1**4 / rho**5
    f9 = (
        281.0 / (44800.0 * cr**5)
        + (281.0 * d1**2 / 8400.0 + 167.0 * d2**2 / 4200.0 + d3**2 / 42.0) / cr**11
        + (473.0 / 4725.0) * d2**3 / cr**14
        - (11.0 * d1**4 / 120.0 + 473.0 * d1**2 * d2**2 / 945.0) / cr**17
        + (781.0 / 1458.0) * d1**6 / cr**23
    )
    return np.stack([f1, f3, f5, f7, f9])


def _integrands_curvature(jets) -> np.ndarray:
    """The five integrands in (k, k', k'', k''') over ds, times ds/dphi = rho.

    Independent algebraic route used as a cross-check of the rho-form.
    """
    rho, d1, d2, d3 = jets
    k = 1.0 / rho
    kd = -d1 / rho**3
    kdd = -d2 / rho**4 + 3.0 * d1**2 / rho**5
    kddd = -d3 / rho**5 + 10.0 * d1 * d2 / rho**6 - 15.0 * d1**3 / rho**7
    ck = np.cbrt(k)
    g1 = np.ones_like(k)
    g3 = ck**2
    g5 = 9.0 * ck**4 + 8.0 * kd**2 / ck**8
    g7 = (
        9.0 * k**2
        + 24.0 * kd**2 / k**2
        + 24.0 * kdd**2 / k**4
        - 144.0 * kd**2 * kdd / k**5
        + 176.0 * kd**4 / k**6
    )
    g9 = (
        281.0 * ck**8 / 44800.0
        + 281.0 * kd**2 / (8400.0 * ck**4)
        + 167.0 * kdd**2 / (4200.0 * ck**10)
        - 167.0 * kd**2 * kdd / (700.0 * ck**13)
        + kddd**2 / (42.0 * ck**16)
        + 559.0 * kd**4 / (2100.0 * ck**16)
        - 473.0 * kdd**3 / (4725.0 * ck**19)
        - 10.0 * kddd * kd * kdd / (21.0 * ck**19)
        + 5.0 * kddd * kd**3 / (7.0 * ck**22)
        + 13142.0 * kd**2 * kdd**2 / (4725.0 * ck**22)
        - 10777.0 * kd**4 * kdd / (1575.0 * ck**25)
        + 521897.0 * kd**6 / (127575.0 * ck**28)
    )
    return np.stack([g1, g3, g5, g7, g9]) * rho


def _trapezoid_values(domain: Domain, n: int, form: str) -> np.ndarray:
    phi = np.arange(n) * (TWO_PI / n)
    jets = domain.rho_jets(phi, order=3)
    if form == "rho":
        integrands = _integrands_rho(jets)
    elif form == "arclength":
        integrands = _integrands_curvature(jets)
    else:
        raise ValueError(f"unknown invariant form {form!r}")
    weight = TWO_PI / n
    # fsum keeps the summation error at one ulp; the q-series residual
    # diagnostics downstream sit close to that floor.
    return np.array([math.fsum(row) * weight for row in integrands])


def compute_invariants(
    domain: Domain,
    N: int = 2048,
    *,
    form: str = "rho",
    rel_tol: float = 1e-10,
    max_N: int = 1 << 16,
) -> InvariantSet:
    """Evaluate I1..I9 by the periodic trapezoidal rule with a doubling check.

    The returned values are those of the doubled grid; NonConvergent is
    raised if doubling still moves some value by more than rel_tol
    (relative to max(1, |I|)) at max_N points.
    """
    n = int(N)
    if n < 64 or n % 2 != 0:
        raise OutOfRange(f"quadrature N must be an even integer >= 64, got {N}")
    vals = _trapezoid_values(domain, n, form)
    while True:
        vals2 = _trapezoid_values(domain, 2 * n, form)
        scale = np.maximum(1.0, np.abs(vals2))
        if np.all(np.abs(vals2 - vals) <= rel_tol * scale):
            return InvariantSet(*map(float, vals2), quadrature_N=2 * n)
        if 2 * n >= max_N:
            worst = int(np.argmax(np.abs(vals2 - vals) / scale))
            raise NonConvergent(
                f"invariant I{2 * worst + 1} not stable under doubling at N={2 * n} "
                f"(rel change {float(np.abs(vals2 - vals)[worst] / scale[worst]):.3e})"
            )
        n *= 2
        vals = vals2


def beta_coefficients(inv: InvariantSet) -> BetaExpansion:
    """Odd beta_k from the invariants (factorial normalization, beta_k := k! [omega^k])."""
    i1, i3, i5, i7, i9 = inv.as_tuple()
    return BetaExpansion(
        beta1=-i1,
        beta3=i3**3 / 4.0,
        beta5=-(i3**4) * i5 / 144.0,
        beta7=i3**5 * (14.0 * i5**2 - 81.0 * i3 * i7) / 25920.0,
        beta9=-7.0 * i3**6 * (i3**2 * i9 - i3 * i5 * i7 / 5600.0 + 7.0 * i5**3 / 583200.0),
    )


def alpha_coefficients(inv: InvariantSet, ell0: float | None = None) -> AlphaExpansion:
    """Coefficients of the conjugate expansion at c = -ell0 (non-factorial)."""
    i1, i3, i5, i7, i9 = inv.as_tuple()
    if ell0 is None:
        ell0 = i1
    return AlphaExpansion(
        ell0=float(ell0),
        alpha0=(4.0 * _SQRT2 / 3.0) * i3**-1.5,
        alpha1=(_SQRT2 / 135.0) * i5 * i3**-3.5,
        alpha2=(72.0 * i3 * i7 + 7.0 * i5**2) / (56700.0 * _SQRT2 * i3**5.5),
        alpha3=(261273600.0 * i3**2 * i9 + 21384.0 * i3 * i5 * i7 + 1001.0 * i5**3)
        / (826686000.0 * _SQRT2 * i3**7.5),
    )


def caustic_length_coefficients(inv: InvariantSet) -> CausticLengthCoeffs:
    """(a, b, c, d) in |Gamma| = ell0 - a L^{2/3} + b L^{4/3} + c L^2 + d L^{8/3}."""
    return CausticLengthCoeffs(
        a=0.5 * _CBRT32_SQ * inv.I3,
        b=(_CBRT32 / 720.0) * inv.I5,
        c=inv.I7 / 11200.0,
        d=(_CBRT32_SQ / 90.0) * inv.I9,
    )


def beta_series_eval(b: BetaExpansion, omega):
    """beta(omega) = sum beta_k omega^k / k! through order 9.

    Validity is asymptotic for small omega (documented |omega| <~ 0.2;
    callers own the truncation error).
    """
    w = np.asarray(omega, dtype=float)
    w2 = w * w
    out = w * (
        b.beta1
        + w2
        * (
            b.beta3 / 6.0
            + w2 * (b.beta5 / 120.0 + w2 * (b.beta7 / 5040.0 + w2 * (b.beta9 / 362880.0)))
        )
    )
    return float(out) if np.isscalar(omega) else out


def beta_series_derivative(b: BetaExpansion, omega):
    """d beta/d omega of the truncated series (used for c = beta'(omega))."""
    w = np.asarray(omega, dtype=float)
    w2 = w * w
    out = (
        b.beta1
        + w2
        * (
            b.beta3 / 2.0
            + w2 * (b.beta5 / 24.0 + w2 * (b.beta7 / 720.0 + w2 * (b.beta9 / 40320.0)))
        )
    )
    return float(out) if np.isscalar(omega) else out


def alpha_series_eval(a: AlphaExpansion, c):
    """alpha(c) = u^{3/2} (alpha0 + alpha1 u + alpha2 u^2 + alpha3 u^3), u = c + ell0.

    Requires c >= -ell0 (the base point); values barely below the base point
    (within 1e-12 relative) are clamped to it.
    """
    u = np.asarray(c, dtype=float) + a.ell0
    tiny = 1e-12 * max(1.0, abs(a.ell0))
    if np.any(u < -tiny):
        raise OutOfRange(f"alpha argument below the base point -ell0 = {-a.ell0!r}")
    u = np.maximum(u, 0.0)
    out = u**1.5 * (a.alpha0 + u * (a.alpha1 + u * (a.alpha2 + u * a.alpha3)))
    return float(out) if np.isscalar(c) else out


def lazutkin_of_rotation(inv: InvariantSet, omega):
    """Lazutkin invariant of the omega-curve: L(omega) = omega beta'(omega) - beta(omega).

    Series through omega^9 in the invariants.
    """
    i3, i5, i7, i9 = inv.I3, inv.I5, inv.I7, inv.I9
    w = np.asarray(omega, dtype=float)
    w2 = w * w
    c3 = i3**3 / 12.0
    c5 = -(i3**4) * i5 / 4320.0
    c7 = i3**5 * (14.0 * i5**2 - 81.0 * i3 * i7) / 21772800.0
    c9 = -(i3**6) * (4082400.0 * i3**2 * i9 - 729.0 * i3 * i5 * i7 + 49.0 * i5**3) / 26453952000.0
    out = w2 * w * (c3 + w2 * (c5 + w2 * (c7 + w2 * c9)))
    return float(out) if np.isscalar(omega) else out


def rotation_of_lazutkin(inv: InvariantSet, L):
    """Inverse series omega(L) through L^{7/3}.

    Coefficients follow from inverting L(omega); the linear term is
    I5 / (90 I3^2) (consistent with dimensional scaling and with the circle
    value L / (20 pi R)).
    """
    i3, i5, i7, i9 = inv.I3, inv.I5, inv.I7, inv.I9
    Lv = np.asarray(L, dtype=float)
    if np.any(Lv < 0.0):
        raise OutOfRange("Lazutkin invariant must be nonnegative")
    t = np.cbrt(Lv)
    cA = _CBRT32 * 2.0 / i3
    cB = i5 / (90.0 * i3**2)
    cC = _CBRT32_SQ * (243.0 * i3 * i7 + 14.0 * i5**2) / (340200.0 * i3**3)
    cD = _CBRT32 * (5443200.0 * i3**2 * i9 + 243.0 * i3 * i5 * i7 + 7.0 * i5**3) / (
        30618000.0 * i3**4
    )
    out = cA * t + cB * Lv + cC * t * Lv * t + cD * Lv * Lv * t
    return float(out) if np.isscalar(L) else out


def isoperimetric_defect(inv: InvariantSet) -> float:
    """I3^3 - 4 pi^2 I1; nonpositive, and zero exactly for circles."""
    return inv.I3**3 - 4.0 * math.pi**2 * inv.I1
