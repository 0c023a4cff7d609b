"""Strictly convex planar curves via the radius of curvature in tangent-angle form.

A smooth strictly convex closed curve is encoded by its radius of curvature
rho(phi) > 0, where phi is the angle of the (counterclockwise) unit tangent.
Positions are recovered by integrating the tangent, x(phi) = int rho cos,
y(phi) = int rho sin, and the arc element is ds = rho dphi.  For the three
supported families (circle, ellipse, finite Fourier series) positions, arc
length and all rho-derivatives up to third order are evaluated in closed form
or by termwise trigonometric calculus — nothing here is finite-differenced.

Normalization: every curve passes through (0, 0) with tangent (1, 0) at
phi = 0.  Global position therefore carries no information and everything
computed downstream is translation-invariant.

Fourier domains omit harmonic 1 by construction, which makes the closure
conditions int rho cos = int rho sin = 0 over a period hold identically.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .elliptic import incomplete_E, incomplete_F_fast
from .errors import InvalidSpec, NoConvergence, NonConvex, OutOfRange, ParseError

TWO_PI = 2.0 * math.pi

_SPEC_KEYS = {
    "circle": {"kind", "radius"},
    "ellipse": {"kind", "a", "h"},
    "fourier": {"kind", "mean", "cos", "sin"},
}


@dataclass(frozen=True)
class DomainSpec:
    """Serializable description of a convex domain boundary.

    kind is one of "circle" (radius), "ellipse" (major semiaxis a,
    eccentricity h in [0,1)) or "fourier" (mean radius of curvature plus
    cosine/sine coefficients keyed by harmonic index >= 2).
    """

    kind: str
    radius: float = 1.0
    a: float = 1.0
    h: float = 0.0
    mean: float = 1.0
    cos: dict = field(default_factory=dict)
    sin: dict = field(default_factory=dict)

    @staticmethod
    def circle(radius: float = 1.0) -> "DomainSpec":
        spec = DomainSpec(kind="circle", radius=float(radius))
        spec.validate()
        return spec

    @staticmethod
    def ellipse(a: float = 1.0, h: float = 0.0) -> "DomainSpec":
        spec = DomainSpec(kind="ellipse", a=float(a), h=float(h))
        spec.validate()
        return spec

    @staticmethod
    def fourier(mean: float = 1.0, cos: dict | None = None, sin: dict | None = None) -> "DomainSpec":
        spec = DomainSpec(
            kind="fourier",
            mean=float(mean),
            cos=_normalize_harmonics(cos),
            sin=_normalize_harmonics(sin),
        )
        spec.validate()
        return spec

    def validate(self) -> None:
        if self.kind == "circle":
            if not (self.radius > 0.0 and math.isfinite(self.radius)):
                raise InvalidSpec(f"circle radius must be positive, got {self.radius!r}")
        elif self.kind == "ellipse":
            if not (self.a > 0.0 and math.isfinite(self.a)):
                raise InvalidSpec(f"ellipse semiaxis must be positive, got {self.a!r}")
            if not (0.0 <= self.h < 1.0):
                raise InvalidSpec(f"ellipse eccentricity must lie in [0, 1), got {self.h!r}")
        elif self.kind == "fourier":
            if not (self.mean > 0.0 and math.isfinite(self.mean)):
                raise InvalidSpec(f"fourier mean must be positive, got {self.mean!r}")
            for table in (self.cos, self.sin):
                for n, value in table.items():
                    if not (isinstance(n, int) and n >= 2):
                        raise InvalidSpec(f"fourier harmonics must be integers >= 2, got {n!r}")
                    if not math.isfinite(value):
                        raise InvalidSpec(f"fourier coefficient for harmonic {n} is not finite")
        else:
            raise InvalidSpec(f"unknown domain kind {self.kind!r}")

    def to_dict(self) -> dict:
        if self.kind == "circle":
            return {"kind": "circle", "radius": self.radius}
        if self.kind == "ellipse":
            return {"kind": "ellipse", "a": self.a, "h": self.h}
        return {
            "kind": "fourier",
            "mean": self.mean,
            "cos": {str(n): self.cos[n] for n in sorted(self.cos)},
            "sin": {str(n): self.sin[n] for n in sorted(self.sin)},
        }

    @staticmethod
    def from_dict(data: dict) -> "DomainSpec":
        if not isinstance(data, dict):
            raise ParseError(f"domain spec must be a JSON object, got {type(data).__name__}")
        kind = data.get("kind")
        if kind not in _SPEC_KEYS:
            raise InvalidSpec(f"unknown domain kind {kind!r}")
        unknown = set(data) - _SPEC_KEYS[kind]
        if unknown:
            raise ParseError(f"unknown keys for {kind} spec: {sorted(unknown)}")
        try:
            if kind == "circle":
                return DomainSpec.circle(float(data.get("radius", 1.0)))
            if kind == "ellipse":
                return DomainSpec.ellipse(float(data.get("a", 1.0)), float(data.get("h", 0.0)))
            return DomainSpec.fourier(
                float(data.get("mean", 1.0)),
                data.get("cos") or {},
                data.get("sin") or {},
            )
        except (TypeError, ValueError) as exc:
            if isinstance(exc, InvalidSpec):
                raise
            raise ParseError(f"malformed {kind} spec: {exc}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "DomainSpec":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
        return DomainSpec.from_dict(data)


def _normalize_harmonics(table: dict | None) -> dict:
    """Coerce {harmonic: coefficient} keys to int and values to float."""
    out: dict[int, float] = {}
    for key, value in (table or {}).items():
        try:
            n = int(key)
        except (TypeError, ValueError) as exc:
            raise ParseError(f"harmonic index {key!r} is not an integer") from exc
        if isinstance(key, float) and key != n:
            raise ParseError(f"harmonic index {key!r} is not an integer")
        try:
            coeff = float(value)
        except (TypeError, ValueError) as exc:
            raise ParseError(f"coefficient for harmonic {key!r} is not a number") from exc
        if coeff != 0.0:
            out[n] = coeff
    return out


class Domain:
    """Immutable boundary curve; all methods are pure and thread-safe.

    Subclasses provide exact rho-jets, positions, arc length and the
    raw Lazutkin abscissa integral; this base class supplies the shared
    arc-length inversion and curvature jets.  arclength_of_phi extends
    naturally to all real phi (s(phi + 2*pi) = s(phi) + total_length);
    the public inverse validates its argument range per contract and the
    underscore variants work on the universal cover.
    """

    kind = "abstract"

    def __init__(self, spec: DomainSpec, resolution: int):
        self.spec = spec
        self.resolution = int(resolution)
        self._phi_grid = np.linspace(0.0, TWO_PI, self.resolution + 1)
        self._s_grid = np.asarray(self.arclength_of_phi(self._phi_grid), dtype=float)
        self.total_length = float(self._s_grid[-1])
        if not np.all(np.diff(self._s_grid) > 0.0):
            raise NonConvex("arc length is not strictly increasing (rho <= 0 somewhere)")

    # -- subclass hooks -----------------------------------------------------

    def rho_jets(self, phi, order: int = 3):
        """Return [rho, rho', ..., rho^(order)](phi), shape (order+1,) + phi.shape."""
        raise NotImplementedError

    def point_at(self, phi):
        """Boundary point(s) at tangent angle phi, shape phi.shape + (2,)."""
        raise NotImplementedError

    def arclength_of_phi(self, phi):
        """Arc length from phi = 0, naturally lifted to all real phi."""
        raise NotImplementedError

    def lazutkin_x_raw(self, phi):
        """int_0^phi rho^(1/3) dphi', naturally lifted (used for Lazutkin x)."""
        raise NotImplementedError

    # -- shared operations --------------------------------------------------

    def rho(self, phi):
        return self.rho_jets(phi, order=0)[0]

    def tangent(self, phi):
        phi = np.asarray(phi, dtype=float)
        return np.stack([np.cos(phi), np.sin(phi)], axis=-1)

    def phi_of_arclength(self, s):
        """Inverse of arclength_of_phi on [0, total_length] (contract range)."""
        s_arr = np.asarray(s, dtype=float)
        tol = 1e-9 * max(1.0, self.total_length)
        if np.any(s_arr < -tol) or np.any(s_arr > self.total_length + tol):
            raise OutOfRange(f"arc length outside [0, {self.total_length!r}]")
        return self._phi_of_s_lifted(s)

    def _phi_of_s_lifted(self, s):
        """Inverse on the universal cover: any real s is accepted."""
        s_arr = np.atleast_1d(np.asarray(s, dtype=float))
        cycles = np.floor(s_arr / self.total_length)
        rem = s_arr - cycles * self.total_length
        phi = self._invert_principal(rem) + TWO_PI * cycles
        if np.isscalar(s) or np.asarray(s).ndim == 0:
            return float(phi[0])
        return phi

    def _invert_principal(self, s_rem):
        """Newton iteration seeded from the cumulative table, s_rem in [0, l0]."""
        phi = np.interp(s_rem, self._s_grid, self._phi_grid)
        cell = TWO_PI / self.resolution
        lo = np.maximum(phi - 2.0 * cell, 0.0)
        hi = np.minimum(phi + 2.0 * cell, TWO_PI)
        target_tol = 1e-12 * max(1.0, self.total_length)
        resid = None
        for _ in range(16):
            resid = np.asarray(self.arclength_of_phi(phi)) - s_rem
            if np.all(np.abs(resid) <= target_tol):
                return phi
            phi = np.clip(phi - resid / self.rho(phi), lo, hi)
        resid = np.asarray(self.arclength_of_phi(phi)) - s_rem
        if np.all(np.abs(resid) <= 1e4 * target_tol):
            return phi
        raise NoConvergence(
            f"arc-length inversion stalled, worst residual {float(np.max(np.abs(resid))):.3e}"
        )

    def lazutkin_total(self) -> float:
        """Full-period value of the Lazutkin abscissa integral (equals I3)."""
        total = getattr(self, "_lazutkin_total", None)
        if total is None:
            total = float(self.lazutkin_x_raw(TWO_PI))
            self._lazutkin_total = total
        return total

    def curvature_jets(self, s):
        """(k, k', k'', k''') with respect to arc length at arc position s.

        Chain rule d/ds = rho^{-1} d/dphi applied to exact rho-jets.
        """
        phi = self._phi_of_s_lifted(np.asarray(s, dtype=float) % self.total_length)
        rho, d1, d2, d3 = self.rho_jets(phi, order=3)
        k = 1.0 / rho
        kd = -d1 / rho**3
        kdd = -d2 / rho**4 + 3.0 * d1**2 / rho**5
        kddd = -d3 / rho**5 + 10.0 * d1 * d2 / rho**6 - 15.0 * d1**3 / rho**7
        return k, kd, kdd, kddd


class CircleDomain(Domain):
    kind = "circle"

    def __init__(self, spec: DomainSpec, resolution: int):
        self.R = spec.radius
        super().__init__(spec, resolution)

    def rho_jets(self, phi, order: int = 3):
        phi = np.asarray(phi, dtype=float)
        jets = np.zeros((order + 1,) + phi.shape)
        jets[0] = self.R
        return jets

    def point_at(self, phi):
        phi = np.asarray(phi, dtype=float)
        return np.stack([self.R * np.sin(phi), self.R * (1.0 - np.cos(phi))], axis=-1)

    def arclength_of_phi(self, phi):
        return self.R * np.asarray(phi, dtype=float)

    def lazutkin_x_raw(self, phi):
        return np.cbrt(self.R) * np.asarray(phi, dtype=float)


class EllipseDomain(Domain):
    """Ellipse with semiaxes (a, b), b = a*sqrt(1-h^2), in tangent-angle form.

    With phi the tangent angle measured from the point (0,0) (an endpoint of
    the minor axis, tangent along the major axis), the radius of curvature is
    rho(phi) = a(1-h^2) (1 - h^2 cos^2 phi)^{-3/2}, arc length and the
    Lazutkin abscissa reduce to incomplete elliptic integrals, and positions
    follow from the auxiliary angle u with tan u = (a/b) tan phi.
    """

    kind = "ellipse"

    def __init__(self, spec: DomainSpec, resolution: int):
        self.a = spec.a
        self.h = spec.h
        self.b = spec.a * math.sqrt(1.0 - spec.h**2)
        self._m = spec.h**2
        self._A0 = spec.a * (1.0 - spec.h**2)
        from .elliptic import complete_E, complete_K  # local to avoid cycle at import

        self._Ec = complete_E(spec.h)
        self._Kc = complete_K(spec.h)
        super().__init__(spec, resolution)

    def rho_jets(self, phi, order: int = 3):
        phi = np.asarray(phi, dtype=float)
        m = self._m
        u = 1.0 - m * np.cos(phi) ** 2
        jets = np.zeros((order + 1,) + phi.shape)
        jets[0] = self._A0 * u**-1.5
        if order >= 1:
            u1 = m * np.sin(2.0 * phi)
            jets[1] = -1.5 * self._A0 * u**-2.5 * u1
        if order >= 2:
            u2 = 2.0 * m * np.cos(2.0 * phi)
            jets[2] = self._A0 * (3.75 * u**-3.5 * u1**2 - 1.5 * u**-2.5 * u2)
        if order >= 3:
            u3 = -4.0 * m * np.sin(2.0 * phi)
            jets[3] = self._A0 * (
                -13.125 * u**-4.5 * u1**3 + 11.25 * u**-3.5 * u1 * u2 - 1.5 * u**-2.5 * u3
            )
        if order >= 4:
            jets[4:] = _cos2_power_jets(self._A0, m, phi, order)[4:]
        return jets

    def point_at(self, phi):
        phi = np.asarray(phi, dtype=float)
        raw = np.arctan2(self.a * np.sin(phi), self.b * np.cos(phi))
        u = phi + np.mod(raw - phi + math.pi, TWO_PI) - math.pi
        return np.stack([self.a * np.sin(u), self.b * (1.0 - np.cos(u))], axis=-1)

    def arclength_of_phi(self, phi):
        phi = np.asarray(phi, dtype=float)
        w = np.sqrt(1.0 - self._m * np.cos(phi) ** 2)
        inc = incomplete_E(0.5 * math.pi - phi, self.h)
        return self.a * (self._Ec - inc + self._m * np.cos(phi) * np.sin(phi) / w)

    def lazutkin_x_raw(self, phi):
        phi = np.asarray(phi, dtype=float)
        inc = incomplete_F_fast(0.5 * math.pi - phi, self.h)
        return np.cbrt(self._A0) * (self._Kc - inc)


def _cos2_power_jets(A0: float, m: float, phi, order: int):
    """Jets of A0*(1 - m*cos^2 phi)^{-3/2} to arbitrary order.

    Power-series composition: with f = 1 - m/2 - (m/2)cos(2 phi) (whose
    phi-derivatives are elementary), the jets of g = f^p satisfy the
    standard recurrence k*f0*g_k = sum_{j=1..k} (j*p - (k-j)) f_j g_{k-j}.
    Used for the order-6 jets of caustic probes; the low orders of
    EllipseDomain.rho_jets use the explicit formulas instead.
    """
    phi = np.asarray(phi, dtype=float)
    p = -1.5
    # Taylor coefficients f_j = f^{(j)}(phi)/j!
    f = np.zeros((order + 1,) + phi.shape)
    f[0] = 1.0 - m * np.cos(phi) ** 2
    fact = 1.0
    for j in range(1, order + 1):
        fact *= j
        f[j] = -(m / 2.0) * 2.0**j * np.cos(2.0 * phi + 0.5 * j * math.pi) / fact
    g = np.zeros_like(f)
    g[0] = f[0] ** p
    for k in range(1, order + 1):
        acc = np.zeros_like(f[0])
        for j in range(1, k + 1):
            acc += (j * p - (k - j)) * f[j] * g[k - j]
        g[k] = acc / (k * f[0])
    # back from Taylor coefficients to derivatives
    jets = np.empty_like(g)
    fact = 1.0
    for k in range(order + 1):
        if k > 0:
            fact *= k
        jets[k] = A0 * g[k] * fact
    return jets


class FourierDomain(Domain):
    """rho(phi) = mean + sum_{n>=2} c_n cos(n phi) + s_n sin(n phi).

    Termwise trigonometric calculus gives exact derivatives, positions and
    arc length; the absence of harmonic 1 removes the secular terms so the
    curve closes identically.
    """

    kind = "fourier"

    def __init__(self, spec: DomainSpec, resolution: int):
        harmonics = sorted(set(spec.cos) | set(spec.sin))
        self._n = np.array(harmonics, dtype=float)
        self._c = np.array([spec.cos.get(n, 0.0) for n in harmonics])
        self._s = np.array([spec.sin.get(n, 0.0) for n in harmonics])
        self.mean = spec.mean
        self._laz_cache = None
        super().__init__(spec, resolution)

    def rho_jets(self, phi, order: int = 3):
        phi = np.asarray(phi, dtype=float)
        jets = np.zeros((order + 1,) + phi.shape)
        if self._n.size == 0:
            jets[0] = self.mean
            return jets
        arg = np.multiply.outer(self._n, phi)
        cosm, sinm = np.cos(arg), np.sin(arg)
        c, s = self._c.copy(), self._s.copy()
        jets[0] = self.mean + np.tensordot(c, cosm, axes=1) + np.tensordot(s, sinm, axes=1)
        for j in range(1, order + 1):
            c, s = self._n * s, -self._n * c
            jets[j] = np.tensordot(c, cosm, axes=1) + np.tensordot(s, sinm, axes=1)
        return jets

    def point_at(self, phi):
        phi = np.asarray(phi, dtype=float)
        x = self.mean * np.sin(phi)
        y = self.mean * (1.0 - np.cos(phi))
        for n, c, s in zip(self._n, self._c, self._s):
            sp, sm = np.sin((n + 1) * phi) / (n + 1), np.sin((n - 1) * phi) / (n - 1)
            cp = (1.0 - np.cos((n + 1) * phi)) / (n + 1)
            cm = (1.0 - np.cos((n - 1) * phi)) / (n - 1)
            x += 0.5 * (c * (sp + sm) + s * (cp + cm))
            y += 0.5 * (c * (cp - cm) + s * (sm - sp))
        return np.stack([x, y], axis=-1)

    def arclength_of_phi(self, phi):
        phi = np.asarray(phi, dtype=float)
        s_val = self.mean * phi
        for n, c, s in zip(self._n, self._c, self._s):
            s_val = s_val + (c * np.sin(n * phi) + s * (1.0 - np.cos(n * phi))) / n
        return s_val

    def lazutkin_x_raw(self, phi):
        mean_f, k_arr, a_arr, b_arr = self._lazutkin_coefficients()
        phi = np.asarray(phi, dtype=float)
        out = mean_f * phi
        if k_arr.size:
            arg = np.multiply.outer(k_arr, phi)
            out = out + np.tensordot(a_arr / k_arr, np.sin(arg), axes=1)
            out = out + np.tensordot(b_arr / k_arr, 1.0 - np.cos(arg), axes=1)
        return out

    def _lazutkin_coefficients(self):
        """Fourier coefficients of rho^(1/3), computed once via FFT.

        rho is a positive trigonometric polynomial, so rho^(1/3) is analytic
        and its spectrum decays exponentially; a generous sample count makes
        the truncation error negligible against double precision.
        """
        if self._laz_cache is None:
            n_max = int(self._n.max()) if self._n.size else 1
            m = max(1024, 1 << (n_max.bit_length() + 6))
            grid = np.arange(m) * (TWO_PI / m)
            f = np.cbrt(self.rho(grid))
            coeffs = np.fft.rfft(f)
            mean_f = float(coeffs[0].real) / m
            a_full = 2.0 * coeffs[1:].real / m
            b_full = -2.0 * coeffs[1:].imag / m
            a_full[-1] *= 0.5  # Nyquist bin appears once
            k_full = np.arange(1, coeffs.size, dtype=float)
            keep = (np.abs(a_full) + np.abs(b_full)) > 1e-17 * max(1.0, abs(mean_f))
            self._laz_cache = (mean_f, k_full[keep], a_full[keep], b_full[keep])
        return self._laz_cache


def build_domain(spec: DomainSpec, resolution: int = 2048) -> Domain:
    """Construct an immutable Domain from a validated spec.

    resolution sets the size of the cumulative arc-length table used to
    seed the inversion (N >= 64, even).  Rejects non-convex Fourier specs
    by sampling rho on a dense grid.
    """
    if not isinstance(spec, DomainSpec):
        raise InvalidSpec(f"expected DomainSpec, got {type(spec).__name__}")
    spec.validate()
    resolution = int(resolution)
    if resolution < 64 or resolution % 2 != 0:
        raise InvalidSpec(f"resolution must be an even integer >= 64, got {resolution}")
    if spec.kind == "circle":
        return CircleDomain(spec, resolution)
    if spec.kind == "ellipse":
        return EllipseDomain(spec, resolution)
    domain = FourierDomain(spec, resolution)
    probe = domain.rho(np.linspace(0.0, TWO_PI, 8192, endpoint=False))
    min_rho = float(np.min(probe))
    if min_rho <= 1e-12 * spec.mean:
        phi_min = float(np.argmin(probe)) * TWO_PI / probe.size
        raise NonConvex(
            f"rho(phi) reaches {min_rho:.6g} near phi = {phi_min:.4f}; boundary is not strictly convex"
        )
    return domain


def load_domain(path: str, resolution: int = 2048) -> Domain:
    """Read a DomainSpec JSON file and build the domain."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ParseError(f"cannot read domain file {path!r}: {exc}") from exc
    return build_domain(DomainSpec.from_json(text), resolution)
