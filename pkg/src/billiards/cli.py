"""Command-line front end: domain ingestion, batch computation, verification.

Exit codes: 0 success, 1 failed check or failed computation, 2 input error.
The BILLIARD_QUAD_N environment variable overrides the default quadrature
size when --quad-N is not given.  Output is deterministic for a fixed
(config, seed): JSON is emitted with sorted keys and reports carry a
"schema": 1 version field plus provenance (quadrature sizes, optimizer
iteration counts and residuals).  The report command additionally renders
PNG figures (boundary shape, spectrum residuals) next to the delimited
output; figure bytes are informational and not part of the determinism
contract.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .caustics import (
    concentric_circle_probe,
    confocal_ellipse_probe,
    delta_series_of_L,
    geometric_lazutkin_Q,
    launch_tangent,
    lazutkin_integral,
    lazutkin_series_L_of_delta,
)
from .dynamics import PhasePoint, iterate, lazutkin_coordinates, rotation_number_estimate, step
from .ellipse import (
    ellipse_beta_series,
    ellipse_invariants,
    ellipse_params,
    recover_ellipse,
    rotation_of_caustic,
)
from .errors import (
    BilliardError,
    CheckFailed,
    DomainError,
    InvalidSpec,
    OutOfRange,
    ParseError,
)
from .geometry import TWO_PI, Domain, DomainSpec, build_domain, load_domain
from .invariants import (
    alpha_coefficients,
    alpha_series_eval,
    beta_coefficients,
    beta_series_eval,
    caustic_length_coefficients,
    compute_invariants,
    isoperimetric_defect,
)
from .spectrum import beta_at_rational, compare_spectrum_vs_series, max_periodic_orbit

SCHEMA_VERSION = 1
_DEFAULT_QUAD_N = 2048
_COMMANDS = ("validate", "invariants", "beta", "alpha", "spectrum", "orbit", "caustic", "verify", "report")


@dataclass
class RunConfig:
    """Validated run description; options carries command-specific extras."""

    command: str
    domain_path: str | None = None
    quadrature_N: int = _DEFAULT_QUAD_N
    rationals: list = field(default_factory=list)
    output_format: str = "json"
    seed: int = 0
    options: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.command not in _COMMANDS:
            raise InvalidSpec(f"unknown command {self.command!r}")
        if self.output_format not in ("json", "csv"):
            raise InvalidSpec(f"output format must be json or csv, got {self.output_format!r}")
        if self.quadrature_N < 64 or self.quadrature_N % 2:
            raise InvalidSpec(f"quadrature_N must be even and >= 64, got {self.quadrature_N}")
        for p, q in self.rationals:
            if q < 2 or p < 1 or math.gcd(p, q) != 1 or 2 * p > q:
                raise InvalidSpec(
                    f"rationals must satisfy 0 < p/q <= 1/2 with gcd(p, q) = 1, got {p}/{q}"
                )


def parse_rationals(text: str) -> list:
    """Parse a comma-separated list like '1/2,1/3,2/7' into (p, q) pairs."""
    pairs = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        parts = token.split("/")
        try:
            p, q = int(parts[0]), int(parts[1])
        except (ValueError, IndexError) as exc:
            raise ParseError(f"cannot parse rational {token!r} (expected p/q)") from exc
        pairs.append((p, q))
    if not pairs:
        raise ParseError("empty rationals list")
    return pairs


def _emit_json(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _emit_csv(rows: list, fieldnames: list) -> None:
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(fieldnames)
    for row in rows:
        writer.writerow([row[name] for name in fieldnames])


def _load(config: RunConfig) -> Domain:
    if not config.domain_path:
        raise ParseError(f"command {config.command!r} needs --domain")
    return load_domain(config.domain_path)


# ---------------------------------------------------------------------------
# command handlers


def _handle_validate(config: RunConfig) -> int:
    domain = _load(config)
    phi = np.linspace(0.0, TWO_PI, 4096, endpoint=False)
    rho = domain.rho(phi)
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "validate",
        "domain": domain.spec.to_dict(),
        "total_length": domain.total_length,
        "rho_min": float(np.min(rho)),
        "rho_max": float(np.max(rho)),
        "convex": True,
    }
    if config.output_format == "csv":
        _emit_csv(
            [{"quantity": k, "value": payload[k]} for k in ("total_length", "rho_min", "rho_max")],
            ["quantity", "value"],
        )
    else:
        _emit_json(payload)
    return 0


def _invariants_payload(config: RunConfig, domain: Domain) -> dict:
    inv = compute_invariants(domain, config.quadrature_N)
    b = beta_coefficients(inv)
    a = alpha_coefficients(inv)
    cl = caustic_length_coefficients(inv)
    return {
        "schema": SCHEMA_VERSION,
        "domain": domain.spec.to_dict(),
        "quadrature_N": inv.quadrature_N,
        "invariants": {"I1": inv.I1, "I3": inv.I3, "I5": inv.I5, "I7": inv.I7, "I9": inv.I9},
        "beta_coefficients": {
            "beta1": b.beta1,
            "beta3": b.beta3,
            "beta5": b.beta5,
            "beta7": b.beta7,
            "beta9": b.beta9,
        },
        "alpha_coefficients": {
            "ell0": a.ell0,
            "alpha0": a.alpha0,
            "alpha1": a.alpha1,
            "alpha2": a.alpha2,
            "alpha3": a.alpha3,
        },
        "caustic_length_coefficients": {"a": cl.a, "b": cl.b, "c": cl.c, "d": cl.d},
        "isoperimetric_defect": isoperimetric_defect(inv),
    }


def _handle_invariants(config: RunConfig) -> int:
    domain = _load(config)
    payload = dict(_invariants_payload(config, domain), command="invariants")
    if config.output_format == "csv":
        rows = [{"quantity": k, "value": v} for k, v in sorted(payload["invariants"].items())]
        rows.append({"quantity": "isoperimetric_defect", "value": payload["isoperimetric_defect"]})
        _emit_csv(rows, ["quantity", "value"])
    else:
        _emit_json(payload)
    return 0


def _handle_beta(config: RunConfig) -> int:
    domain = _load(config)
    omegas = config.options["omega"]
    inv = compute_invariants(domain, config.quadrature_N)
    b = beta_coefficients(inv)
    for w in omegas:
        if abs(w) > 0.2:
            print(
                f"warning: |omega| = {abs(w):g} is beyond the trusted Taylor range (0.2); "
                "the truncation error grows like omega^11",
                file=sys.stderr,
            )
    rows = [{"omega": w, "beta_series": float(beta_series_eval(b, w))} for w in omegas]
    if config.output_format == "csv":
        _emit_csv(rows, ["omega", "beta_series"])
    else:
        _emit_json(
            {
                "schema": SCHEMA_VERSION,
                "command": "beta",
                "domain": domain.spec.to_dict(),
                "quadrature_N": inv.quadrature_N,
                "rows": rows,
            }
        )
    return 0


def _handle_alpha(config: RunConfig) -> int:
    domain = _load(config)
    cs = config.options["c"]
    inv = compute_invariants(domain, config.quadrature_N)
    a = alpha_coefficients(inv)
    rows = [{"c": c, "alpha_series": float(alpha_series_eval(a, c))} for c in cs]
    if config.output_format == "csv":
        _emit_csv(rows, ["c", "alpha_series"])
    else:
        _emit_json(
            {
                "schema": SCHEMA_VERSION,
                "command": "alpha",
                "domain": domain.spec.to_dict(),
                "ell0": a.ell0,
                "quadrature_N": inv.quadrature_N,
                "rows": rows,
            }
        )
    return 0


def _spectrum_report(config: RunConfig, domain: Domain) -> dict:
    inv = compute_invariants(domain, config.quadrature_N)
    return compare_spectrum_vs_series(
        domain,
        config.rationals,
        inv=inv,
        seed=config.seed,
        tol=config.options.get("tol"),
        workers=config.options.get("workers", 4),
    )


_SPECTRUM_COLUMNS = ["p", "q", "omega", "beta_numeric", "beta_series", "residual"]


def _handle_spectrum(config: RunConfig) -> int:
    domain = _load(config)
    report = _spectrum_report(config, domain)
    if config.output_format == "csv":
        _emit_csv(report["rows"], _SPECTRUM_COLUMNS)
    else:
        _emit_json(
            {
                "schema": SCHEMA_VERSION,
                "command": "spectrum",
                "domain": domain.spec.to_dict(),
                "seed": config.seed,
                **report,
            }
        )
    return 0


def _handle_orbit(config: RunConfig) -> int:
    domain = _load(config)
    s0 = config.options["s0"]
    phi0 = config.options["phi0"]
    steps = config.options["steps"]
    traj = iterate(domain, PhasePoint(s=s0, phi=phi0), steps)
    rows = []
    for i, point in enumerate(traj.points):
        x, y = lazutkin_coordinates(domain, point)
        rows.append(
            {"step": i, "s": point.s, "phi": point.phi, "x_lazutkin": x, "y_lazutkin": y}
        )
    if config.output_format == "csv":
        _emit_csv(rows, ["step", "s", "phi", "x_lazutkin", "y_lazutkin"])
    else:
        _emit_json(
            {
                "schema": SCHEMA_VERSION,
                "command": "orbit",
                "domain": domain.spec.to_dict(),
                "rotation_estimate": rotation_number_estimate(traj),
                "rows": rows,
            }
        )
    return 0


def _build_probe(config: RunConfig, domain: Domain):
    text = config.options["probe"]
    kind, _, rest = text.partition(":")
    kv = {}
    for item in rest.split(","):
        if not item:
            continue
        key, _, value = item.partition("=")
        try:
            kv[key.strip()] = float(value)
        except ValueError as exc:
            raise ParseError(f"bad probe parameter {item!r}") from exc
    spec = domain.spec
    if kind == "circle":
        if spec.kind != "circle":
            raise InvalidSpec("circle probes require a circular table")
        rho0 = kv.get("rho", kv.get("frac", 0.8) * spec.radius)
        return concentric_circle_probe(spec.radius, rho0)
    if kind == "confocal":
        if spec.kind != "ellipse":
            raise InvalidSpec("confocal probes require an elliptical table")
        params = ellipse_params(spec.a, spec.h)
        mu = kv.get("mu", kv.get("frac", 0.8) * params.mu0)
        return confocal_ellipse_probe(params, mu, table=domain)
    raise ParseError(f"unknown probe kind {kind!r} (use circle:... or confocal:...)")


def _handle_caustic(config: RunConfig) -> int:
    domain = _load(config)
    probe = _build_probe(config, domain)
    checks = [c.strip() for c in config.options.get("check", "Q,L").split(",") if c.strip()]
    n_samples = config.options.get("samples", 8)
    delta = config.options.get("delta", 0.15)
    phis = np.linspace(0.0, TWO_PI, n_samples, endpoint=False)
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "caustic",
        "domain": domain.spec.to_dict(),
        "probe_length": probe.length,
        "lazutkin_Q": probe.lazutkin_Q,
    }
    failures = []
    if "Q" in checks:
        values = [geometric_lazutkin_Q(domain, probe, float(phi)) for phi in phis]
        spread = max(values) - min(values)
        tol = 1e-7 * max(1.0, abs(probe.lazutkin_Q))
        inv = compute_invariants(domain, config.quadrature_N)
        alpha = alpha_coefficients(inv)
        duality = probe.lazutkin_Q - float(alpha_series_eval(alpha, -probe.length))
        payload["Q_check"] = {
            "values": values,
            "spread": spread,
            "tolerance": tol,
            "alpha_duality_residual": duality,
            "passed": spread <= tol,
        }
        if spread > tol:
            failures.append(f"Q constancy (spread {spread:.3e} > {tol:.3e})")
    if "L" in checks:
        rows = []
        worst = 0.0
        for phi in phis:
            jets = probe.caustic_rho(float(phi), order=6)
            exact = lazutkin_integral(probe, float(phi), delta)
            series = float(lazutkin_series_L_of_delta(jets, delta))
            back = float(delta_series_of_L(jets, exact))
            rows.append(
                {
                    "phi": float(phi),
                    "L_integral": exact,
                    "L_series": series,
                    "delta_roundtrip": back,
                }
            )
            worst = max(worst, abs(exact - series))
        tol = 1e-8 * max(1.0, probe.length)
        payload["L_check"] = {"rows": rows, "max_series_error": worst, "tolerance": tol, "passed": worst <= tol}
        if worst > tol:
            failures.append(f"L series vs integral (error {worst:.3e} > {tol:.3e})")
    _emit_json(payload)
    if failures:
        raise CheckFailed("; ".join(failures))
    return 0


# ---------------------------------------------------------------------------
# verification batteries


class _Battery:
    def __init__(self) -> None:
        self.failures = []
        self.count = 0

    def check(self, name: str, value: float, target: float, tol: float, relative: bool = True) -> None:
        self.count += 1
        err = abs(value - target)
        if relative:
            err /= max(abs(target), 1e-300)
        ok = err <= tol
        tag = "PASS" if ok else "FAIL"
        kind = "rel" if relative else "abs"
        print(f"[{tag}] {name}: value={value!r} target={target!r} ({kind} err {err:.3e}, tol {tol:.1e})")
        if not ok:
            self.failures.append(name)

    def finish(self, label: str) -> int:
        passed = self.count - len(self.failures)
        print(f"{label}: {passed}/{self.count} checks passed")
        if self.failures:
            raise CheckFailed(f"{self.failures[0]} (and {len(self.failures) - 1} more)" if len(self.failures) > 1 else self.failures[0])
        return 0


def _verify_circle(config: RunConfig) -> int:
    R = config.options.get("R", 1.0)
    if R <= 0:
        raise OutOfRange(f"radius must be positive, got {R}")
    battery = _Battery()
    domain = build_domain(DomainSpec.circle(R))
    inv = compute_invariants(domain, config.quadrature_N)
    cbrtR = R ** (1.0 / 3.0)
    battery.check("I1", inv.I1, 2.0 * math.pi * R, 1e-10)
    battery.check("I3", inv.I3, 2.0 * math.pi * cbrtR, 1e-10)
    battery.check("I5", inv.I5, 18.0 * math.pi / cbrtR, 1e-10)
    battery.check("I7", inv.I7, 18.0 * math.pi / R, 1e-10)
    battery.check("I9", inv.I9, 281.0 * math.pi / 22400.0 / R ** (5.0 / 3.0), 1e-10)
    b = beta_coefficients(inv)
    for k, target in zip((1, 3, 5, 7, 9), (-2.0 * math.pi, 2.0 * math.pi**3, -2.0 * math.pi**5, 2.0 * math.pi**7, -2.0 * math.pi**9)):
        battery.check(f"beta{k}", getattr(b, f"beta{k}"), target * R, 1e-9)
    battery.check("isoperimetric_defect", isoperimetric_defect(inv), 0.0, 1e-8 * max(1.0, R) ** 3, relative=False)
    scale = max(1.0, R)
    battery.check("beta(1/2)", beta_at_rational(domain, 1, 2, seed=config.seed), -2.0 * R, 1e-9 * scale, relative=False)
    battery.check("beta(1/3)", beta_at_rational(domain, 1, 3, seed=config.seed), -math.sqrt(3.0) * R, 1e-9 * scale, relative=False)
    battery.check("beta(1/5)", beta_at_rational(domain, 1, 5, seed=config.seed), -2.0 * R * math.sin(math.pi / 5.0), 1e-9 * scale, relative=False)
    start = PhasePoint(s=0.3 * scale % domain.total_length, phi=0.7)
    nxt = step(domain, start)
    battery.check("step conjugacy", nxt.s, (start.s + 2.0 * R * 0.7) % domain.total_length, 1e-10 * scale, relative=False)
    traj = iterate(domain, PhasePoint(s=0.0, phi=0.3 * math.pi), 400)
    battery.check("rotation estimate", rotation_number_estimate(traj), 0.3, 1e-12, relative=False)
    probe = concentric_circle_probe(R, 0.8 * R)
    battery.check(
        "geometric Q",
        geometric_lazutkin_Q(domain, probe, 0.37),
        probe.lazutkin_Q,
        1e-10 * scale,
        relative=False,
    )
    jets = probe.caustic_rho(0.0, order=6)
    exact_L = 2.0 * 0.8 * R * (math.tan(0.1) - 0.1)
    battery.check("caustic L series", float(lazutkin_series_L_of_delta(jets, 0.1)), exact_L, 1e-11 * scale, relative=False)
    return battery.finish(f"verify circle (R={R:g})")


def _verify_ellipse(config: RunConfig) -> int:
    a = config.options.get("a", 1.0)
    h = config.options.get("h", 0.5)
    params = ellipse_params(a, h)
    if params.h == 0.0:
        raise InvalidSpec("verify ellipse needs h > 0 (use verify circle instead)")
    battery = _Battery()
    domain = build_domain(DomainSpec.ellipse(a, h))
    inv = compute_invariants(domain, config.quadrature_N)
    I1c, I3c, I5c = ellipse_invariants(params)
    battery.check("I1", inv.I1, I1c, 1e-8)
    battery.check("I3", inv.I3, I3c, 1e-8)
    battery.check("I5", inv.I5, I5c, 1e-8)
    bq = beta_coefficients(inv)
    bc = ellipse_beta_series(params)
    for k, tol in ((1, 1e-8), (3, 1e-8), (5, 1e-8), (7, 1e-6), (9, 1e-6)):
        battery.check(f"beta{k}", getattr(bq, f"beta{k}"), getattr(bc, f"beta{k}"), tol)
    battery.check("beta(1/2)", beta_at_rational(domain, 1, 2, seed=config.seed), -2.0 * a, 1e-8 * max(1.0, a), relative=False)
    mu = 0.8 * params.mu0
    probe = confocal_ellipse_probe(params, mu, table=domain)
    launch = launch_tangent(domain, probe, 0.3)
    traj = iterate(domain, launch, 2000)
    battery.check(
        "rotation formula vs orbit",
        rotation_of_caustic(params, mu),
        rotation_number_estimate(traj),
        1e-4,
        relative=False,
    )
    near = confocal_ellipse_probe(params, 0.97 * params.mu0, table=domain)
    alpha = alpha_coefficients(inv)
    battery.check(
        "Q duality",
        near.lazutkin_Q,
        float(alpha_series_eval(alpha, -near.length)),
        1e-8 * max(1.0, a),
        relative=False,
    )
    ra, rh = recover_ellipse(bc.beta1, bc.beta3)
    battery.check("recovered a", ra, a, 1e-8)
    battery.check("recovered h", rh, h, 1e-8, relative=False)
    return battery.finish(f"verify ellipse (a={a:g}, h={h:g})")


def _handle_verify(config: RunConfig) -> int:
    which = config.options["which"]
    if which == "circle":
        return _verify_circle(config)
    if which == "ellipse":
        return _verify_ellipse(config)
    raise InvalidSpec(f"unknown verification target {which!r}")


# ---------------------------------------------------------------------------
# report


def _render_figures(outdir: str, domain: Domain, spectrum: dict) -> list:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    written = []
    phi = np.linspace(0.0, TWO_PI, 1024)
    pts = domain.point_at(phi)
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    ax.plot(pts[:, 0], pts[:, 1], lw=1.2)
    ax.set_aspect("equal")
    ax.set_title(f"{domain.spec.kind} boundary")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    path = os.path.join(outdir, "domain.png")
    fig.savefig(path, dpi=144, bbox_inches="tight")
    plt.close(fig)
    written.append(path)

    pairs = [(r["omega"], abs(r["residual"])) for r in spectrum["rows"] if abs(r["residual"]) > 0.0]
    fig, ax = plt.subplots(figsize=(5.5, 4.0))
    if pairs:
        w = np.array([p[0] for p in pairs])
        res = np.array([p[1] for p in pairs])
        ax.loglog(w, res, "o", ms=4, label="|beta_numeric - beta_series|")
        exponent = spectrum["fit"].get("exponent")
        if exponent is not None:
            anchor = res[np.argmax(w)] / w.max() ** exponent
            grid = np.linspace(w.min(), w.max(), 64)
            ax.loglog(grid, anchor * grid**exponent, "-", lw=1.0, label=f"slope {exponent:.2f}")
        ax.legend(fontsize=8)
    ax.set_xlabel("rotation number p/q")
    ax.set_ylabel("spectrum residual")
    ax.set_title("marked length spectrum vs Taylor series")
    path = os.path.join(outdir, "residuals.png")
    fig.savefig(path, dpi=144, bbox_inches="tight")
    plt.close(fig)
    written.append(path)
    return written


def _handle_report(config: RunConfig) -> int:
    domain = _load(config)
    outdir = config.options["out"]
    os.makedirs(outdir, exist_ok=True)
    if not config.rationals:
        config.rationals = [(1, q) for q in range(2, 9)]
        config.validate()
    spectrum = _spectrum_report(config, domain)
    payload = _invariants_payload(config, domain)
    payload.update(
        {
            "command": "report",
            "seed": config.seed,
            "rationals": [f"{p}/{q}" for p, q in config.rationals],
            "spectrum": spectrum,
        }
    )
    report_path = os.path.join(outdir, "report.json")
    with open(report_path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    csv_path = os.path.join(outdir, "spectrum.csv")
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(_SPECTRUM_COLUMNS)
        for row in spectrum["rows"]:
            writer.writerow([row[name] for name in _SPECTRUM_COLUMNS])
    figures = _render_figures(outdir, domain, spectrum)
    for path in [report_path, csv_path, *figures]:
        print(f"wrote {path}")
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def create_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="billiard",
        description="Length spectrum, Lazutkin invariants and Taylor data for convex billiards.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quad-N", type=int, default=None, help="quadrature size (default: BILLIARD_QUAD_N or 2048)")
    common.add_argument("--format", choices=("json", "csv"), default="json", dest="output_format")
    common.add_argument("--seed", type=int, default=0, help="seed for optimizer restarts")
    with_domain = argparse.ArgumentParser(add_help=False)
    with_domain.add_argument("--domain", required=True, help="path to a domain spec JSON file")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common, with_domain], help="parse a domain file and report shape data")
    sub.add_parser("invariants", parents=[common, with_domain], help="quadrature invariants and Taylor coefficients")

    p_beta = sub.add_parser("beta", parents=[common, with_domain], help="evaluate the beta series")
    p_beta.add_argument("--omega", required=True, help="comma-separated rotation numbers")

    p_alpha = sub.add_parser("alpha", parents=[common, with_domain], help="evaluate the alpha series")
    p_alpha.add_argument("--c", required=True, help="comma-separated arguments (c >= -perimeter)")

    p_spec = sub.add_parser("spectrum", parents=[common, with_domain], help="maximal marked lengths vs series")
    p_spec.add_argument("--rationals", required=True, help="comma-separated p/q list, 0 < p/q <= 1/2")
    p_spec.add_argument("--tol", type=float, default=None, help="optimizer residual tolerance")
    p_spec.add_argument("--workers", type=int, default=4, help="worker threads for the batch")

    p_orbit = sub.add_parser("orbit", parents=[common, with_domain], help="iterate the billiard map")
    p_orbit.add_argument("--s0", type=float, default=0.0, help="initial arc-length position")
    p_orbit.add_argument("--phi0", type=float, required=True, help="initial reflection angle in (0, pi)")
    p_orbit.add_argument("--steps", type=int, default=100)

    p_caustic = sub.add_parser("caustic", parents=[common, with_domain], help="cross-check a caustic probe")
    p_caustic.add_argument("--probe", required=True, help="circle:rho=R0 | confocal:mu=M (frac=F for relative)")
    p_caustic.add_argument("--check", default="Q,L", help="comma list from {Q, L}")
    p_caustic.add_argument("--delta", type=float, default=0.15, help="tangency half-width for the L check")
    p_caustic.add_argument("--samples", type=int, default=8, help="number of boundary sample points")

    p_verify = sub.add_parser("verify", parents=[common], help="run a built-in verification battery")
    p_verify.add_argument("which", choices=("circle", "ellipse"))
    p_verify.add_argument("--R", type=float, default=1.0, help="circle radius")
    p_verify.add_argument("--a", type=float, default=1.0, help="ellipse semi-major axis")
    p_verify.add_argument("--h", type=float, default=0.5, help="ellipse eccentricity")

    p_report = sub.add_parser("report", parents=[common, with_domain], help="write report.json, spectrum.csv and figures")
    p_report.add_argument("--out", required=True, help="output directory")
    p_report.add_argument("--rationals", default=None, help="comma-separated p/q list (default 1/2..1/8)")
    p_report.add_argument("--workers", type=int, default=4)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    quad = args.quad_N
    if quad is None:
        env = os.environ.get("BILLIARD_QUAD_N")
        if env is not None:
            try:
                quad = int(env)
            except ValueError as exc:
                raise ParseError(f"BILLIARD_QUAD_N must be an integer, got {env!r}") from exc
        else:
            quad = _DEFAULT_QUAD_N
    rationals = []
    raw = getattr(args, "rationals", None)
    if raw:
        rationals = parse_rationals(raw)
    options: dict = {}
    if args.command == "beta":
        options["omega"] = [float(x) for x in args.omega.split(",") if x.strip()]
    elif args.command == "alpha":
        options["c"] = [float(x) for x in args.c.split(",") if x.strip()]
    elif args.command == "spectrum":
        options["tol"] = args.tol
        options["workers"] = args.workers
    elif args.command == "orbit":
        options.update(s0=args.s0, phi0=args.phi0, steps=args.steps)
    elif args.command == "caustic":
        options.update(probe=args.probe, check=args.check, delta=args.delta, samples=args.samples)
    elif args.command == "verify":
        options.update(which=args.which, R=args.R, a=args.a, h=args.h)
    elif args.command == "report":
        options["out"] = args.out
        options["workers"] = args.workers
    config = RunConfig(
        command=args.command,
        domain_path=getattr(args, "domain", None),
        quadrature_N=quad,
        rationals=rationals,
        output_format=getattr(args, "output_format", "json"),
        seed=getattr(args, "seed", 0),
        options=options,
    )
    config.validate()
    return config


def run(config: RunConfig) -> int:
    """Execute a validated RunConfig; returns the process exit code."""
    handler = {
        "validate": _handle_validate,
        "invariants": _handle_invariants,
        "beta": _handle_beta,
        "alpha": _handle_alpha,
        "spectrum": _handle_spectrum,
        "orbit": _handle_orbit,
        "caustic": _handle_caustic,
        "verify": _handle_verify,
        "report": _handle_report,
    }[config.command]
    return handler(config)


def main(argv=None) -> int:
    parser = create_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        return run(config)
    except CheckFailed as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1
    except (ParseError, InvalidSpec, OutOfRange, DomainError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except BilliardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
