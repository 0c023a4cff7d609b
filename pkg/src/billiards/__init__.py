"""Length spectrum, Lazutkin invariants and Taylor data for convex billiards."""

from .caustics import (
    CausticProbe,
    concentric_circle_probe,
    confocal_ellipse_probe,
    delta_series_of_L,
    geometric_lazutkin_Q,
    launch_tangent,
    lazutkin_integral,
    lazutkin_series_L_of_delta,
)
from .dynamics import (
    PhasePoint,
    Trajectory,
    chord_length,
    chord_length_partials,
    iterate,
    lazutkin_coordinates,
    rotation_number_estimate,
    step,
)
from .ellipse import (
    EllipseParams,
    caustic_length,
    ellipse_beta_series,
    ellipse_invariants,
    ellipse_params,
    recover_ellipse,
    rotation_of_caustic,
    uniqueness_functional,
)
from .elliptic import complete_E, complete_K, incomplete_F
from .errors import (
    BilliardError,
    CheckFailed,
    CoincidentPoints,
    DomainError,
    InvalidSpec,
    NoConvergence,
    NonConvergent,
    NonConvex,
    OutOfRange,
    ParseError,
    QuadratureFailure,
    RootNotBracketed,
    TangencyNotFound,
)
from .geometry import Domain, DomainSpec, build_domain, load_domain
from .invariants import (
    AlphaExpansion,
    BetaExpansion,
    CausticLengthCoeffs,
    InvariantSet,
    alpha_coefficients,
    alpha_series_eval,
    beta_coefficients,
    beta_series_derivative,
    beta_series_eval,
    caustic_length_coefficients,
    compute_invariants,
    isoperimetric_defect,
    lazutkin_of_rotation,
    rotation_of_lazutkin,
)
from .spectrum import (
    PeriodicOrbit,
    beta_at_rational,
    compare_spectrum_vs_series,
    marked_length,
    max_periodic_orbit,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaExpansion",
    "BetaExpansion",
    "BilliardError",
    "CausticLengthCoeffs",
    "CausticProbe",
    "CheckFailed",
    "CoincidentPoints",
    "Domain",
    "DomainError",
    "DomainSpec",
    "EllipseParams",
    "InvalidSpec",
    "InvariantSet",
    "NoConvergence",
    "NonConvergent",
    "NonConvex",
    "OutOfRange",
    "ParseError",
    "PeriodicOrbit",
    "PhasePoint",
    "QuadratureFailure",
    "RootNotBracketed",
    "TangencyNotFound",
    "Trajectory",
    "alpha_coefficients",
    "alpha_series_eval",
    "beta_at_rational",
    "beta_coefficients",
    "beta_series_derivative",
    "beta_series_eval",
    "build_domain",
    "caustic_length",
    "caustic_length_coefficients",
    "chord_length",
    "chord_length_partials",
    "compare_spectrum_vs_series",
    "complete_E",
    "complete_K",
    "compute_invariants",
    "concentric_circle_probe",
    "confocal_ellipse_probe",
    "delta_series_of_L",
    "ellipse_beta_series",
    "ellipse_invariants",
    "ellipse_params",
    "geometric_lazutkin_Q",
    "incomplete_F",
    "isoperimetric_defect",
    "iterate",
    "launch_tangent",
    "lazutkin_coordinates",
    "lazutkin_integral",
    "lazutkin_of_rotation",
    "lazutkin_series_L_of_delta",
    "load_domain",
    "marked_length",
    "max_periodic_orbit",
    "recover_ellipse",
    "rotation_number_estimate",
    "rotation_of_caustic",
    "rotation_of_lazutkin",
    "step",
    "uniqueness_functional",
]
