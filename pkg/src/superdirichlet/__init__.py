"""Superharmonically weighted Dirichlet energies on the unit disc.

Numerical library for weights ω = G_μ + P_ν given by a Riesz pair (μ, ν):
potential kernels, outer functions from boundary log-modulus data, Dirichlet
integrals by several independent routes, boundary capacities, and cyclicity
diagnostics, plus a deterministic command-line surface.
"""

from ._util import QUADRATURE_CAP, SignaledInfinity
from .energy import (
    DOUGLAS_CALIBRATION,
    BregmanF,
    DirichletEngine,
    DirichletResult,
    LocalMeasure,
    bregman_f,
    carleson_type_bound,
    dirichlet,
    douglas_type_form,
    local_dirichlet_boundary,
    local_dirichlet_interior,
    ne_bound,
    phi_entropy,
)
from .measures import (
    BoundaryMeasure,
    CircleGrid,
    ConfigError,
    DiscGrid,
    DiscMeasure,
    StandardAlphaProfile,
    SuperharmonicWeight,
    atomic_weight,
    classical_weight,
    default_disc_grid,
    load_config,
    point_mass_harmonic_weight,
    riesz_moment,
    standard_alpha_weight,
)
from .outer import (
    BoundaryLogModulus,
    BoundarySet,
    ClassRReport,
    DistanceProfile,
    OuterFunction,
    arc_localize,
    class_R_check,
    cutoff_max,
    cutoff_min,
    distance_outer,
    outer_from_log_modulus,
    wedge_square,
)
from .potentials import (
    GREEN_KERNEL_LOG_FACTOR,
    PotentialEvaluator,
    a_mu_kernel,
    balayage,
    f_mu_profile,
    green_potential,
    poisson_integral,
    psi_mu,
    v_mu,
    v_r_potential,
)
from .capacity import (
    CapacityResult,
    ConditionCReport,
    DirichletFormMatrix,
    PolarVerdict,
    TypeCheckReport,
    arc_capacity_estimate,
    assemble_form,
    condition_c,
    kernel_diag_estimate,
    point_polar_test,
    strong_type_check,
    variational_capacity,
    weak_type_check,
)
from .cyclicity import (
    DalphaReport,
    DistanceCurve,
    GramSystem,
    Th4Report,
    VanishingReport,
    cyclic_distance,
    dalpha_test,
    gram_system,
    th4_test,
    vanishing_cyclic_candidate,
)

__version__ = "0.1.0"
