"""Markov chains on [0,1] with atomic measures kept in log domain.

The package tracks pushforward iterates of point masses under two-jump
transition kernels, measures convergence in total variation and against
a fixed family of test functions, and certifies (or refutes) minorization
conditions and vanishing-buffer witnesses for the absence of a spectral gap.
"""

from .analysis import (
    ConvergenceProfile,
    TrajectorySet,
    convergence_profile,
    dirac_fixed_points,
    gamma_limit,
    invariance_residual,
    profile_to_csv,
    profile_to_dict,
    trajectory_set,
    uniformity_sup,
    weak_star_gap,
)
from .certify import (
    DoeblinCertificate,
    DoeblinReport,
    PfaWitness,
    PfaWitnessReport,
    adversarial_set_family,
    candidate_witnesses,
    check_doeblin,
    check_invariant_basis,
    diagnose_quasicompactness,
    invariant_flux_test,
    mc3_certificate,
    mc5_certificate,
    near_one_witness,
    near_zero_witness,
    verify_pfa_witness,
)
from .expressions import PiParseError, PiRangeError, parse_pi
from .grids import endpoint_refined_grid, geometric_near_one, geometric_near_zero, uniform_grid
from .kernel import (
    BUILTIN_NAMES,
    TransitionKernel,
    apply_dual,
    apply_markov,
    builtin_chain,
    cesaro_mass,
    iterate,
    kernel_from_spec,
    kernel_measure,
    kernel_to_spec,
    mc1,
    mc2,
    mc3,
    mc4,
    mc5,
    nstep_mass,
    piecewise_two_jump_chain,
    two_jump_chain,
)
from .measure import (
    ONE,
    ZERO,
    AtomicMeasure,
    AuditError,
    Interval,
    MeasurableSet,
    Point,
    TestFunction,
    convex_combine,
    dirac,
    full_interval,
    integrate,
    is_singular,
    mass,
    mass_log,
    open_unit_interval,
    tv_distance,
    tv_distance_log,
    tv_distance_log10,
)

__version__ = "0.1.0"
