"""Desk-scale computations for group-extended Markov shifts.

Pressure of weighted word counts, Gibbs chains, skew-product fiber sums,
convolution-operator norms, and fiber-symmetry certificates, over finite,
free abelian, and free target groups.
"""

from .errors import (
    InputError,
    PreconditionError,
    PruningWarning,
    ResourceError,
    SchemaError,
    SkewpressError,
    SupportError,
)
from .extensions import (
    FiberSeries,
    GroupExtension,
    IrreducibilityProbe,
    SkewTable,
    fiber_sums,
    indicator_table,
    irreducibility_probe,
    partition_sum,
    psi_word,
    step_distribution,
    step_distribution_series,
    weighted_fiber_series,
)
from .gibbs import GibbsAudit, RpfData, cylinder_mass, duality_defect, gibbs_audit, rpf_solve
from .groups import (
    Element,
    FiniteGroup,
    FreeAbelianGroup,
    FreeGroup,
    Group,
    GroupMeasure,
    convolution_power,
    convolve,
    cyclic_group,
    finite_group_by_name,
    point_mass,
    reflect,
    symmetric_group_3,
    trivial_group,
)
from .potentials import (
    CylinderBoundedPotential,
    Normalization,
    Potential,
    ergodic_sum_bounds,
    lambda_potential,
    normalize,
    restrict_potential,
    variation_factor,
)
from .pressure import (
    ExhaustionLevel,
    PressureEstimate,
    exhaustion_pressures,
    pressure_base,
    pressure_extension,
    z_n,
)
from .scenarios import (
    Scenario,
    Task,
    VERBS,
    bundled_scenarios,
    load_scenario,
    validate_scenario,
)
from .seqfit import GrowthFit, fit_growth, log_of_big
from .shifts import MixingReport, Shift, Word
from .spectral import (
    NormAudit,
    NormAuditRow,
    OperatorNormEstimate,
    SpectralRadiusEstimate,
    average_project,
    embed_constant,
    operator_norm_audit,
    radial_walk_rank,
    spectral_radius,
    tn_norm,
    transfer_apply,
)
from .symmetry import (
    AlphaCertificate,
    CorollaryReport,
    InequalityCheck,
    alpha_estimate,
    compact_alpha,
    corollary_check,
    window_schedule,
)
from .tasks import TaskResult, format_element, run_task
from .transfer import (
    LeadingEig,
    TransferSystem,
    Transition,
    build_transfer,
    leading_eigenpair,
    symmetric_top_eigenvalue,
)

__version__ = "0.1.0"
