"""Numerical toolkit for coherence and asymmetry as a resource.

Modules:
  linalg        validated matrix types, eigensolvers, fidelity, JSON I/O
  measures      QFI, purity of coherence, skew information, Renyi family
  purification  variance-optimal purifications and convex-roof ensembles
  clockdist     integer clock distributions and translated-Poisson limits
  convert       iid pure-state conversion planning and coherence cost
  channels      Kraus channels, twirling, covariance, monotonicity trials
  distill       distillation diagnostics and the min-entropy SDP
  acceptance    the numbered acceptance suite
"""

from .config import DEFAULT, Tolerances
from .errors import (
    AlphaOutOfRangeError,
    CoherenceForgeError,
    DimMismatchError,
    EpsOutOfRangeError,
    GcdNotOneError,
    IncommensurateSpectrumError,
    NonHermitianError,
    PeriodMismatchError,
    PureInputError,
    SchemaError,
    SearchExhaustedError,
    SolverStallError,
    ValidationError,
    ZeroEnergySpreadError,
    ZeroNuError,
    ZeroTargetQFIError,
    ZeroTargetVarianceError,
    ZeroVarianceError,
)
from .linalg import (
    DensityMatrix,
    HermitianObservable,
    PureState,
    array_from_json,
    array_to_json,
    dephase,
    density_matrix,
    eig_hermitian,
    fidelity,
    noninteracting_hamiltonian,
    observable,
    partial_trace,
    pure_state,
    tensor,
    trace_distance,
)
from .measures import (
    MeasureValue,
    cor_var_ceiling,
    energy_variance,
    near_pure_bound,
    purity_of_coherence,
    q2_divergence,
    qfi,
    qfi_via_fidelity,
    renyi_purity_monotone,
    skew_information,
    support_commutes,
)
from .purification import (
    Purification,
    PureEnsemble,
    aux_qfi,
    build_optimal_purification,
    canonical_purification,
    coherence_sectors,
    kkt_residual,
    optimal_aux_hamiltonian,
    optimal_ensemble,
    period_respecting_ensemble,
    transpose_purification_variance,
)
from .clockdist import (
    IntegerDistribution,
    PeriodicClockState,
    TranslatedPoisson,
    barbour_bound,
    barbour_terms,
    convolve_n,
    extract_distribution,
    integer_distribution,
    overlap_copy_count,
    poisson_distance_bound,
    shift,
    tp_distance,
    translated_poisson,
    tv_distance,
)
from .convert import (
    ConversionPlan,
    best_shift,
    coherence_cost,
    iid_sweep,
    intrinsic_period,
    max_rate,
    rate_feasibility,
    single_shot_bound,
)
from .channels import (
    KrausChannel,
    MonotonicityReport,
    TIChannel,
    apply,
    is_ti,
    kraus_channel,
    monotonicity_suite,
    random_channel,
    superoperator,
    twirl,
)
from .distill import (
    OmegaState,
    SdpResult,
    cirac_comparison,
    conditional_min_entropy,
    distillation_copy_floor,
    helper_bound,
    is_bound_resource,
    max_distill_fidelity,
    omega_state,
    qubit_infidelity_bound,
)

__version__ = "0.1.0"
