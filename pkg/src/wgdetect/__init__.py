"""Number-resolving photon detection with atom arrays coupled to 1D waveguides.

A numpy/scipy library for the linearized scattering description of atomic
arrays in three geometries (mirror-terminated waveguide, infinite waveguide,
chiral coupling): drift/coupling model builders, frequency-domain scattering
and detection metrics, coherent-perfect-absorption tuning, reproducible
disorder ensembles with three dissipation-tuning strategies, and the
effective rates of the Raman-engineered decay channel.
"""

from .chiral import (
    ChiralEfficiency,
    ChiralRates,
    SingleAtomScattering,
    chain_transmission,
    chiral_efficiency,
    single_atom_scattering,
)
from .disorder import (
    DisorderSpec,
    EnsembleResult,
    RealizationRecord,
    ScalingFit,
    Tuning,
    build_drift,
    eigenvalue_scaling,
    ensemble_efficiency,
    sample_positions,
    strategy_characterized,
    strategy_ensemble_mean,
    strategy_fixed_amc,
)
from .levels import (
    DoubleLambdaParams,
    EffectiveRates,
    NonlinearityEstimate,
    ValidityReport,
    effective_rates,
    nonlinearity_estimate,
    validity_flags,
)
from .model import (
    K0,
    AtomArray,
    DriftModel,
    GeometryError,
    Rates,
    amc_positions,
    fluctuation_dissipation_residual,
    infinite_drift,
    infinite_lattice,
    mirror_drift,
    mirror_lattice,
    thermal_mirror_drift,
)
from .numerics import (
    EigenConvergenceError,
    SingularMatrixError,
    dawson,
    eigenvalues,
    linear_solve,
    min_singular_value,
)
from .scattering import (
    CpaTuning,
    DetectionMetrics,
    InsufficientDecayError,
    Mode,
    PoleError,
    ResponseCurve,
    ScatteringMatrix,
    amc_analytic_output,
    bandwidth,
    cpa_tuning,
    detection_metrics,
    inverse_smatrix,
    mode_spectrum,
    response_curve,
    smatrix,
)

__version__ = "0.1.0"
