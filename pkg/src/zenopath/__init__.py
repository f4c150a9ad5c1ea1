"""Phase-space and stochastic-trajectory analysis of measurement-induced
Zeno dynamics in a driven qubit."""

from ._kernels import NUMBA_ENABLED
from .errors import (
    CurveSingularity,
    EpsilonTooLarge,
    IntegrandSingular,
    InvalidState,
    NormalizationUnderflow,
    NoZenoRegime,
    SingularEndpoint,
    StalledAtFixedPoint,
    StepTooLarge,
    UnsupportedLambda,
    WeakCouplingWarning,
    ZenoPathError,
)
from .measurement import (
    BlochState,
    DensityMatrix,
    KrausPair,
    MeasurementParams,
    bloch_from_density,
    density_from_bloch,
    drift_rhs,
    kraus_pair,
    mc_zeno_trajectory,
    postselected_step,
    unitary_step,
)
from .phase import (
    CriticalPointSet,
    PhaseParams,
    PhasePath,
    PhasePoint,
    cdj_hamiltonian,
    critical_points,
    energy_level,
    hamilton_jacobian,
    hamilton_rhs,
    integrate_phase_path,
    p_theta_curve,
    separatrix_energies,
    stability_exponents,
    wrap_angle,
)
from .action import (
    TransitionTimes,
    action_closed_form,
    action_discontinuity,
    action_quadrature,
    final_state_density,
    transition_time_sub_zeno,
    zeno_frequencies,
)
from .diffusive import (
    DiffusiveParams,
    DiffusiveTrajectory,
    EnsembleStats,
    ExtendedState,
    MLPTrajectory,
    WienerStream,
    ensemble_stats,
    integrate_mlp,
    mlp_fixed_point,
    mlp_rhs,
    readout_constraint,
    sample_trajectory,
    sme_rhs,
    stochastic_hamiltonian,
)

__version__ = "0.1.0"
