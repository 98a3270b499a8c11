"""Quantifying Bell nonlocality as the volume of violating measurement settings.

The library builds Schmidt-diagonal state families (two qubits, qutrits,
ququarts, each optionally mixed with white noise), evaluates Bell functionals
(chsh and its three-direction ancestor, the 3322 inequality, and the
two-setting d-outcome phase inequalities for d = 3, 4) at individual settings
or vectorized sample batches, and estimates the normalized measure of the
violating settings region by reproducible parallel Monte Carlo. A multi-start
derivative-free optimizer recovers the conventional maximal-violation
quantifier for comparison.
"""

from .errors import (
    ArityError,
    AxisError,
    ConfigError,
    DimensionError,
    InvalidParameterError,
    MixedStateError,
    NormalizationError,
)
from .states import (
    BipartiteState,
    QubitCorrelationData,
    alpha_qubit,
    concurrence_two_qubit,
    density_matrix,
    entropy_of_entanglement,
    gamma_qutrit,
    lambda_ququart,
    make_state,
    qubit_correlation_data,
    schmidt_spectrum,
)
from .functionals import (
    BellEvaluation,
    BellFunctional,
    CHSH,
    BELL_ORIGINAL,
    CGLMP3,
    CGLMP4,
    I3322,
    DirectionSettings,
    PhaseSettings,
    SettingsPoint,
    batch_evaluator,
    bell_original_value,
    cglmp_joint_prob,
    cglmp_value,
    chsh_value,
    correlation,
    evaluate,
    functional_from_name,
    i3322_value,
    local_bound,
)
from .sampling import (
    SampleStream,
    SettingsSpace,
    sample_batch,
    sample_range,
    sample_settings,
    space_for,
    space_volume,
    spheres,
    torus,
)
from .volume import (
    VolumeEstimate,
    calibrate_estimator,
    estimate_volume,
    estimate_volume_target_stderr,
    relative_normalize,
    wilson_interval,
)
from .optimize import (
    MaxResult,
    OptimizerConfig,
    horodecki_chsh_max,
    maximize_bell,
)
from .experiments import (
    SectionGrid,
    SweepRow,
    argmax_row,
    noise_sweep,
    optimal_cglmp_phases,
    phase_axis_index,
    section_2d,
    section_fixed_point,
    survey_region,
    sweep_family,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
