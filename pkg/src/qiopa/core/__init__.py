from .errors import (
    CutoffError,
    GridSizeError,
    InvalidConfigurationError,
    InvalidParameterError,
    QuadratureOrderError,
    ScenarioError,
)
from .params import Configuration, OpaParams, ThermalDistribution, derive_params, gain_for_mean_photons, thermal_weights
from .states import (
    ModeLabel,
    NoncollinearVariant,
    OutputState,
    apply_pbs_swap,
    build_output_state,
    build_output_state_degenerate,
    build_output_state_noncollinear,
    build_output_state_nondegenerate,
)
from .oracle import (
    FockRegister,
    ModeOperator,
    OperatorKind,
    cutoff_for_gain,
    expectation,
    make_register,
    oracle_output_state,
    squeeze_propagator,
    wigner_by_displacement,
)
from .wigner import (
    CatReport,
    GridSpec,
    PhaseGrid,
    PhasePoint,
    SqueezedCoords,
    WignerValue,
    cat_criteria,
    characteristic_function,
    marginal_wigner,
    squeezed_coords,
    wigner_closed_form,
    wigner_grid,
    wigner_normalization,
)
from .correlations import (
    CorrelationReport,
    DetectorArm,
    DetectorSettings,
    Provenance,
    cauchy_schwarz_test,
    correlation_report,
    fringe_difference,
    g1_degenerate,
    g1_nondegenerate,
    g2_degenerate,
    g2_nondegenerate,
    oracle_correlations,
    signal_to_noise,
    visibility,
)
