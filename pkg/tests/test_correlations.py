import math

import pytest
from hypothesis import given, strategies as st

from qiopa.core import (
    Configuration,
    DetectorArm,
    DetectorSettings,
    InvalidConfigurationError,
    InvalidParameterError,
    OpaParams,
    Provenance,
    cauchy_schwarz_test,
    correlation_report,
    fringe_difference,
    g1_degenerate,
)
from qiopa.core.correlations import (
    g1_nondegenerate,
    g2_degenerate,
    g2_nondegenerate,
    oracle_correlations,
    phase_combos,
    signal_to_noise,
    visibility,
)
from qiopa.core.oracle import cutoff_for_gain
from qiopa.core.params import gain_for_mean_photons

def _params(nbar, phase=0.0):
    return OpaParams(gain_for_mean_photons(nbar), phase)

# DetectorArm
## validation
def test_arm_not_finite():
    with pytest.raises(InvalidParameterError, match="The rotator_angle must be a finite real number"):
        DetectorArm(math.nan)

def test_arm_not_number():
    with pytest.raises(InvalidParameterError, match="The psi_par must be a finite real number"):
        DetectorArm(0.0, 0.0, "0")

## correctness
@given(
    st.floats(min_value=-10.0, max_value=10.0, allow_nan=False),
    st.floats(min_value=-10.0, max_value=10.0, allow_nan=False),
    st.floats(min_value=-10.0, max_value=10.0, allow_nan=False),
)
def test_arm_coefficients_unit(rotator, psi_perp, psi_par):
    xi_minus, xi_plus = DetectorArm(rotator, psi_perp, psi_par).coefficients()
    assert abs(xi_minus) ** 2 + abs(xi_plus) ** 2 == pytest.approx(1.0)

def test_arm_coefficients_at_zero():
    xi_minus, xi_plus = DetectorArm().coefficients()
    assert xi_minus == pytest.approx(1.0 / math.sqrt(2.0))
    assert xi_plus == pytest.approx(1.0 / math.sqrt(2.0))

def test_arm_shift_and_conjugate():
    arm = DetectorArm.with_shift(0.3, 0.8)
    assert arm.birefringent_shift == pytest.approx(0.8)
    assert arm.conjugate().rotator_angle == pytest.approx(0.3 + math.pi / 2.0)
    assert arm.conjugate().birefringent_shift == pytest.approx(0.8)

# DetectorSettings
## validation
def test_settings_wrong_arm():
    with pytest.raises(InvalidParameterError, match="The arms must be DetectorArm instances"):
        DetectorSettings("arm")

def test_settings_mode_out_of_range(zero_settings):
    with pytest.raises(InvalidParameterError, match="The detected mode must be 1 or 2, got 3"):
        zero_settings.arm(3)

## correctness
def test_settings_fields(mixed_settings):
    assert set(mixed_settings.field(Configuration.NONDEGENERATE, 1)) == {0, 1}
    assert set(mixed_settings.field(Configuration.NONDEGENERATE, 2)) == {3, 2}
    degenerate = mixed_settings.field(Configuration.DEGENERATE, 2)
    assert degenerate[0] == pytest.approx(mixed_settings.arm_1.conjugate().coefficients()[0])

def test_phase_combos(mixed_settings):
    combos = phase_combos(OpaParams(0.5, 1.0), mixed_settings)
    assert combos.delta_minus == pytest.approx((0.5, 1.8))
    assert combos.delta_plus == pytest.approx((1.5, 0.2))
    assert combos.dphi_minus == pytest.approx(0.7)
    assert combos.dphi_plus == pytest.approx(-0.1)
    assert combos.delta_psi == pytest.approx(-0.3)
    assert combos.delta_phi_degenerate == pytest.approx(-0.5)

# Provenance
## validation
def test_oracle_not_closed_form():
    with pytest.raises(InvalidParameterError, match="The oracle is not a closed form"):
        g1_degenerate(OpaParams(0.5), DetectorSettings.zero(), form="oracle")

# g1 / g2 non-degenerate
## validation
def test_g2_bad_pair(unit_params, zero_settings):
    with pytest.raises(InvalidParameterError, match="The detector pair must be"):
        g2_nondegenerate(unit_params, zero_settings, (2, 3))

def test_g1_bad_mode(unit_params, zero_settings):
    with pytest.raises(InvalidParameterError, match="The detected mode must be 1 or 2"):
        g1_nondegenerate(unit_params, zero_settings, 0)

## correctness
def test_nondegenerate_unit_photons(unit_params, zero_settings):
    assert g1_nondegenerate(unit_params, zero_settings, 1) == pytest.approx(3.0)
    assert g1_nondegenerate(unit_params, zero_settings, 2) == pytest.approx(2.0)
    assert g2_nondegenerate(unit_params, zero_settings, (1, 1)) == pytest.approx(10.0)
    assert g2_nondegenerate(unit_params, zero_settings, (2, 2)) == pytest.approx(6.0)
    assert g2_nondegenerate(unit_params, zero_settings, (1, 2)) == pytest.approx(11.5)
    assert g2_nondegenerate(unit_params, zero_settings, (2, 1), Provenance.CORRECTED) == pytest.approx(10.0)

@pytest.mark.parametrize("nbar", [0.5, 1.0, 5.0, 20.0])
def test_nondegenerate_zero_phase_forms(nbar, zero_settings):
    params = _params(nbar)
    assert g1_nondegenerate(params, zero_settings, 1) == pytest.approx(2.0 * nbar + 1.0)
    assert g1_nondegenerate(params, zero_settings, 2) == pytest.approx(2.0 * nbar)
    assert g2_nondegenerate(params, zero_settings, (1, 2)) == pytest.approx(7.0 * nbar ** 2 + 4.5 * nbar)
    assert g2_nondegenerate(params, zero_settings, (1, 2), "corrected") == pytest.approx(6.0 * nbar ** 2 + 4.0 * nbar)

def test_printed_and_corrected_psi_sign(unit_params):
    settings = DetectorSettings(DetectorArm(), DetectorArm.with_shift(0.0, math.pi / 3.0))
    params = unit_params.with_phase(math.pi / 3.0)
    # Phi + Psi_2 = 2 pi / 3 printed, Phi - Psi_2 = 0 corrected
    assert g1_nondegenerate(params, settings, 2, Provenance.PRINTED) == pytest.approx(1.0 + 0.5 * 0.5)
    assert g1_nondegenerate(params, settings, 2, Provenance.CORRECTED) == pytest.approx(2.0)

# g1 / g2 degenerate
## correctness
def test_degenerate_unit_photons(unit_params, zero_settings):
    assert g1_degenerate(unit_params, zero_settings) == pytest.approx(4.0)
    assert g1_degenerate(unit_params, zero_settings, conjugate=True) == pytest.approx(1.0)
    assert g2_degenerate(unit_params, zero_settings) == pytest.approx(24.0)
    assert g2_degenerate(unit_params, zero_settings, crossed=True) == pytest.approx(4.0)
    assert g2_degenerate(unit_params, zero_settings, conjugate=True) == pytest.approx(4.0)

@pytest.mark.parametrize("conjugate", [False, True])
def test_degenerate_forms_coincide(unit_params, mixed_settings, conjugate):
    params = unit_params.with_phase(0.4)
    assert g1_degenerate(params, mixed_settings, Provenance.PRINTED, conjugate) == g1_degenerate(params, mixed_settings, Provenance.CORRECTED, conjugate)
    for crossed in (False, True):
        printed = g2_degenerate(params, mixed_settings, crossed, Provenance.PRINTED, conjugate)
        assert printed == g2_degenerate(params, mixed_settings, crossed, Provenance.CORRECTED, conjugate)

def test_degenerate_oracle_form(unit_params, zero_settings):
    with pytest.raises(InvalidParameterError, match="The oracle is not a closed form"):
        g1_degenerate(unit_params, zero_settings, Provenance.ORACLE)
    with pytest.raises(InvalidParameterError, match="The oracle is not a closed form"):
        g2_degenerate(unit_params, zero_settings, form="oracle")

# closed forms over random settings
## correctness
_angles = st.floats(min_value=-math.pi, max_value=math.pi, allow_nan=False)
_settings = st.builds(
    DetectorSettings,
    st.builds(DetectorArm, _angles, _angles, _angles),
    st.builds(DetectorArm, _angles, _angles, _angles),
)

@given(
    st.floats(min_value=0.0, max_value=1.5, allow_nan=False),
    _angles,
    _settings,
    st.sampled_from(list(Configuration)),
)
def test_correlations_non_negative(gain, phase, settings, configuration):
    params = OpaParams(gain, phase)
    corrected = correlation_report(params, configuration, settings, Provenance.CORRECTED)
    printed = correlation_report(params, configuration, settings, Provenance.PRINTED)
    assert all(value >= -1e-9 for value in corrected.g1.values())
    assert all(value >= -1e-9 for value in corrected.g2.values())
    assert all(value >= -1e-9 for value in printed.g1.values())

def _shifted(arm, rotator=0.0, psi_perp=0.0, psi_par=0.0):
    return DetectorArm(arm.rotator_angle + rotator, arm.psi_perp + psi_perp, arm.psi_par + psi_par)

@given(
    st.floats(min_value=0.0, max_value=1.5, allow_nan=False),
    _angles,
    _settings,
    st.sampled_from(list(Configuration)),
    st.sampled_from([Provenance.PRINTED, Provenance.CORRECTED]),
)
def test_correlations_two_pi_periodic(gain, phase, settings, configuration, form):
    params = OpaParams(gain, phase)
    base = correlation_report(params, configuration, settings, form)
    turn = 2.0 * math.pi
    variants = [
        (params.with_phase(phase + turn), settings),
        (params, DetectorSettings(_shifted(settings.arm_1, rotator=turn), settings.arm_2)),
        (params, DetectorSettings(settings.arm_1, _shifted(settings.arm_2, rotator=-turn))),
        (params, DetectorSettings(_shifted(settings.arm_1, psi_perp=turn), _shifted(settings.arm_2, psi_par=turn))),
    ]
    for shifted_params, shifted_settings in variants:
        report = correlation_report(shifted_params, configuration, shifted_settings, form)
        for key, value in base.g1.items():
            assert report.g1[key] == pytest.approx(value, rel=1e-9, abs=1e-9)
        for key, value in base.g2.items():
            assert report.g2[key] == pytest.approx(value, rel=1e-9, abs=1e-9)

# visibility / signal_to_noise
## correctness
@pytest.mark.parametrize("nbar", [0.5, 1.0, 10.0])
def test_visibility(nbar):
    params = _params(nbar)
    assert visibility(params, Configuration.NONDEGENERATE, 1) == pytest.approx((nbar + 1.0) / (3.0 * nbar + 1.0))
    assert visibility(params, Configuration.NONDEGENERATE, 2) == pytest.approx(1.0 / 3.0)
    assert visibility(params, Configuration.DEGENERATE) == pytest.approx((2.0 * nbar + 1.0) / (4.0 * nbar + 1.0))

def test_visibility_large_gain_limit():
    params = _params(1e6)
    assert visibility(params, Configuration.DEGENERATE) == pytest.approx(0.5, rel=1e-5)
    assert visibility(params, Configuration.NONDEGENERATE, 1) == pytest.approx(1.0 / 3.0, rel=1e-5)

def test_visibility_zero_gain():
    params = OpaParams(0.0)
    assert visibility(params, Configuration.NONDEGENERATE, 2) is None
    assert visibility(params, Configuration.NONDEGENERATE, 1) == pytest.approx(1.0)
    assert visibility(params, Configuration.DEGENERATE) == pytest.approx(1.0)

@pytest.mark.parametrize("nbar", [0.5, 2.0])
def test_signal_to_noise(nbar):
    params = _params(nbar, phase=1.0)
    assert signal_to_noise(params, Configuration.NONDEGENERATE, 2) == pytest.approx(2.0)
    assert signal_to_noise(params, Configuration.NONDEGENERATE, 1) == pytest.approx((2.0 * nbar + 1.0) / nbar)
    assert signal_to_noise(params, Configuration.DEGENERATE) == pytest.approx((3.0 * nbar + 1.0) / nbar)

def test_signal_to_noise_zero_gain():
    assert signal_to_noise(OpaParams(0.0), Configuration.DEGENERATE) is None

# fringe_difference
## correctness
def test_fringe_printed_sweep(unit_params):
    for rotator in (0.0, 0.4, math.pi / 4.0, 1.2):
        settings = DetectorSettings(DetectorArm(), DetectorArm(rotator))
        assert fringe_difference(unit_params, Configuration.NONDEGENERATE, settings) == pytest.approx(math.cos(2.0 * rotator))

def test_fringe_degenerate_forms(unit_params):
    settings = DetectorSettings(DetectorArm(0.2))
    printed = fringe_difference(unit_params, Configuration.DEGENERATE, settings)
    corrected = fringe_difference(unit_params, Configuration.DEGENERATE, settings, form=Provenance.CORRECTED)
    assert printed == pytest.approx(math.cos(0.4))
    assert corrected == pytest.approx(3.0 * math.cos(0.4))

def test_fringe_degenerate_matches_g1_difference(unit_params):
    settings = DetectorSettings(DetectorArm.with_shift(0.3, 0.7))
    params = unit_params.with_phase(0.2)
    difference = g1_degenerate(params, settings) - g1_degenerate(params, settings, conjugate=True)
    assert fringe_difference(params, Configuration.DEGENERATE, settings, form="corrected") == pytest.approx(difference)

# cauchy_schwarz_test
## correctness
def test_cauchy_schwarz_unit_photons(unit_params, zero_settings):
    printed = cauchy_schwarz_test(unit_params, zero_settings)
    assert printed.g11 == pytest.approx(10.0 / 9.0)
    assert printed.g22 == pytest.approx(1.5)
    assert printed.lhs == pytest.approx(3.6736, abs=1e-4)
    assert printed.rhs == pytest.approx(5.0 / 3.0)
    assert printed.violated
    corrected = cauchy_schwarz_test(unit_params, zero_settings, Provenance.CORRECTED)
    assert corrected.lhs == pytest.approx(25.0 / 9.0)
    assert corrected.violated

@pytest.mark.parametrize("nbar", [0.5, 1.0, 5.0, 20.0])
def test_cauchy_schwarz_violated(nbar, zero_settings):
    for form in (Provenance.PRINTED, Provenance.CORRECTED):
        assert cauchy_schwarz_test(_params(nbar), zero_settings, form).violated

def test_cauchy_schwarz_zero_gain(zero_settings):
    assert cauchy_schwarz_test(OpaParams(0.0), zero_settings) is None

# correlation_report
## correctness
def test_report_keys(unit_params, zero_settings, configuration):
    report = correlation_report(unit_params, configuration, zero_settings)
    assert set(report.g1) == {"1", "2"}
    assert set(report.g2) == {"11", "22", "12"}
    assert report.provenance is Provenance.PRINTED
    assert report.normalized_g2["11"] == pytest.approx(report.g2["11"] / report.g1["1"] ** 2)

def test_report_cauchy_schwarz(unit_params, zero_settings):
    report = correlation_report(unit_params, Configuration.NONDEGENERATE, zero_settings)
    assert report.cauchy_schwarz() == cauchy_schwarz_test(unit_params, zero_settings)

def test_report_cauchy_schwarz_degenerate(unit_params, zero_settings):
    report = correlation_report(unit_params, Configuration.DEGENERATE, zero_settings)
    with pytest.raises(InvalidConfigurationError, match="compares the k1 and k2 beams"):
        report.cauchy_schwarz()

def test_report_zero_gain(zero_settings):
    report = correlation_report(OpaParams(0.0), Configuration.NONDEGENERATE, zero_settings)
    assert report.normalized_g2["22"] is None
    assert report.visibility is None
    assert report.signal_to_noise is None

# oracle_correlations
## correctness
def _assert_matches(closed, oracle, rel=1e-6):
    for key, value in oracle.g1.items():
        assert closed.g1[key] == pytest.approx(value, rel=rel, abs=1e-9)
    for key, value in oracle.g2.items():
        assert closed.g2[key] == pytest.approx(value, rel=rel, abs=1e-9)
    assert closed.fringe_difference == pytest.approx(oracle.fringe_difference, rel=rel, abs=1e-9)

@pytest.mark.parametrize("phase", [0.0, math.pi / 3.0, math.pi])
def test_corrected_matches_oracle(configuration, mixed_settings, phase):
    params = OpaParams(0.5, phase)
    oracle = oracle_correlations(params, configuration, mixed_settings)
    assert oracle.provenance is Provenance.ORACLE
    _assert_matches(correlation_report(params, configuration, mixed_settings, Provenance.CORRECTED), oracle)

def test_printed_g2_12_deviates_from_oracle(zero_settings):
    params = OpaParams(0.5)
    oracle = oracle_correlations(params, Configuration.NONDEGENERATE, zero_settings)
    nbar = params.mean_photons
    assert oracle.g2["12"] == pytest.approx(6.0 * nbar ** 2 + 4.0 * nbar, rel=1e-6)
    printed = correlation_report(params, Configuration.NONDEGENERATE, zero_settings)
    assert printed.g2["12"] != pytest.approx(oracle.g2["12"], rel=1e-3)

def test_degenerate_printed_g2_matches_oracle(mixed_settings):
    params = OpaParams(0.5, 0.4)
    oracle = oracle_correlations(params, Configuration.DEGENERATE, mixed_settings)
    printed = correlation_report(params, Configuration.DEGENERATE, mixed_settings)
    for key, value in oracle.g2.items():
        assert printed.g2[key] == pytest.approx(value, rel=1e-6)

def test_vacuum_baseline(configuration, mixed_settings):
    params = OpaParams(0.5, 0.7)
    report = oracle_correlations(params, configuration, mixed_settings, injected=False)
    for value in report.g1.values():
        assert value == pytest.approx(params.mean_photons, rel=1e-7)

def test_oracle_tolerance_sizes_register(small_params, mixed_settings):
    loose = oracle_correlations(small_params, Configuration.DEGENERATE, mixed_settings, tolerance=1e-4)
    pinned = oracle_correlations(small_params, Configuration.DEGENERATE, mixed_settings, cutoff=cutoff_for_gain(0.2, 1e-4))
    tight = oracle_correlations(small_params, Configuration.DEGENERATE, mixed_settings)
    assert loose.g1 == pinned.g1
    assert loose.g2 == pinned.g2
    assert loose.g1["1"] != tight.g1["1"]

def test_cauchy_schwarz_oracle(zero_settings):
    params = _params(0.5)
    measured = oracle_correlations(params, Configuration.NONDEGENERATE, zero_settings).cauchy_schwarz()
    closed = cauchy_schwarz_test(params, zero_settings, Provenance.CORRECTED)
    assert measured.lhs == pytest.approx(closed.lhs, rel=1e-6)
    assert measured.rhs == pytest.approx(closed.rhs, rel=1e-6)
    assert measured.violated
