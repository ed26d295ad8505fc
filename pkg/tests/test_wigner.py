import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qiopa.core import (
    Configuration,
    GridSizeError,
    InvalidConfigurationError,
    InvalidParameterError,
    OpaParams,
    PhasePoint,
    QuadratureOrderError,
    cat_criteria,
    characteristic_function,
    marginal_wigner,
    oracle_output_state,
    squeezed_coords,
    wigner_by_displacement,
    wigner_closed_form,
    wigner_grid,
    wigner_normalization,
)
from qiopa.core.wigner import (
    AXES,
    PEAK,
    GridSpec,
    convention_constant,
    envelope_normalization,
    preset_spec,
    hermgauss_nodes,
    marginal_quadrature,
    marginal_value,
    point_from_coords,
    wigner_from_characteristic,
    wigner_minimum,
    wigner_printed,
)

def _point(configuration, values):
    if configuration is Configuration.NONDEGENERATE:
        return PhasePoint(configuration, values[:2], values[2:])
    return PhasePoint(configuration, values[:1], values[1:2])

# PhasePoint
## validation
def test_point_wrong_size():
    with pytest.raises(InvalidParameterError, match="A degenerate point needs 1 alpha and 1 beta values"):
        PhasePoint(Configuration.DEGENERATE, (0j, 0j), (0j,))

def test_point_not_finite():
    with pytest.raises(InvalidParameterError, match="Phase-space components must be finite"):
        PhasePoint(Configuration.NONDEGENERATE, (0j, complex(math.inf, 0)), (0j, 0j))

## correctness
def test_point_mode_order():
    point = PhasePoint(Configuration.NONDEGENERATE, (1, 2), (3, 4))
    assert point.mode_amplitudes() == (1, 3, 4, 2)

# squeezed_coords / point_from_coords
## correctness
def test_squeezed_coords_origin(configuration):
    coords = squeezed_coords(OpaParams(1.0), PhasePoint.origin(configuration))
    assert all(value == 0 for value in coords)

def test_squeezed_coords_scaling():
    params = OpaParams(0.5)
    point = PhasePoint(Configuration.NONDEGENERATE, (0.3, 0.1), (0j, 0j))
    coords = squeezed_coords(params, point)
    assert coords.gamma_a_plus == pytest.approx(0.4 * math.exp(-0.5))
    assert coords.gamma_a_minus == pytest.approx(0.2j * math.exp(0.5))

def test_point_from_coords_inverts(configuration):
    params = OpaParams(0.7)
    x = np.linspace(-0.8, 0.9, len(AXES[configuration]))
    point = point_from_coords(params, configuration, x)
    assert np.allclose(squeezed_coords(params, point).real_coordinates(configuration), x)

def test_point_from_coords_wrong_length():
    with pytest.raises(InvalidParameterError, match="Expected 4 coordinates"):
        point_from_coords(OpaParams(0.7), Configuration.DEGENERATE, [0.0, 0.0])

# wigner_closed_form
## correctness
@settings(max_examples=20, deadline=None)
@given(
    st.floats(min_value=0.0, max_value=3.0, allow_nan=False),
    st.floats(min_value=-math.pi, max_value=math.pi, allow_nan=False),
)
def test_origin_value(gain, phase):
    params = OpaParams(gain, phase)
    assert wigner_closed_form(params, PhasePoint.origin(Configuration.NONDEGENERATE)).value == pytest.approx(-16.0 / math.pi ** 4)
    assert wigner_closed_form(params, PhasePoint.origin(Configuration.DEGENERATE)).value == pytest.approx(-4.0 / math.pi ** 2)

def test_value_decomposition(configuration):
    point = _point(configuration, [0.3 + 0.1j, -0.2j, 0.1, 0.4 - 0.2j])
    result = wigner_closed_form(OpaParams(0.4, 1.0), point)
    expected = -result.vacuum_envelope_a * result.vacuum_envelope_b * (1.0 - result.superposition_modulus_sq)
    assert result.value == pytest.approx(expected)

def test_convention_constant(configuration):
    assert convention_constant(configuration) == 1.0

def test_phase_shift_rotates_amplifier_a():
    rng = np.random.default_rng(7)
    for _ in range(20):
        coords = rng.normal(scale=0.8, size=8)
        phase, delta = rng.uniform(-math.pi, math.pi, size=2)
        gammas = coords[0::2] + 1j * coords[1::2]
        gammas[:2] *= np.exp(-1j * delta)
        rotated = np.column_stack([gammas.real, gammas.imag]).ravel()
        params = OpaParams(0.6, phase)
        shifted = OpaParams(0.6, phase + delta)
        expected = wigner_closed_form(params, point_from_coords(params, Configuration.NONDEGENERATE, coords)).value
        value = wigner_closed_form(shifted, point_from_coords(shifted, Configuration.NONDEGENERATE, rotated)).value
        assert value == pytest.approx(expected, rel=1e-9, abs=1e-12)

def test_matches_oracle_degenerate():
    params = OpaParams(0.4, math.pi / 3.0)
    register = oracle_output_state(params, Configuration.DEGENERATE)
    for alpha, beta in ((0j, 0j), (0.3 + 0.1j, -0.2j), (-0.5, 0.2 + 0.4j)):
        point = PhasePoint(Configuration.DEGENERATE, (alpha,), (beta,))
        expected = wigner_by_displacement(register, point.mode_amplitudes())
        assert wigner_closed_form(params, point).value == pytest.approx(expected, abs=1e-8)

def test_matches_oracle_nondegenerate():
    params = OpaParams(0.2, math.pi / 2.0)
    register = oracle_output_state(params, Configuration.NONDEGENERATE)
    point = PhasePoint(Configuration.NONDEGENERATE, (0.2 + 0.1j, -0.1), (0.1j, 0.15 - 0.05j))
    expected = wigner_by_displacement(register, point.mode_amplitudes(), margin=12)
    assert wigner_closed_form(params, point).value == pytest.approx(expected, abs=1e-8)

# wigner_printed
## correctness
def test_printed_nondegenerate_agrees():
    params = OpaParams(0.8, 0.3)
    point = _point(Configuration.NONDEGENERATE, [0.3 + 0.1j, -0.2j, 0.1, 0.4 - 0.2j])
    assert wigner_printed(params, point).value == pytest.approx(wigner_closed_form(params, point).value)

def test_printed_degenerate_origin_only():
    params = OpaParams(0.8, 0.3)
    origin = PhasePoint.origin(Configuration.DEGENERATE)
    away = PhasePoint(Configuration.DEGENERATE, (0.4 + 0.2j,), (0.1,))
    assert wigner_printed(params, origin).value == pytest.approx(wigner_closed_form(params, origin).value)
    assert wigner_printed(params, away).value != pytest.approx(wigner_closed_form(params, away).value)

# characteristic_function
## validation
def test_characteristic_wrong_count():
    with pytest.raises(InvalidParameterError, match="characteristic function takes 2 eta and 2 xi"):
        characteristic_function(OpaParams(0.5), Configuration.NONDEGENERATE, (0j,), (0j,))

## correctness
def test_characteristic_at_zero(configuration):
    size = 2 if configuration is Configuration.NONDEGENERATE else 1
    assert characteristic_function(OpaParams(1.2, 0.4), configuration, (0j,) * size, (0j,) * size) == pytest.approx(1.0)

def test_characteristic_hermitian(configuration):
    size = 2 if configuration is Configuration.NONDEGENERATE else 1
    params = OpaParams(0.6, 0.9)
    etas = (0.3 + 0.2j, -0.1j)[:size]
    xis = (0.1, 0.2 - 0.3j)[:size]
    forward = characteristic_function(params, configuration, etas, xis)
    backward = characteristic_function(params, configuration, tuple(-v for v in etas), tuple(-v for v in xis))
    assert forward == pytest.approx(np.conj(backward))

def test_characteristic_arrays():
    etas = np.array([0j, 0.5])
    values = characteristic_function(OpaParams(0.3), Configuration.DEGENERATE, (etas,), (np.zeros(2),))
    assert values.shape == (2,)
    assert values[0] == pytest.approx(1.0)

# wigner_from_characteristic
## validation
def test_transform_nondegenerate():
    with pytest.raises(InvalidConfigurationError, match="only tractable for the degenerate layout"):
        wigner_from_characteristic(OpaParams(0.3), PhasePoint.origin(Configuration.NONDEGENERATE))

def test_transform_bad_step():
    with pytest.raises(InvalidParameterError, match="step and extent must be positive"):
        wigner_from_characteristic(OpaParams(0.3), PhasePoint.origin(Configuration.DEGENERATE), step=0.0)

## correctness
def test_transform_matches_closed_form():
    params = OpaParams(0.3, 0.5)
    for point in (PhasePoint.origin(Configuration.DEGENERATE), PhasePoint(Configuration.DEGENERATE, (0.2 + 0.1j,), (-0.1 + 0.3j,))):
        expected = wigner_closed_form(params, point).value
        assert wigner_from_characteristic(params, point) == pytest.approx(expected, rel=1e-3, abs=1e-5)

# wigner_normalization
## validation
def test_normalization_low_order():
    with pytest.raises(QuadratureOrderError, match="Quadrature order 2 is below 3"):
        wigner_normalization(OpaParams(0.5), Configuration.DEGENERATE, order=2)

def test_nodes_integer_order():
    with pytest.raises(QuadratureOrderError, match="must be an integer"):
        hermgauss_nodes(4.5, 2)

## correctness
@pytest.mark.parametrize("gain", [0.0, 0.5, 1.5, 2.5])
@pytest.mark.parametrize("phase", [0.0, math.pi / 2.0, math.pi])
def test_normalization(configuration, gain, phase):
    assert wigner_normalization(OpaParams(gain, phase), configuration) == pytest.approx(1.0, abs=1e-10)

def test_normalization_order_independent():
    params = OpaParams(1.0, 0.7)
    assert wigner_normalization(params, Configuration.DEGENERATE, order=3) == pytest.approx(
        wigner_normalization(params, Configuration.DEGENERATE, order=8), abs=1e-12
    )

def test_envelope_normalization(configuration):
    assert envelope_normalization(OpaParams(1.3), configuration) == pytest.approx(1.0, abs=1e-10)

# marginal_value / marginal_quadrature
## validation
def test_marginal_unknown_axis():
    with pytest.raises(InvalidParameterError, match="Unknown axis 're_gamma_b_plus' for the degenerate layout"):
        marginal_value(OpaParams(0.5), Configuration.DEGENERATE, {"re_gamma_b_plus": 0.0})

## correctness
def test_marginal_without_kept_axes(configuration):
    assert marginal_value(OpaParams(1.1, 0.4), configuration, {}) == pytest.approx(1.0)

def test_marginal_matches_quadrature(configuration):
    params = OpaParams(0.9, 2.0)
    kept = {"re_gamma_a_plus": 0.4, "im_gamma_a_minus": -0.3}
    assert marginal_value(params, configuration, kept) == pytest.approx(marginal_quadrature(params, configuration, kept), rel=1e-10)

def test_marginal_all_axes_kept():
    params = OpaParams(0.9, 2.0)
    kept = dict(zip(AXES[Configuration.DEGENERATE], (0.1, -0.2, 0.3, 0.0)))
    assert marginal_quadrature(params, Configuration.DEGENERATE, kept) == pytest.approx(
        marginal_value(params, Configuration.DEGENERATE, kept), rel=1e-10
    )

# GridSpec
## validation
def test_grid_too_large():
    with pytest.raises(GridSizeError, match="above the cap"):
        GridSpec(Configuration.DEGENERATE, "re_gamma_a_plus", "im_gamma_a_minus", x_count=1001, y_count=1001)

def test_grid_pinned_marginal():
    with pytest.raises(InvalidParameterError, match="Pinned values only apply to the slice mode"):
        GridSpec(Configuration.DEGENERATE, "re_gamma_a_plus", "im_gamma_a_minus", mode="marginal", fixed={"im_gamma_a_plus": 0.1})

def test_grid_pinned_swept_axis():
    with pytest.raises(InvalidParameterError, match="The swept axes cannot be pinned"):
        GridSpec(Configuration.DEGENERATE, "re_gamma_a_plus", "im_gamma_a_minus", fixed={"re_gamma_a_plus": 0.1})

def test_grid_bad_range():
    with pytest.raises(InvalidParameterError, match="The x range must be finite and increasing"):
        GridSpec(Configuration.DEGENERATE, "re_gamma_a_plus", "im_gamma_a_minus", x_range=(1.0, -1.0))

def test_grid_repeated_axis():
    with pytest.raises(InvalidParameterError, match="Axes must not repeat"):
        GridSpec(Configuration.DEGENERATE, "re_gamma_a_plus", "re_gamma_a_plus")

# wigner_grid
## correctness
def test_slice_grid_minimum(configuration):
    spec = preset_spec(configuration, mode="slice", count=21)
    grid = wigner_grid(OpaParams(2.5, math.pi / 2.0), spec)
    value, x, y = grid.min_sample()
    assert value == pytest.approx(-PEAK[configuration])
    assert (x, y) == pytest.approx((0.0, 0.0), abs=1e-12)

def test_slice_grid_opposite_phase(configuration):
    spec = preset_spec(configuration, mode="slice", count=21)
    in_phase = wigner_grid(OpaParams(1.0, 0.0), spec).values
    opposite = wigner_grid(OpaParams(1.0, math.pi), spec).values
    # Phi = pi negates Delta_A: a mirror in gamma_a_plus, or an axis swap when Delta_B is tied to A
    mirrored = in_phase[:, ::-1] if configuration is Configuration.NONDEGENERATE else in_phase.T
    assert np.allclose(opposite, mirrored, rtol=1e-9, atol=1e-12)
    assert not np.allclose(opposite, in_phase, rtol=1e-6, atol=1e-9)

def test_slice_grid_traversal():
    spec = GridSpec(Configuration.DEGENERATE, "re_gamma_a_plus", "im_gamma_a_minus", (-1.0, 1.0), (0.0, 1.0), 3, 2)
    grid = wigner_grid(OpaParams(0.5), spec)
    coordinates = [(x, y) for x, y, _ in grid.samples()]
    assert coordinates == [(-1.0, 0.0), (0.0, 0.0), (1.0, 0.0), (-1.0, 1.0), (0.0, 1.0), (1.0, 1.0)]
    assert grid.values.shape == (2, 3)

def test_slice_grid_fixed_axis():
    params = OpaParams(0.5, 0.2)
    spec = GridSpec(Configuration.DEGENERATE, "re_gamma_a_plus", "im_gamma_a_minus", (-1.0, 1.0), (-1.0, 1.0), 3, 3, fixed={"im_gamma_a_plus": 0.5})
    grid = wigner_grid(params, spec)
    point = point_from_coords(params, Configuration.DEGENERATE, [1.0, 0.5, 0.0, -1.0])
    assert grid.values[0, 2] == pytest.approx(wigner_closed_form(params, point).value)

def test_marginal_grid_integrates_to_one(configuration):
    spec = preset_spec(configuration, mode="marginal", extent=6.0, count=121)
    grid = wigner_grid(OpaParams(2.5, 0.0), spec)
    step = 12.0 / 120
    assert np.sum(grid.values) * step ** 2 == pytest.approx(1.0, rel=1e-6)

def test_marginal_grid_matches_value():
    params = OpaParams(1.0, 1.0)
    grid = marginal_wigner(
        params, Configuration.NONDEGENERATE,
        ["re_gamma_a_plus", "re_gamma_b_plus"],
        ["im_gamma_a_plus", "re_gamma_a_minus", "im_gamma_a_minus", "im_gamma_b_plus", "re_gamma_b_minus", "im_gamma_b_minus"],
        (-1.0, 1.0), (-1.0, 1.0), 5, 5,
    )
    expected = marginal_value(params, Configuration.NONDEGENERATE, {"re_gamma_a_plus": 0.5, "re_gamma_b_plus": -1.0})
    assert grid.values[0, 3] == pytest.approx(expected)

def test_marginal_wigner_partition():
    with pytest.raises(InvalidParameterError, match="must cover every phase-space axis"):
        marginal_wigner(OpaParams(1.0), Configuration.DEGENERATE, ["re_gamma_a_plus", "im_gamma_a_plus"], ["re_gamma_a_minus"])

def test_marginal_wigner_three_axes():
    with pytest.raises(InvalidParameterError, match="keeps exactly two axes"):
        marginal_wigner(
            OpaParams(1.0), Configuration.DEGENERATE,
            ["re_gamma_a_plus", "im_gamma_a_plus", "re_gamma_a_minus"], ["im_gamma_a_minus"],
        )

# wigner_minimum
## correctness
@pytest.mark.parametrize("gain", [0.0, 2.5])
@pytest.mark.parametrize("phase", [0.0, math.pi / 2.0, math.pi])
def test_minimum_at_origin(configuration, gain, phase):
    report = wigner_minimum(OpaParams(gain, phase), configuration)
    assert report.value == pytest.approx(-PEAK[configuration], abs=1e-8)
    assert np.allclose(report.coordinates, 0.0, atol=1e-4)

# cat_criteria
## correctness
def test_cat_nondegenerate(cat_params):
    report = cat_criteria(cat_params, Configuration.NONDEGENERATE)
    assert report.fringe_capable
    assert report.negative
    assert report.separation_ratio == pytest.approx(1.193, abs=1e-3)
    assert report.resolvable
    assert not report.microscopic

def test_cat_degenerate(cat_params):
    report = cat_criteria(cat_params, Configuration.DEGENERATE)
    assert report.separation_ratio == pytest.approx(2.386, abs=1e-3)
    assert report.resolvable

def test_cat_degenerate_opposite_phase(cat_params):
    report = cat_criteria(cat_params.with_phase(math.pi), Configuration.DEGENERATE)
    assert report.separation_ratio == pytest.approx(0.016, abs=1e-3)
    assert not report.resolvable

def test_cat_microscopic():
    report = cat_criteria(OpaParams(0.0), Configuration.NONDEGENERATE)
    assert report.microscopic
    assert report.separation_ratio == pytest.approx(0.849, abs=1e-3)
    assert not report.resolvable

def test_cat_axes_count(cat_params):
    with pytest.raises(InvalidParameterError, match="The lobe separation needs exactly two axes"):
        cat_criteria(cat_params, Configuration.DEGENERATE, ("re_gamma_a_plus",))
