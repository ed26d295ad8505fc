import math

import pytest

from qiopa.core import Configuration, DetectorArm, DetectorSettings, OpaParams

# nbar = sinh(g)^2 = 1
UNIT_GAIN = math.asinh(1.0)

@pytest.fixture
def unit_params():
    return OpaParams(UNIT_GAIN, 0.0)

@pytest.fixture
def small_params():
    # Gamma ~ 0.197, so the oracle cutoff stays at 8
    return OpaParams(0.2, 0.0)

@pytest.fixture
def cat_params():
    return OpaParams(2.5, 0.0)

@pytest.fixture
def zero_settings():
    return DetectorSettings.zero()

@pytest.fixture
def mixed_settings():
    return DetectorSettings(DetectorArm(0.3, 0.7, 0.2), DetectorArm(-0.4, 0.1, 0.9))

@pytest.fixture(params=list(Configuration), ids=lambda c: c.value)
def configuration(request):
    return request.param

@pytest.fixture
def scenario_file(tmp_path):
    path = tmp_path / "scenario.toml"
    path.write_text(
        'configuration = "degenerate"\n'
        "gain = 0.5\n"
        'phi = "90deg"\n'
        "\n"
        "[detectors.k1]\n"
        'rotator_angle = "30deg"\n'
        "psi_perp = 0.25\n"
        "\n"
        "[grid]\n"
        'preset = "cat"\n'
        "x_count = 11\n"
        "y_count = 11\n"
        "\n"
        "[oracle]\n"
        "tolerance = 1e-10\n"
    )
    return path
