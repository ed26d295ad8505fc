from qiopa.core import Configuration, OpaParams, cat_criteria, wigner_grid
from qiopa.core.wigner import PRESET_GAIN, PRESET_PHASES, preset_spec

for configuration in Configuration:
    spec = preset_spec(configuration, count=81)
    for phase in PRESET_PHASES:
        params = OpaParams(PRESET_GAIN, phase)
        grid = wigner_grid(params, spec)
        value, x, y = grid.min_sample()
        cat = cat_criteria(params, configuration, (spec.x_axis, spec.y_axis))
        print(f"{configuration.value} Phi = {phase:.4f}")
        print(f"  marginal min = {value:.6g} at ({x:.3f}, {y:.3f})")
        print(f"  global min W = {cat.minimum_value:.6g}")
        print(f"  lobe separation / width = {cat.separation_ratio:.4f} (resolvable: {cat.resolvable})")
