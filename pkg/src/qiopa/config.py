"""
Scenario files: TOML documents holding every input of a run.

    configuration = "degenerate"
    gain = 2.5
    phi = "90deg"

    [detectors.k1]
    rotator_angle = "0deg"
    psi_perp = 0.0
    psi_par = 0.0

    [grid]
    preset = "cat"

    [sweep]
    variable = "rotator_2"
    start = 0.0
    stop = "180deg"
    count = 181

    [oracle]
    tolerance = 1e-10

Angles are radians unless suffixed with "rad" or "deg". Unknown keys are
rejected at every level.
"""
import logging
import math
import re
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

import numpy as np
import tomli

from .core.correlations import DetectorArm, DetectorSettings, Provenance
from .core.errors import InvalidParameterError, ScenarioError
from .core.params import Configuration, OpaParams
from .core.states import DEFAULT_TRUNCATION
from .core.wigner import GridSpec, preset_spec

logger = logging.getLogger(__name__)

_ANGLE = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(rad|deg)?\s*$")

TOP_LEVEL_KEYS = {"configuration", "gain", "phi", "detectors", "grid", "sweep", "oracle"}
DETECTOR_KEYS = {"rotator_angle", "psi_perp", "psi_par"}
GRID_KEYS = {"preset", "x_axis", "y_axis", "x_range", "y_range", "x_count", "y_count", "mode", "fixed", "max_samples"}
SWEEP_KEYS = {"variable", "start", "stop", "count", "form"}
ORACLE_KEYS = {"cutoff", "truncation", "tolerance"}

SWEEP_VARIABLES = ("rotator_1", "rotator_2", "psi_1", "psi_2", "phase", "gain")
GRID_PRESETS = ("cat",)
DEFAULT_GAIN = 0.5


def parse_angle(value: Union[str, float, int], name: str = "angle") -> float:
    """
    Parses an angle in radians; strings may carry a "rad" or "deg" suffix.

    Raises:
    - ScenarioError: if the value is not a finite angle
    """
    if isinstance(value, bool):
        raise ScenarioError(f"The {name} must be a number, got {value!r}")
    if isinstance(value, (int, float)):
        angle = float(value)
    elif isinstance(value, str):
        match = _ANGLE.match(value)
        if match is None:
            raise ScenarioError(f"Cannot parse the {name} {value!r}; use e.g. 1.57, '1.57rad' or '90deg'")
        angle = float(match.group(1))
        if match.group(2) == "deg":
            angle = math.radians(angle)
    else:
        raise ScenarioError(f"The {name} must be a number or a string, got {type(value).__name__}")
    if not math.isfinite(angle):
        raise ScenarioError(f"The {name} must be finite")
    return angle


def _reject_unknown(section: Mapping[str, Any], allowed: set, where: str) -> None:
    if not isinstance(section, Mapping):
        raise ScenarioError(f"{where} must be a table")
    unknown = sorted(set(section) - allowed)
    if unknown:
        raise ScenarioError(f"Unknown key(s) in {where}: {', '.join(unknown)}")


def _number(value: Any, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ScenarioError(f"The {name} must be a finite number, got {value!r}")
    return float(value)


def _integer(value: Any, name: str, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ScenarioError(f"The {name} must be an integer >= {minimum}, got {value!r}")
    return value


class SweepSpec:
    """A one-variable sweep over `count` evenly spaced values from start to stop."""
    def __init__(self, variable: str, start: float, stop: float, count: int = 181, form: str = "printed") -> None:
        if variable not in SWEEP_VARIABLES:
            raise ScenarioError(f"Unknown sweep variable {variable!r}; expected one of {', '.join(SWEEP_VARIABLES)}")
        if variable == "gain":
            start, stop = _number(start, "sweep start"), _number(stop, "sweep stop")
            if min(start, stop) < 0:
                raise ScenarioError("A gain sweep must stay non-negative")
        else:
            start, stop = parse_angle(start, "sweep start"), parse_angle(stop, "sweep stop")
        try:
            self.form = Provenance.closed_form(form)
        except ValueError as exc:
            raise ScenarioError(f"Invalid correlation form {form!r}: {exc}") from exc
        self.variable = variable
        self.start = start
        self.stop = stop
        self.count = _integer(count, "sweep count", 2)

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)

    def to_dict(self) -> dict:
        return {"variable": self.variable, "start": self.start, "stop": self.stop, "count": self.count, "form": self.form.value}


class OracleOptions:
    def __init__(self, cutoff: Optional[int] = None, truncation: int = DEFAULT_TRUNCATION, tolerance: float = 1e-10) -> None:
        self.cutoff = None if cutoff is None else _integer(cutoff, "oracle cutoff", 2)
        self.truncation = _integer(truncation, "truncation", 0)
        self.tolerance = _number(tolerance, "oracle tolerance")
        if not 0.0 < self.tolerance < 1.0:
            raise ScenarioError(f"The oracle tolerance must be in (0, 1), got {tolerance}")


class ScenarioConfig:
    """
    A fully validated run description.

    Attributes:
    - configuration (Configuration)
    - gain (float), phi (float): the amplifier parameters; the gain is
        DEFAULT_GAIN unless given
    - gain_given (bool): whether the file or an override set the gain
    - settings (DetectorSettings): the analysers on k1 and k2
    - grid (Optional[dict]): the raw [grid] block, resolved by grid_spec()
    - sweep (Optional[SweepSpec])
    - oracle (OracleOptions)
    """
    def __init__(
            self,
            configuration: Configuration = Configuration.NONDEGENERATE,
            gain: Optional[float] = None,
            phi: float = 0.0,
            settings: Optional[DetectorSettings] = None,
            grid: Optional[Dict[str, Any]] = None,
            sweep: Optional[SweepSpec] = None,
            oracle: Optional[OracleOptions] = None,
            ) -> None:
        try:
            self.configuration = Configuration.parse(configuration)
            self.params = OpaParams(DEFAULT_GAIN if gain is None else gain, phi)
        except InvalidParameterError as exc:
            raise ScenarioError(str(exc)) from exc
        self.settings = settings or DetectorSettings.zero()
        self.gain_given = gain is not None
        self.grid = dict(grid) if grid is not None else None
        self.sweep = sweep
        self.oracle = oracle or OracleOptions()
        if self.grid is not None:
            self.grid_spec()

    @property
    def gain(self) -> float:
        return self.params.gain

    @property
    def phi(self) -> float:
        return self.params.phase_phi

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "ScenarioConfig":
        """
        Raises:
        - ScenarioError: on unknown keys or invalid values
        """
        _reject_unknown(data, TOP_LEVEL_KEYS, "the scenario")

        detectors = data.get("detectors", {})
        if not isinstance(detectors, dict):
            raise ScenarioError("[detectors] must be a table")
        _reject_unknown(detectors, {"k1", "k2"}, "[detectors]")
        arms = []
        for key in ("k1", "k2"):
            block = detectors.get(key, {})
            _reject_unknown(block, DETECTOR_KEYS, f"[detectors.{key}]")
            try:
                arms.append(DetectorArm(*(parse_angle(block.get(name, 0.0), f"{key} {name}") for name in ("rotator_angle", "psi_perp", "psi_par"))))
            except InvalidParameterError as exc:
                raise ScenarioError(str(exc)) from exc

        grid = data.get("grid")
        if grid is not None:
            _reject_unknown(grid, GRID_KEYS, "[grid]")

        sweep = None
        if "sweep" in data:
            block = data["sweep"]
            _reject_unknown(block, SWEEP_KEYS, "[sweep]")
            if "variable" not in block:
                raise ScenarioError("[sweep] needs a variable")
            sweep = SweepSpec(
                block["variable"], block.get("start", 0.0), block.get("stop", math.pi),
                block.get("count", 181), block.get("form", "printed"),
            )

        oracle_block = data.get("oracle", {})
        _reject_unknown(oracle_block, ORACLE_KEYS, "[oracle]")
        oracle = OracleOptions(**oracle_block)

        gain = data.get("gain")
        return cls(
            configuration=data.get("configuration", "nondegenerate"),
            gain=None if gain is None else _number(gain, "gain"),
            phi=parse_angle(data.get("phi", 0.0), "phi"),
            settings=DetectorSettings(*arms),
            grid=grid,
            sweep=sweep,
            oracle=oracle,
        )

    def grid_spec(self) -> GridSpec:
        """
        Resolves the [grid] block; a preset supplies the axes and ranges that
        the block does not override.

        Raises:
        - ScenarioError: if the block is missing or invalid
        """
        if self.grid is None:
            raise ScenarioError("The scenario has no [grid] block")
        block = dict(self.grid)
        preset = block.pop("preset", None)
        try:
            if preset is not None:
                if preset not in GRID_PRESETS:
                    raise ScenarioError(f"Unknown grid preset {preset!r}; expected one of {', '.join(GRID_PRESETS)}")
                base = preset_spec(self.configuration, mode=block.get("mode", "marginal")).to_dict()
                block.setdefault("x_axis", base["axes"][0])
                block.setdefault("y_axis", base["axes"][1])
                block.setdefault("x_range", base["ranges"][0])
                block.setdefault("y_range", base["ranges"][1])
                block.setdefault("x_count", base["counts"][0])
                block.setdefault("y_count", base["counts"][1])
                block.setdefault("mode", base["mode"])
            if "x_axis" not in block or "y_axis" not in block:
                raise ScenarioError("[grid] needs x_axis and y_axis, or a preset")
            return GridSpec(
                self.configuration,
                block["x_axis"],
                block["y_axis"],
                tuple(block.get("x_range", (-3.0, 3.0))),
                tuple(block.get("y_range", (-3.0, 3.0))),
                block.get("x_count", 61),
                block.get("y_count", 61),
                mode=block.get("mode", "slice"),
                fixed=block.get("fixed"),
                **({"max_samples": block["max_samples"]} if "max_samples" in block else {}),
            )
        except InvalidParameterError as exc:
            raise ScenarioError(str(exc)) from exc

    def override(self, **flags: Any) -> "ScenarioConfig":
        """A copy with every non-None flag replacing the file value."""
        known = {"configuration", "gain", "phi", "grid", "sweep", "settings", "oracle"}
        _reject_unknown(flags, known, "the overrides")
        values = {
            "configuration": self.configuration,
            "gain": self.gain if self.gain_given else None,
            "phi": self.phi,
            "settings": self.settings,
            "grid": self.grid,
            "sweep": self.sweep,
            "oracle": self.oracle,
        }
        values.update({key: value for key, value in flags.items() if value is not None})
        return ScenarioConfig(**values)

    def to_dict(self) -> dict:
        arms = {}
        for key, arm in (("k1", self.settings.arm_1), ("k2", self.settings.arm_2)):
            arms[key] = {"rotator_angle": arm.rotator_angle, "psi_perp": arm.psi_perp, "psi_par": arm.psi_par}
        return {
            "configuration": self.configuration.value,
            "gain": self.gain,
            "phi": self.phi,
            "detectors": arms,
        }


def load_scenario(path: Union[str, Path]) -> ScenarioConfig:
    """
    Reads a TOML scenario file.

    Raises:
    - ScenarioError: if the file is missing, is not valid TOML, or is invalid
    """
    path = Path(path)
    try:
        with path.open("rb") as handle:
            data = tomli.load(handle)
    except FileNotFoundError as exc:
        raise ScenarioError(f"Scenario file {path} not found") from exc
    except tomli.TOMLDecodeError as exc:
        raise ScenarioError(f"Scenario file {path} is not valid TOML: {exc}") from exc
    logger.info("Loaded scenario %s", path)
    return ScenarioConfig.from_mapping(data)
