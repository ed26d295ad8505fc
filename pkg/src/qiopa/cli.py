"""
qiopa command line.

    qiopa wigner-grid --preset cat --phi 90deg --output out/cat
    qiopa correlations --gain 0.8814 --sweep rotator_2 --stop 180deg --output out/fringe
    qiopa verify --report verify.json
    qiopa state-dump --configuration degenerate --gain 0.5

Angles accept "rad" or "deg" suffixes and default to radians. Flags win over
the scenario file. Exit codes: 0 success, 1 tolerance failure, 2 usage or
configuration error; nothing is written when a command fails.
"""
import functools
import logging
import math
import sys
from pathlib import Path
from typing import Optional

import click

from .config import GRID_PRESETS, SWEEP_VARIABLES, ScenarioConfig, SweepSpec, load_scenario, parse_angle
from .core.correlations import (
    DetectorArm,
    DetectorSettings,
    Provenance,
    correlation_report,
    oracle_correlations,
)
from .core.errors import ScenarioError
from .core.params import Configuration, OpaParams, gain_for_mean_photons
from .core.states import build_output_state
from .core.wigner import PRESET_GAIN, cat_criteria, wigner_grid, wigner_normalization
from .export import (
    grid_sidecar,
    json_text,
    render_grid_csv,
    render_sweep_csv,
    state_document,
    sweep_sidecar,
    write_files,
)
from .verify import run_verification

logger = logging.getLogger(__name__)

EXIT_TOLERANCE = 1
EXIT_USAGE = 2


def _fail(message: str, code: int = EXIT_USAGE) -> None:
    click.echo(f"Error: {message}", err=True)
    sys.exit(code)


def handle_errors(command):
    """Maps qiopa's ValueError family, overflow and file errors to exit code 2."""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except (ValueError, OverflowError, OSError) as exc:
            logger.debug("Command failed", exc_info=True)
            _fail(str(exc))
    return wrapper


def _angle(value: Optional[str], name: str) -> Optional[float]:
    return None if value is None else parse_angle(value, name)


def _scenario(config: Optional[str], **flags) -> ScenarioConfig:
    scenario = load_scenario(config) if config else ScenarioConfig()
    nbar = flags.pop("nbar", None)
    if nbar is not None:
        if flags.get("gain") is not None:
            raise ScenarioError("Give either --gain or --nbar, not both")
        flags["gain"] = gain_for_mean_photons(nbar)
    return scenario.override(**flags)


def _arm(arm: DetectorArm, rotator: Optional[str], shift: Optional[str], which: str) -> DetectorArm:
    """Replaces the rotator angle and/or the birefringent shift Psi = psi_perp - psi_par."""
    rotator_angle = arm.rotator_angle if rotator is None else parse_angle(rotator, f"rotator {which}")
    psi_perp = arm.psi_perp if shift is None else arm.psi_par + parse_angle(shift, f"psi {which}")
    return DetectorArm(rotator_angle, psi_perp, arm.psi_par)


def _bound(variable: str, value: Optional[str], default: float):
    if value is None:
        return default
    return float(value) if variable == "gain" else value


def _sweep_point(scenario: ScenarioConfig, variable: str, value: float):
    params, arm_1, arm_2 = scenario.params, scenario.settings.arm_1, scenario.settings.arm_2
    if variable == "gain":
        params = OpaParams(value, params.phase_phi)
    elif variable == "phase":
        params = params.with_phase(value)
    elif variable == "rotator_1":
        arm_1 = DetectorArm(value, arm_1.psi_perp, arm_1.psi_par)
    elif variable == "rotator_2":
        arm_2 = DetectorArm(value, arm_2.psi_perp, arm_2.psi_par)
    elif variable == "psi_1":
        arm_1 = DetectorArm(arm_1.rotator_angle, arm_1.psi_par + value, arm_1.psi_par)
    else:
        arm_2 = DetectorArm(arm_2.rotator_angle, arm_2.psi_par + value, arm_2.psi_par)
    return params, DetectorSettings(arm_1, arm_2)


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Log debug messages.")
@click.version_option(package_name="qiopa")
def main(verbose: bool) -> None:
    """Closed-form and oracle simulations of the quantum-injected OPA."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        stream=sys.stderr,
    )


@main.command("wigner-grid")
@click.option("--config", type=click.Path(dir_okay=False), help="TOML scenario file.")
@click.option("--preset", type=click.Choice(GRID_PRESETS), help="Grid preset; cat is the g = 2.5 marginal on the lobe axes.")
@click.option("--configuration", type=click.Choice([c.value for c in Configuration]))
@click.option("--gain", type=float)
@click.option("--phi", help="Injection phase Phi, e.g. 0, 1.5708rad or 90deg.")
@click.option("--mode", type=click.Choice(["slice", "marginal"]))
@click.option("--output", "-o", required=True, help="Output stem; writes STEM.csv, STEM.json and STEM.summary.json.")
@click.option("--normalize-check", is_flag=True, help="Integrate W over the whole phase space.")
@handle_errors
def wigner_grid_command(config, preset, configuration, gain, phi, mode, output, normalize_check):
    """Samples the Wigner function on a two-axis grid."""
    scenario = _scenario(config, configuration=configuration, phi=_angle(phi, "phi"))
    grid = dict(scenario.grid or {})
    if preset is not None:
        grid["preset"] = preset
        if gain is None and not scenario.gain_given:
            gain = PRESET_GAIN
    if mode is not None:
        grid["mode"] = mode
    if not grid:
        raise ScenarioError("No grid given; use --preset or a [grid] block")
    scenario = scenario.override(gain=gain, grid=grid)

    spec = scenario.grid_spec()
    result = wigner_grid(scenario.params, spec)
    value, x, y = result.min_sample()
    summary = {
        "schema_version": 1,
        "min_W": value,
        "min_location": {spec.x_axis: x, spec.y_axis: y},
        "integral": None,
    }
    if normalize_check:
        summary["integral"] = wigner_normalization(scenario.params, scenario.configuration)
    cat = cat_criteria(scenario.params, scenario.configuration, (spec.x_axis, spec.y_axis))
    summary["cat"] = {
        "negative": cat.negative,
        "separation_ratio": cat.separation_ratio,
        "resolvable": cat.resolvable,
        "microscopic": cat.microscopic,
    }

    stem = Path(output)
    write_files({
        stem.with_name(stem.name + ".csv"): render_grid_csv(result),
        stem.with_name(stem.name + ".json"): json_text(grid_sidecar(result)),
        stem.with_name(stem.name + ".summary.json"): json_text(summary),
    })
    click.echo(f"min W = {value:.9g} at {spec.x_axis} = {x:.6g}, {spec.y_axis} = {y:.6g}")
    if normalize_check:
        click.echo(f"integral = {summary['integral']:.9f}")


@main.command("correlations")
@click.option("--config", type=click.Path(dir_okay=False), help="TOML scenario file.")
@click.option("--configuration", type=click.Choice([c.value for c in Configuration]))
@click.option("--gain", type=float)
@click.option("--nbar", type=float, help="Mean photon number per mode, instead of --gain.")
@click.option("--phi", help="Injection phase Phi.")
@click.option("--rotator-1", help="Rotator angle phi_1 from the 45 degree axis.")
@click.option("--rotator-2", help="Rotator angle phi_2.")
@click.option("--psi-1", help="Birefringent shift Psi_1.")
@click.option("--psi-2", help="Birefringent shift Psi_2.")
@click.option("--form", type=click.Choice([p.value for p in Provenance]), help="Closed form or oracle; default printed.")
@click.option("--sweep", multiple=True, type=click.Choice(SWEEP_VARIABLES), help="The one variable to sweep.")
@click.option("--start", help="Sweep start (angle or gain).")
@click.option("--stop", help="Sweep stop.")
@click.option("--count", type=int, help="Sweep samples.")
@click.option("--output", "-o", help="Output stem for a sweep; writes STEM.csv and STEM.json.")
@click.option("--cauchy-schwarz", is_flag=True, help="Print the Cauchy-Schwarz comparison.")
@click.option("--visibility", is_flag=True, help="Print the fringe visibility.")
@handle_errors
def correlations_command(
        config, configuration, gain, nbar, phi, rotator_1, rotator_2, psi_1, psi_2,
        form, sweep, start, stop, count, output, cauchy_schwarz, visibility):
    """Evaluates G1, G2, visibility and the fringe difference, or sweeps one setting."""
    # Check validity of inputs
    if len(sweep) > 1:
        raise ScenarioError(f"Only one variable can be swept at a time, got {', '.join(sweep)}; use separate runs")
    scenario = _scenario(config, configuration=configuration, gain=gain, nbar=nbar, phi=_angle(phi, "phi"))
    settings = DetectorSettings(
        _arm(scenario.settings.arm_1, rotator_1, psi_1, "1"),
        _arm(scenario.settings.arm_2, rotator_2, psi_2, "2"),
    )
    scenario = scenario.override(settings=settings)

    sweep_spec = scenario.sweep
    if sweep or (sweep_spec is not None and (start, stop, count, form) != (None,) * 4):
        base = sweep_spec.to_dict() if sweep_spec else {"start": 0.0, "stop": math.pi, "count": 181, "form": "printed"}
        variable = sweep[0] if sweep else sweep_spec.variable
        sweep_spec = SweepSpec(
            variable,
            _bound(variable, start, base["start"]),
            _bound(variable, stop, base["stop"]),
            base["count"] if count is None else count,
            form or base["form"],
        )
    elif start is not None or stop is not None or count is not None:
        raise ScenarioError("--start, --stop and --count need a sweep")

    if sweep_spec is not None:
        if output is None:
            raise ScenarioError("A sweep needs --output")
        values = sweep_spec.values()
        reports = []
        for value in values:
            params, point_settings = _sweep_point(scenario, sweep_spec.variable, float(value))
            reports.append(correlation_report(params, scenario.configuration, point_settings, sweep_spec.form))
        logger.info("Swept %s over %d values", sweep_spec.variable, len(values))
        stem = Path(output)
        write_files({
            stem.with_name(stem.name + ".csv"): render_sweep_csv(sweep_spec.variable, values, reports),
            stem.with_name(stem.name + ".json"): json_text(sweep_sidecar(scenario.to_dict(), sweep_spec.to_dict())),
        })
        click.echo(f"{len(values)} rows written to {stem.name}.csv")
        return

    chosen = Provenance(form or "printed")
    if chosen is Provenance.ORACLE:
        report = oracle_correlations(
            scenario.params, scenario.configuration, scenario.settings,
            cutoff=scenario.oracle.cutoff, tolerance=scenario.oracle.tolerance,
        )
    else:
        report = correlation_report(scenario.params, scenario.configuration, scenario.settings, chosen)

    click.echo(f"{scenario.configuration.value} g = {scenario.gain:.6g} nbar = {scenario.params.mean_photons:.6g} ({report.provenance.value})")
    for key, value in report.g1.items():
        click.echo(f"G1_{key} = {value:.9g}")
    for key, value in report.g2.items():
        click.echo(f"G2_{key} = {value:.9g}")
    click.echo(f"fringe = {report.fringe_difference:.9g}")
    if visibility:
        click.echo("V = n/a" if report.visibility is None else f"V = {report.visibility:.9g}")
    if cauchy_schwarz:
        result = report.cauchy_schwarz()
        if result is None:
            click.echo("Cauchy-Schwarz: n/a at zero gain")
        else:
            verdict = "VIOLATED" if result.violated else "satisfied"
            click.echo(f"lhs = {result.lhs:.9g}, rhs = {result.rhs:.9g}, {verdict}")


@main.command("verify")
@click.option("--config", type=click.Path(dir_okay=False), help="TOML scenario file; its [oracle] tolerance sizes the registers.")
@click.option("--report", "report_path", type=click.Path(dir_okay=False), help="Write the JSON report here.")
@click.option("--convention-constant", type=float, help="Override the Wigner convention constant.")
@click.option("--gain", "gains", type=float, multiple=True, help="Oracle gains; repeat for several.")
@click.option("--closed-form-only", is_flag=True, help="Skip every oracle check.")
@handle_errors
def verify_command(config, report_path, convention_constant, gains, closed_form_only):
    """Cross-checks the closed forms against the Fock oracle."""
    scenario = _scenario(config)
    report = run_verification(
        gains=gains or None, constant=convention_constant,
        closed_form_only=closed_form_only, tolerance=scenario.oracle.tolerance,
    )
    if report_path:
        write_files({report_path: json_text(report.to_dict())})
    click.echo(report.table())
    if not report.passed:
        names = ", ".join(result.name for result in report.failures())
        _fail(f"Failed checks: {names}", EXIT_TOLERANCE)


@main.command("state-dump")
@click.option("--config", type=click.Path(dir_okay=False), help="TOML scenario file.")
@click.option("--configuration", type=click.Choice([c.value for c in Configuration]))
@click.option("--gain", type=float)
@click.option("--phi", help="Injection phase Phi.")
@click.option("--truncation", type=int, help="Largest series index retained.")
@click.option("--output", "-o", help="Write the JSON here instead of standard output.")
@handle_errors
def state_dump_command(config, configuration, gain, phi, truncation, output):
    """Writes the output state amplitude table as JSON."""
    scenario = _scenario(config, configuration=configuration, gain=gain, phi=_angle(phi, "phi"))
    state = build_output_state(
        scenario.params, scenario.configuration,
        scenario.oracle.truncation if truncation is None else truncation,
    )
    text = json_text(state_document(state))
    if output:
        write_files({output: text})
    else:
        click.echo(text, nl=False)


if __name__ == "__main__":
    main()
