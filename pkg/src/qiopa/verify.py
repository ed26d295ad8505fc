"""
Cross-checks of the closed forms against the Fock oracle.

Every check returns a CheckResult with its largest deviation; a run collects
them into a VerificationReport that renders as a table or as JSON. Checks
comparing printed formulas with the oracle are reported as documented
deviations and never fail the run, the corrected forms carry the pass/fail.
"""
import logging
import math
from typing import Iterable, List, NamedTuple, Optional, Sequence

import numpy as np

from .core.correlations import (
    DetectorArm,
    DetectorSettings,
    Provenance,
    cauchy_schwarz_test,
    correlation_report,
    oracle_correlations,
)
from .core.errors import CutoffError
from .core.oracle import (
    DEFAULT_CUTOFF_TOLERANCE,
    check_register_size,
    cutoff_for_gain,
    oracle_output_state,
    pair_evolution,
    register_from_amplitudes,
    wigner_by_displacement,
)
from .core.params import Configuration, OpaParams, gain_for_mean_photons
from .core.states import DEFAULT_TRUNCATION, build_output_state
from .core.wigner import PEAK, PhasePoint, convention_constant, wigner_closed_form, wigner_minimum, wigner_normalization

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
ORACLE_GAINS = (0.2, 0.5, 0.8)
WIGNER_GAINS = (0.2, 0.4, 0.6)
NORMALIZATION_GAINS = (0.0, 0.5, 1.5, 2.5)
NORMALIZATION_PHASES = (0.0, math.pi / 2.0, math.pi)
CAUCHY_SCHWARZ_PHOTONS = (0.5, 1.0, 5.0, 20.0)

AMPLITUDE_TOLERANCE = 1e-8
WIGNER_TOLERANCE = 1e-6
CORRELATION_TOLERANCE = 1e-6
NORMALIZATION_TOLERANCE = 1e-10
MINIMUM_TOLERANCE = 1e-8
PAIR_CUTOFF = 30

# (Phi, k1 arm, k2 arm)
SETTING_TUPLES = (
    (0.0, DetectorArm(), DetectorArm()),
    (math.pi / 3.0, DetectorArm(0.3, 0.7, 0.2), DetectorArm(-0.4, 0.1, 0.9)),
    (math.pi / 2.0, DetectorArm(math.pi / 4.0, 0.0, -0.5), DetectorArm(0.25, 1.2, 0.0)),
    (math.pi, DetectorArm(0.2, math.pi / 2.0, 0.0), DetectorArm(0.6, -1.0, 0.0)),
)


class CheckResult(NamedTuple):
    """
    The outcome of one named check.

    - documented: a known printed-formula deviation, reported but never failing
    """
    name: str
    passed: bool
    max_deviation: float
    tolerance: float
    detail: str = ""
    documented: bool = False

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "max_deviation": self.max_deviation,
            "tolerance": self.tolerance,
            "detail": self.detail,
            "documented": self.documented,
        }


class VerificationReport:
    def __init__(self, results: Iterable[CheckResult]) -> None:
        self.results = list(results)

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    def failures(self) -> List[CheckResult]:
        return [result for result in self.results if not result.passed]

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "passed": self.passed,
            "checks": [result.to_dict() for result in self.results],
        }

    def table(self) -> str:
        width = max([len("check")] + [len(result.name) for result in self.results])
        lines = [f"{'check':<{width}}  status      max |dev|   tolerance"]
        for result in self.results:
            status = "DOCUMENTED" if result.documented else ("PASS" if result.passed else "FAIL")
            lines.append(f"{result.name:<{width}}  {status:<10}  {result.max_deviation:9.2e}   {result.tolerance:9.2e}")
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines)


def _result(name: str, deviation: float, tolerance: float, detail: str = "") -> CheckResult:
    passed = bool(np.isfinite(deviation) and deviation <= tolerance)
    logger.info("%s: max deviation %.3e (tolerance %.1e) %s", name, deviation, tolerance, "PASS" if passed else "FAIL")
    return CheckResult(name, passed, float(deviation), tolerance, detail)


def check_oracle_feasible(gains: Sequence[float], tolerance: float = DEFAULT_CUTOFF_TOLERANCE) -> None:
    """
    Raises:
    - CutoffError: if a four-mode oracle register at some gain would exceed
        the amplitude cap; the message points to the closed-form-only mode
    """
    for gain in gains:
        try:
            check_register_size(4, cutoff_for_gain(gain, tolerance))
        except CutoffError as exc:
            raise CutoffError(
                f"The oracle cannot represent gain {gain}: {exc}. "
                "Run the closed-form-only checks instead (verify --closed-form-only)",
                suggested_cutoff=exc.suggested_cutoff,
            ) from exc


# Closed-form checks

def check_normalization(
        gains: Sequence[float] = NORMALIZATION_GAINS,
        phases: Sequence[float] = NORMALIZATION_PHASES,
        ) -> CheckResult:
    deviation = 0.0
    for configuration in Configuration:
        for gain in gains:
            for phase in phases:
                integral = wigner_normalization(OpaParams(gain, phase), configuration)
                deviation = max(deviation, abs(integral - 1.0))
    return _result("wigner_normalization", deviation, NORMALIZATION_TOLERANCE)


def check_negativity(gains: Sequence[float] = NORMALIZATION_GAINS, phases: Sequence[float] = NORMALIZATION_PHASES) -> CheckResult:
    """The global minimum is -PEAK at the squeezed origin for every (g, Phi)."""
    deviation = 0.0
    for configuration in Configuration:
        for gain in gains:
            for phase in phases:
                report = wigner_minimum(OpaParams(gain, phase), configuration)
                deviation = max(deviation, abs(report.value + PEAK[configuration]))
    return _result("wigner_minimum", deviation, MINIMUM_TOLERANCE, f"g in {list(gains)}")


def check_cauchy_schwarz(photons: Sequence[float] = CAUCHY_SCHWARZ_PHOTONS) -> CheckResult:
    """Both closed forms violate the inequality at zero phases."""
    holding = []
    margin = math.inf
    for nbar in photons:
        params = OpaParams(gain_for_mean_photons(nbar))
        for form in (Provenance.PRINTED, Provenance.CORRECTED):
            result = cauchy_schwarz_test(params, DetectorSettings.zero(), form)
            margin = min(margin, result.lhs - result.rhs)
            if not result.violated:
                holding.append(f"{form.value} nbar={nbar}")
    detail = "violated everywhere" if not holding else "not violated: " + ", ".join(holding)
    passed = not holding
    logger.info("cauchy_schwarz: smallest margin %.3e %s", margin, "PASS" if passed else "FAIL")
    return CheckResult("cauchy_schwarz_violation", passed, 0.0 if passed else float(-margin), 0.0, detail)


# Oracle checks

def check_pair_evolution(gains: Sequence[float] = ORACLE_GAINS, cutoff: int = PAIR_CUTOFF) -> CheckResult:
    """
    U|0,0>, U|1,0> and U|1,1> against their series:
    Gamma^n / C |n,n>, C^-2 Gamma^n sqrt(n+1) |n+1,n> and
    Gamma^m (m - S^2) / (S C^2) |m,m>.
    """
    deviation = 0.0
    n = np.arange(cutoff)
    for gain in gains:
        params = OpaParams(gain)
        c, s, ratio = params.cosh_c, params.sinh_s, params.gamma_ratio

        expected = np.zeros((cutoff, cutoff))
        expected[n, n] = ratio ** n / c
        deviation = max(deviation, np.max(np.abs(pair_evolution(gain, (0, 0), cutoff) - expected)))

        expected = np.zeros((cutoff, cutoff))
        expected[n[1:], n[:-1]] = ratio ** n[:-1] * np.sqrt(n[:-1] + 1.0) / c ** 2
        deviation = max(deviation, np.max(np.abs(pair_evolution(gain, (1, 0), cutoff) - expected)))

        expected = np.zeros((cutoff, cutoff))
        if s == 0.0:
            expected[1, 1] = 1.0
        else:
            expected[n, n] = ratio ** n * (n - s ** 2) / (s * c ** 2)
        deviation = max(deviation, np.max(np.abs(pair_evolution(gain, (1, 1), cutoff) - expected)))
    return _result("pair_evolution", deviation, AMPLITUDE_TOLERANCE)


def check_output_states(
        gains: Sequence[float] = ORACLE_GAINS,
        truncation: int = DEFAULT_TRUNCATION,
        tolerance: float = DEFAULT_CUTOFF_TOLERANCE,
        ) -> CheckResult:
    """Closed-form amplitudes (before renormalization) against the propagated register."""
    deviation = 0.0
    for configuration in Configuration:
        for gain in gains:
            for phase in (0.0, math.pi / 3.0):
                params = OpaParams(gain, phase)
                state = build_output_state(params, configuration, truncation)
                oracle = oracle_output_state(params, configuration, tolerance=tolerance)
                closed = register_from_amplitudes(configuration.mode_count, oracle.cutoff, state.raw_amplitudes())
                deviation = max(deviation, float(np.max(np.abs(closed.state_vector - oracle.state_vector))))
    return _result("output_state_amplitudes", deviation, AMPLITUDE_TOLERANCE)


def _wigner_points(extent: float = 0.6, count: int = 5) -> List[PhasePoint]:
    axis = np.linspace(-extent, extent, count)
    return [
        PhasePoint(Configuration.DEGENERATE, (complex(x, 0.1),), (complex(0.2, y),))
        for y in axis
        for x in axis
    ]


def check_wigner_oracle(
        gains: Sequence[float] = WIGNER_GAINS,
        phase_phi: float = math.pi / 3.0,
        constant: Optional[float] = None,
        tolerance: float = DEFAULT_CUTOFF_TOLERANCE,
        ) -> CheckResult:
    """
    The degenerate closed form times the convention constant against the
    displaced parity of the oracle state on a 5 x 5 grid. Deviations are
    relative to the largest |W| on the grid.
    """
    configuration = Configuration.DEGENERATE
    if constant is None:
        constant = convention_constant(configuration)
    deviation = 0.0
    for gain in gains:
        params = OpaParams(gain, phase_phi)
        register = oracle_output_state(params, configuration, tolerance=tolerance)
        closed, numeric = [], []
        for point in _wigner_points():
            closed.append(constant * wigner_closed_form(params, point).value)
            numeric.append(wigner_by_displacement(register, point.mode_amplitudes()))
        closed, numeric = np.array(closed), np.array(numeric)
        deviation = max(deviation, float(np.max(np.abs(closed - numeric)) / np.max(np.abs(numeric))))
    return _result("wigner_oracle", deviation, WIGNER_TOLERANCE, f"convention constant {constant}")


def _relative(closed: Optional[float], oracle: Optional[float]) -> float:
    if closed is None or oracle is None:
        return 0.0 if closed is oracle else math.inf
    return abs(closed - oracle) / max(1.0, abs(oracle))


def _report_deviation(closed, oracle) -> dict:
    deviations = {}
    for family in ("g1", "g2"):
        for key, value in getattr(oracle, family).items():
            deviations[f"{family}_{key}"] = _relative(getattr(closed, family)[key], value)
    deviations["fringe"] = _relative(closed.fringe_difference, oracle.fringe_difference)
    return deviations


def check_correlations(
        gains: Sequence[float] = ORACLE_GAINS,
        tolerance: float = DEFAULT_CUTOFF_TOLERANCE,
        ) -> List[CheckResult]:
    """
    Corrected closed forms against the oracle over gains x setting tuples,
    plus the printed forms as a documented comparison.
    """
    corrected, printed = 0.0, 0.0
    deviating = set()
    for configuration in Configuration:
        for gain in gains:
            for phase, arm_1, arm_2 in SETTING_TUPLES:
                params = OpaParams(gain, phase)
                settings = DetectorSettings(arm_1, arm_2)
                register = oracle_output_state(params, configuration, tolerance=tolerance)
                oracle = oracle_correlations(params, configuration, settings, register=register)
                deviations = _report_deviation(correlation_report(params, configuration, settings, Provenance.CORRECTED), oracle)
                corrected = max(corrected, max(deviations.values()))
                deviations = _report_deviation(correlation_report(params, configuration, settings, Provenance.PRINTED), oracle)
                printed = max(printed, max(deviations.values()))
                deviating.update(
                    f"{configuration.value}:{key}" for key, value in deviations.items() if value > CORRELATION_TOLERANCE
                )

    detail = "printed forms deviate in " + ", ".join(sorted(deviating)) if deviating else "printed forms agree"
    logger.info("correlations_printed: %s", detail)
    return [
        _result("correlations_corrected", corrected, CORRELATION_TOLERANCE),
        CheckResult("correlations_printed", True, printed, CORRELATION_TOLERANCE, detail, documented=True),
    ]


def check_cauchy_schwarz_oracle(photons: Sequence[float] = (0.5, 1.0), tolerance: float = DEFAULT_CUTOFF_TOLERANCE) -> CheckResult:
    """The corrected zero-phase Cauchy-Schwarz sides against the oracle."""
    deviation = 0.0
    settings = DetectorSettings.zero()
    for nbar in photons:
        params = OpaParams(gain_for_mean_photons(nbar))
        closed = cauchy_schwarz_test(params, settings, Provenance.CORRECTED)
        measured = oracle_correlations(params, Configuration.NONDEGENERATE, settings, tolerance=tolerance).cauchy_schwarz()
        deviation = max(
            deviation,
            abs(closed.lhs - measured.lhs) / closed.lhs,
            abs(closed.rhs - measured.rhs) / closed.rhs,
        )
    return _result("cauchy_schwarz_oracle", deviation, CORRELATION_TOLERANCE, f"nbar in {list(photons)}")


def run_verification(
        gains: Optional[Sequence[float]] = None,
        constant: Optional[float] = None,
        closed_form_only: bool = False,
        tolerance: float = DEFAULT_CUTOFF_TOLERANCE,
        ) -> VerificationReport:
    """
    Runs every check. `gains` replaces the oracle gains of the amplitude and
    correlation checks, `constant` overrides the Wigner convention constant
    and `tolerance` sizes every oracle register.

    Raises:
    - CutoffError: if an oracle gain is infeasible and closed_form_only is off
    """
    results = [check_normalization(), check_negativity(), check_cauchy_schwarz()]
    if closed_form_only:
        return VerificationReport(results)

    oracle_gains = tuple(gains) if gains else ORACLE_GAINS
    wigner_gains = tuple(gains) if gains else WIGNER_GAINS
    check_oracle_feasible(oracle_gains + wigner_gains, tolerance)

    results.append(check_pair_evolution(oracle_gains))
    results.append(check_output_states(oracle_gains, tolerance=tolerance))
    results.append(check_wigner_oracle(wigner_gains, constant=constant, tolerance=tolerance))
    results.extend(check_correlations(oracle_gains, tolerance))
    results.append(check_cauchy_schwarz_oracle(tolerance=tolerance))
    return VerificationReport(results)
