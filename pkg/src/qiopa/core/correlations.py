"""
First- and second-order correlation functions at the polarization-analysed
detectors.

Each detected field is c_j = xi_j^- a_(j alpha) + xi_j^+ a_(j beta) with
xi^-+ = (cos phi -+ sin phi) exp(i psi_(alpha/beta)) / sqrt(2). For k1 the
alpha polarization is perp and beta is par; for k2 alpha is par and beta is
perp. The degenerate layout detects k1 behind a rotator at phi (detector
"1") and at phi + 90 degrees (detector "2").

The printed closed forms are reproduced as published. The corrected forms
follow the detected-field algebra and agree with the Fock oracle; they differ
from the printed ones in the sign of Psi_2 in the k2 terms, in the
non-degenerate G2_12, and in the degenerate fringe difference.
"""
import cmath
import enum
import logging
import math
from typing import Dict, NamedTuple, Optional, Tuple

from .errors import InvalidConfigurationError, InvalidParameterError
from .oracle import DEFAULT_CUTOFF_TOLERANCE, FockRegister, field_coincidence, field_intensity, oracle_output_state, oracle_vacuum_state
from .params import Configuration, OpaParams

logger = logging.getLogger(__name__)


class Provenance(enum.Enum):
    PRINTED = "printed"
    CORRECTED = "corrected"
    ORACLE = "oracle"

    @classmethod
    def closed_form(cls, value) -> "Provenance":
        """Parses a closed-form choice, refusing ORACLE."""
        form = cls(value.value if isinstance(value, Provenance) else str(value).lower())
        if form is cls.ORACLE:
            raise InvalidParameterError("The oracle is not a closed form; use oracle_correlations")
        return form


class DetectorArm:
    """
    The analyser in front of one detected beam.

    Attributes:
    - rotator_angle (float): phi, measured from the 45 degree axis
    - psi_perp, psi_par (float): the birefringent phase delays
    """
    __slots__ = ("rotator_angle", "psi_perp", "psi_par")

    def __init__(self, rotator_angle: float = 0.0, psi_perp: float = 0.0, psi_par: float = 0.0) -> None:
        for name, value in (("rotator_angle", rotator_angle), ("psi_perp", psi_perp), ("psi_par", psi_par)):
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise InvalidParameterError(f"The {name} must be a finite real number, got {value!r}")
        self.rotator_angle = float(rotator_angle)
        self.psi_perp = float(psi_perp)
        self.psi_par = float(psi_par)

    @classmethod
    def with_shift(cls, rotator_angle: float = 0.0, birefringent_shift: float = 0.0) -> "DetectorArm":
        return cls(rotator_angle, birefringent_shift, 0.0)

    @property
    def birefringent_shift(self) -> float:
        """Psi = psi_perp - psi_par"""
        return self.psi_perp - self.psi_par

    def conjugate(self) -> "DetectorArm":
        """The arm seen by the second PBS output, phi + 90 degrees."""
        return DetectorArm(self.rotator_angle + math.pi / 2.0, self.psi_perp, self.psi_par)

    def coefficients(self, alpha_is_perp: bool = True) -> Tuple[complex, complex]:
        """(xi^-, xi^+); |xi^-|^2 + |xi^+|^2 = 1."""
        psi_alpha, psi_beta = (self.psi_perp, self.psi_par) if alpha_is_perp else (self.psi_par, self.psi_perp)
        c, s = math.cos(self.rotator_angle), math.sin(self.rotator_angle)
        xi_minus = (c - s) / math.sqrt(2.0) * cmath.exp(1j * psi_alpha)
        xi_plus = (c + s) / math.sqrt(2.0) * cmath.exp(1j * psi_beta)
        return xi_minus, xi_plus

    def __repr__(self) -> str:
        return f"DetectorArm(phi={self.rotator_angle}, psi_perp={self.psi_perp}, psi_par={self.psi_par})"


class DetectorSettings:
    """The arms on k1 and k2; the degenerate layout uses only the first."""
    __slots__ = ("arm_1", "arm_2")

    def __init__(self, arm_1: Optional[DetectorArm] = None, arm_2: Optional[DetectorArm] = None) -> None:
        self.arm_1 = arm_1 or DetectorArm()
        self.arm_2 = arm_2 or DetectorArm()
        if not isinstance(self.arm_1, DetectorArm) or not isinstance(self.arm_2, DetectorArm):
            raise InvalidParameterError("The arms must be DetectorArm instances")

    @classmethod
    def zero(cls) -> "DetectorSettings":
        return cls()

    def arm(self, mode: int) -> DetectorArm:
        if mode not in (1, 2):
            raise InvalidParameterError(f"The detected mode must be 1 or 2, got {mode!r}")
        return self.arm_1 if mode == 1 else self.arm_2

    def xi(self, configuration: Configuration, mode: int) -> Tuple[complex, complex]:
        """(xi^-, xi^+) of a detected mode; degenerate mode 2 is the phi + 90 degree output."""
        configuration = Configuration.parse(configuration)
        self.arm(mode)
        if configuration is Configuration.DEGENERATE:
            arm = self.arm_1 if mode == 1 else self.arm_1.conjugate()
            return arm.coefficients(alpha_is_perp=True)
        return self.arm(mode).coefficients(alpha_is_perp=(mode == 1))

    def field(self, configuration: Configuration, mode: int) -> Dict[int, complex]:
        """The detected field as register-mode coefficients (k1 perp, k1 par, k2 perp, k2 par)."""
        configuration = Configuration.parse(configuration)
        xi_minus, xi_plus = self.xi(configuration, mode)
        if configuration is Configuration.NONDEGENERATE and mode == 2:
            return {3: xi_minus, 2: xi_plus}
        return {0: xi_minus, 1: xi_plus}

    def __repr__(self) -> str:
        return f"DetectorSettings({self.arm_1!r}, {self.arm_2!r})"


class PhaseCombos(NamedTuple):
    delta_minus: Tuple[float, float]
    delta_plus: Tuple[float, float]
    dphi_minus: float
    dphi_plus: float
    delta_psi: float
    delta_phi_degenerate: float


def phase_combos(params: OpaParams, settings: DetectorSettings) -> PhaseCombos:
    """Delta_j^-+ = Phi -+ Psi_j, phi_1 -+ phi_2, Psi_1 + Psi_2 and Psi - Phi."""
    phi = params.phase_phi
    psi_1, psi_2 = settings.arm_1.birefringent_shift, settings.arm_2.birefringent_shift
    return PhaseCombos(
        delta_minus=(phi - psi_1, phi - psi_2),
        delta_plus=(phi + psi_1, phi + psi_2),
        dphi_minus=settings.arm_1.rotator_angle - settings.arm_2.rotator_angle,
        dphi_plus=settings.arm_1.rotator_angle + settings.arm_2.rotator_angle,
        delta_psi=psi_1 + psi_2,
        delta_phi_degenerate=psi_1 - phi,
    )


def _fringe(arm: DetectorArm, phase: float) -> float:
    return math.cos(2.0 * arm.rotator_angle) * math.cos(phase)


def _mode_2_phase(params: OpaParams, settings: DetectorSettings, form: Provenance) -> float:
    combos = phase_combos(params, settings)
    return combos.delta_plus[1] if form is Provenance.PRINTED else combos.delta_minus[1]


def g1_nondegenerate(params: OpaParams, settings: DetectorSettings, mode: int, form=Provenance.PRINTED) -> float:
    """
    G1_1 = nbar + (nbar + 1)[1 + cos(2 phi_1) cos(Phi - Psi_1)] / 2
    G1_2 = nbar + nbar [1 + cos(2 phi_2) cos(Phi + Psi_2)] / 2 as printed,
    cos(Phi - Psi_2) in the corrected form.
    """
    form = Provenance.closed_form(form)
    nbar = params.mean_photons
    if mode == 1:
        return nbar + 0.5 * (nbar + 1.0) * (1.0 + _fringe(settings.arm_1, phase_combos(params, settings).delta_minus[0]))
    if mode == 2:
        return nbar + 0.5 * nbar * (1.0 + _fringe(settings.arm_2, _mode_2_phase(params, settings, form)))
    raise InvalidParameterError(f"The detected mode must be 1 or 2, got {mode!r}")


def g1_degenerate(params: OpaParams, settings: DetectorSettings, form=Provenance.PRINTED, conjugate: bool = False) -> float:
    """
    G1(phi) = nbar + (nbar + 1/2)[1 + cos(2 phi) cos(Psi - Phi)]; conjugate
    evaluates at phi + 90 degrees. The printed and corrected forms coincide
    here, so `form` is only validated.
    """
    Provenance.closed_form(form)
    arm = settings.arm_1.conjugate() if conjugate else settings.arm_1
    nbar = params.mean_photons
    return nbar + (nbar + 0.5) * (1.0 + _fringe(arm, phase_combos(params, settings).delta_phi_degenerate))


def _g2_12_printed(params: OpaParams, settings: DetectorSettings) -> float:
    nbar = params.mean_photons
    combos = phase_combos(params, settings)
    return (
        2.0 * nbar ** 2
        + nbar / 2.0
        + nbar * (nbar + 1.0) * _fringe(settings.arm_1, combos.delta_minus[0])
        + nbar * (nbar + 0.5) * (1.0 + _fringe(settings.arm_2, combos.delta_plus[1]))
        + nbar * (nbar + 1.0) * (
            (1.0 + math.cos(combos.delta_psi)) * math.cos(combos.dphi_minus) ** 2
            + (1.0 - math.cos(combos.delta_psi)) * math.sin(combos.dphi_plus) ** 2
        )
    )


def _g2_12_corrected(params: OpaParams, settings: DetectorSettings) -> float:
    nbar = params.mean_photons
    phase = cmath.exp(1j * params.phase_phi)
    xi1_minus, xi1_plus = settings.xi(Configuration.NONDEGENERATE, 1)
    xi2_minus, xi2_plus = settings.xi(Configuration.NONDEGENERATE, 2)
    # projections of the injected photon on the two detected polarizations
    injected = (xi1_minus + xi1_plus * phase) / math.sqrt(2.0)
    idler = (xi2_minus.conjugate() + xi2_plus.conjugate() * phase) / math.sqrt(2.0)
    pairing = xi1_minus * xi2_minus + xi1_plus * xi2_plus
    return (
        nbar * (nbar + 1.0) * abs(injected) ** 2
        + nbar ** 2 * (1.0 + abs(idler) ** 2)
        + 2.0 * nbar * (nbar + 1.0) * (pairing.conjugate() * idler.conjugate() * injected).real
        + nbar * (nbar + 1.0) * abs(pairing) ** 2
    )


def g2_nondegenerate(params: OpaParams, settings: DetectorSettings, pair: Tuple[int, int], form=Provenance.PRINTED) -> float:
    """
    G2_11 = 2 nbar {nbar + (nbar + 1)[1 + cos(2 phi_1) cos(Phi - Psi_1)]}
    G2_22 = 2 nbar^2 {1 + [1 + cos(2 phi_2) cos(Phi +- Psi_2)]}
    G2_12 as printed, or from the detected-field algebra in the corrected form.
    """
    form = Provenance.closed_form(form)
    pair = tuple(sorted(pair))
    nbar = params.mean_photons
    if pair == (1, 1):
        combos = phase_combos(params, settings)
        return 2.0 * nbar * (nbar + (nbar + 1.0) * (1.0 + _fringe(settings.arm_1, combos.delta_minus[0])))
    if pair == (2, 2):
        return 2.0 * nbar ** 2 * (2.0 + _fringe(settings.arm_2, _mode_2_phase(params, settings, form)))
    if pair == (1, 2):
        return _g2_12_printed(params, settings) if form is Provenance.PRINTED else _g2_12_corrected(params, settings)
    raise InvalidParameterError(f"The detector pair must be (1, 1), (2, 2) or (1, 2), got {pair}")


def g2_degenerate(params: OpaParams, settings: DetectorSettings, crossed: bool = False, form=Provenance.PRINTED, conjugate: bool = False) -> float:
    """
    G2(phi, phi) = 6 nbar^2 + 2 nbar + 3 nbar(nbar + 1) cos^2(2 phi) + 2 nbar(3 nbar + 2) cos(2 phi) cos(Psi - Phi)
    G2(phi, phi_bar) = 2 nbar(3 nbar + 2) - 3 nbar(nbar + 1) cos^2(2 phi)

    Identical in the printed and corrected forms; `form` is only validated.
    """
    Provenance.closed_form(form)
    nbar = params.mean_photons
    arm = settings.arm_1.conjugate() if conjugate else settings.arm_1
    cos_2phi = math.cos(2.0 * arm.rotator_angle)
    if crossed:
        return 2.0 * nbar * (3.0 * nbar + 2.0) - 3.0 * nbar * (nbar + 1.0) * cos_2phi ** 2
    delta_phi = phase_combos(params, settings).delta_phi_degenerate
    return (
        6.0 * nbar ** 2
        + 2.0 * nbar
        + 3.0 * nbar * (nbar + 1.0) * cos_2phi ** 2
        + 2.0 * nbar * (3.0 * nbar + 2.0) * cos_2phi * math.cos(delta_phi)
    )


def visibility(params: OpaParams, configuration: Configuration, mode: int = 2) -> Optional[float]:
    """
    (G_max - G_min) / (G_max + G_min) with the fringe term at +-1.

    Returns: (nbar + 1)/(3 nbar + 1) for k1, 1/3 for k2, (2 nbar + 1)/(4 nbar + 1)
    for the degenerate layout; None where both extremes vanish (k2 at zero gain)
    """
    configuration = Configuration.parse(configuration)
    nbar = params.mean_photons
    if configuration is Configuration.DEGENERATE:
        base, amplitude = 2.0 * nbar + 0.5, nbar + 0.5
    elif mode == 1:
        base, amplitude = 1.5 * nbar + 0.5, 0.5 * (nbar + 1.0)
    elif mode == 2:
        base, amplitude = 1.5 * nbar, 0.5 * nbar
    else:
        raise InvalidParameterError(f"The detected mode must be 1 or 2, got {mode!r}")
    if base == 0.0:
        return None
    return amplitude / base


def signal_to_noise(params: OpaParams, configuration: Configuration, mode: int = 2) -> Optional[float]:
    """
    G1 at zero phases over the vacuum-injection G1 = nbar.

    Returns: 2 for k2, (2 nbar + 1)/nbar for k1, (3 nbar + 1)/nbar degenerate;
    None at zero gain
    """
    configuration = Configuration.parse(configuration)
    nbar = params.mean_photons
    if nbar == 0.0:
        return None
    zero = DetectorSettings.zero()
    at_zero = params.with_phase(0.0)
    if configuration is Configuration.DEGENERATE:
        return g1_degenerate(at_zero, zero) / nbar
    return g1_nondegenerate(at_zero, zero, mode) / nbar


def fringe_difference(
        params: OpaParams,
        configuration: Configuration,
        settings: DetectorSettings,
        mode: int = 2,
        form=Provenance.PRINTED,
        ) -> float:
    """
    G1(phi) - G1(phi + 90 degrees) on one beam.

    Printed: nbar cos(2 phi_2) cos(Phi + Psi_2), for both layouts.
    Corrected: nbar cos(2 phi_2) cos(Phi - Psi_2) on k2,
    (nbar + 1) cos(2 phi_1) cos(Phi - Psi_1) on k1 and
    (2 nbar + 1) cos(2 phi) cos(Psi - Phi) in the degenerate layout.
    """
    configuration = Configuration.parse(configuration)
    form = Provenance.closed_form(form)
    nbar = params.mean_photons
    combos = phase_combos(params, settings)
    if configuration is Configuration.DEGENERATE:
        if form is Provenance.PRINTED:
            return nbar * _fringe(settings.arm_1, combos.delta_plus[0])
        return (2.0 * nbar + 1.0) * _fringe(settings.arm_1, combos.delta_phi_degenerate)
    if mode == 1:
        return (nbar + 1.0) * _fringe(settings.arm_1, combos.delta_minus[0])
    if mode == 2:
        return nbar * _fringe(settings.arm_2, _mode_2_phase(params, settings, form))
    raise InvalidParameterError(f"The detected mode must be 1 or 2, got {mode!r}")


class CauchySchwarzResult(NamedTuple):
    g11: float
    g22: float
    g12: float
    lhs: float
    rhs: float
    violated: bool


def _cauchy_schwarz(g1_1: float, g1_2: float, g2_11: float, g2_22: float, g2_12: float) -> CauchySchwarzResult:
    g11 = g2_11 / g1_1 ** 2
    g22 = g2_22 / g1_2 ** 2
    g12 = g2_12 / (g1_1 * g1_2)
    lhs, rhs = g12 ** 2, g11 * g22
    return CauchySchwarzResult(g11, g22, g12, lhs, rhs, lhs > rhs)


def cauchy_schwarz_test(params: OpaParams, settings: DetectorSettings, form=Provenance.PRINTED) -> Optional[CauchySchwarzResult]:
    """
    Compares [g2_12]^2 with g2_11 g2_22, g2_ij = G2_ij / (G1_i G1_j), for
    the non-degenerate layout. Returns None at zero gain.
    """
    if params.mean_photons == 0.0:
        return None
    return _cauchy_schwarz(
        g1_nondegenerate(params, settings, 1, form),
        g1_nondegenerate(params, settings, 2, form),
        g2_nondegenerate(params, settings, (1, 1), form),
        g2_nondegenerate(params, settings, (2, 2), form),
        g2_nondegenerate(params, settings, (1, 2), form),
    )


class CorrelationReport(NamedTuple):
    """
    Correlations at one parameter set. Keys "1" and "2" name the k1 and k2
    detectors, or the phi and phi + 90 degree detectors of the degenerate
    layout; g2 keys are "11", "22" and "12".
    """
    configuration: Configuration
    gain: float
    phase_phi: float
    provenance: Provenance
    g1: Dict[str, float]
    g2: Dict[str, float]
    normalized_g2: Dict[str, Optional[float]]
    visibility: Optional[float]
    signal_to_noise: Optional[float]
    fringe_difference: float

    def cauchy_schwarz(self) -> Optional[CauchySchwarzResult]:
        if self.configuration is not Configuration.NONDEGENERATE:
            raise InvalidConfigurationError("The Cauchy-Schwarz test compares the k1 and k2 beams")
        if min(self.g1.values()) == 0.0:
            return None
        return _cauchy_schwarz(self.g1["1"], self.g1["2"], self.g2["11"], self.g2["22"], self.g2["12"])


def _normalized(g1: Dict[str, float], g2: Dict[str, float]) -> Dict[str, Optional[float]]:
    normalized = {}
    for key, value in g2.items():
        denominator = g1[key[0]] * g1[key[1]]
        normalized[key] = value / denominator if denominator > 0.0 else None
    return normalized


def correlation_report(
        params: OpaParams,
        configuration: Configuration,
        settings: DetectorSettings,
        form=Provenance.PRINTED,
        ) -> CorrelationReport:
    """Every closed-form correlation for one parameter set."""
    configuration = Configuration.parse(configuration)
    form = Provenance.closed_form(form)
    if configuration is Configuration.NONDEGENERATE:
        g1 = {str(mode): g1_nondegenerate(params, settings, mode, form) for mode in (1, 2)}
        g2 = {f"{i}{j}": g2_nondegenerate(params, settings, (i, j), form) for i, j in ((1, 1), (2, 2), (1, 2))}
    else:
        g1 = {"1": g1_degenerate(params, settings, form), "2": g1_degenerate(params, settings, form, conjugate=True)}
        g2 = {
            "11": g2_degenerate(params, settings, form=form),
            "22": g2_degenerate(params, settings, form=form, conjugate=True),
            "12": g2_degenerate(params, settings, crossed=True, form=form),
        }
    return CorrelationReport(
        configuration=configuration,
        gain=params.gain,
        phase_phi=params.phase_phi,
        provenance=form,
        g1=g1,
        g2=g2,
        normalized_g2=_normalized(g1, g2),
        visibility=visibility(params, configuration),
        signal_to_noise=signal_to_noise(params, configuration),
        fringe_difference=fringe_difference(params, configuration, settings, form=form),
    )


def oracle_correlations(
        params: OpaParams,
        configuration: Configuration,
        settings: DetectorSettings,
        cutoff: Optional[int] = None,
        injected: bool = True,
        register: Optional[FockRegister] = None,
        tolerance: float = DEFAULT_CUTOFF_TOLERANCE,
        ) -> CorrelationReport:
    """
    The same correlations as normal-ordered expectations on the Fock oracle
    state; injected=False uses the squeezed vacuum instead. A prebuilt
    register for the same parameters may be passed to skip the propagation.
    Without a cutoff the register is sized so the tail past it stays below
    `tolerance`.

    Visibility and signal-to-noise are closed-form quantities and are copied
    from the corrected forms; the fringe difference is measured.
    """
    configuration = Configuration.parse(configuration)
    if register is None:
        build = oracle_output_state if injected else oracle_vacuum_state
        register = build(params, configuration, cutoff, tolerance)
    fields = {key: settings.field(configuration, int(key)) for key in ("1", "2")}
    g1 = {key: field_intensity(register, field) for key, field in fields.items()}
    g2 = {
        "11": field_coincidence(register, fields["1"], fields["1"]),
        "22": field_coincidence(register, fields["2"], fields["2"]),
        "12": field_coincidence(register, fields["1"], fields["2"]),
    }

    if configuration is Configuration.DEGENERATE:
        fringe = g1["1"] - g1["2"]
    else:
        shifted = DetectorSettings(settings.arm_1, settings.arm_2.conjugate())
        fringe = g1["2"] - field_intensity(register, shifted.field(configuration, 2))

    logger.debug("Oracle correlations %s g=%s at cutoff %d", configuration.value, params.gain, register.cutoff)
    return CorrelationReport(
        configuration=configuration,
        gain=params.gain,
        phase_phi=params.phase_phi,
        provenance=Provenance.ORACLE,
        g1=g1,
        g2=g2,
        normalized_g2=_normalized(g1, g2),
        visibility=visibility(params, configuration),
        signal_to_noise=signal_to_noise(params, configuration),
        fringe_difference=fringe,
    )
