"""
Closed-form output states of the quantum-injected amplifier.

Occupation tuples use a fixed mode order: (k1 perp, k1 par, k2 perp, k2 par)
for the non-degenerate layout and (k1 perp, k1 par) for the degenerate one.
"""
import cmath
import enum
import logging
import math
from typing import Dict, NamedTuple, Optional, Tuple

import numpy as np

from .errors import InvalidConfigurationError, InvalidParameterError
from .params import Configuration, OpaParams

logger = logging.getLogger(__name__)

DEFAULT_TRUNCATION = 40
DEFICIT_WARNING_LEVEL = 0.5


class ModeLabel(NamedTuple):
    momentum: str
    polarization: str

    def __str__(self) -> str:
        return f"{self.momentum}_{self.polarization}"


NONDEGENERATE_MODES = (
    ModeLabel("k1", "perp"),
    ModeLabel("k1", "par"),
    ModeLabel("k2", "perp"),
    ModeLabel("k2", "par"),
)
DEGENERATE_MODES = (ModeLabel("k1", "perp"), ModeLabel("k1", "par"))
SWAPPED_MODES = (ModeLabel("k3", "perp"), ModeLabel("k4", "par"))


class NoncollinearVariant(enum.Enum):
    """Single-amplifier layouts fed over two distinct k-vectors."""
    TYPE_I = "type-i"
    TYPE_II = "type-ii"


NONCOLLINEAR_MODES = {
    NoncollinearVariant.TYPE_II: (ModeLabel("k1", "perp"), ModeLabel("k2", "par")),
    NoncollinearVariant.TYPE_I: (ModeLabel("k1", "same"), ModeLabel("k2", "same")),
}


class OutputState:
    """
    A truncated Fock-basis amplitude table for an output state.

    The amplitudes are renormalized to unit norm after truncation; the norm
    lost to truncation is kept in normalization_deficit, and the prefactor
    printed in the source formula is kept next to the one that actually
    normalizes the series.

    Attributes:
    - configuration (Configuration): the optical layout
    - params (OpaParams): the amplifier parameters
    - truncation (int): the largest series index retained
    - modes (Tuple[ModeLabel, ...]): labels of the occupation-tuple slots
    - amplitudes (Dict[Tuple[int, ...], complex]): unit-norm amplitudes
    - branches (Dict[Tuple[int, ...], int]): 0 for the first superposed
        branch, 1 for the branch carrying exp(i Phi)
    - prefactor (float): the normalizing prefactor, (sqrt(2) C^2)^-1
    - printed_prefactor (float): the prefactor as printed for this layout
    - normalization_deficit (float): 1 - sum |raw amplitude|^2
    """
    def __init__(
            self,
            configuration: Configuration,
            params: OpaParams,
            truncation: int,
            modes: Tuple[ModeLabel, ...],
            amplitudes: Dict[Tuple[int, ...], complex],
            branches: Dict[Tuple[int, ...], int],
            prefactor: float,
            printed_prefactor: float,
            normalization_deficit: float,
            ) -> None:
        if set(amplitudes) != set(branches):
            raise ValueError("Every amplitude must belong to a branch")
        if any(len(occupations) != len(modes) for occupations in amplitudes):
            raise ValueError("Occupation tuples must match the mode labels")

        self.configuration = configuration
        self.params = params
        self.truncation = truncation
        self.modes = tuple(modes)
        self.amplitudes = dict(amplitudes)
        self.branches = dict(branches)
        self.prefactor = prefactor
        self.printed_prefactor = printed_prefactor
        self.normalization_deficit = normalization_deficit

    def __repr__(self) -> str:
        return (
            f"OutputState({self.configuration.value}, gain={self.params.gain}, "
            f"phi={self.params.phase_phi}, truncation={self.truncation}, "
            f"entries={len(self.amplitudes)})"
        )

    @property
    def mode_count(self) -> int:
        return len(self.modes)

    def amplitude(self, occupations: Tuple[int, ...]) -> complex:
        """Returns the amplitude of an occupation tuple, zero if absent."""
        return self.amplitudes.get(tuple(occupations), 0j)

    def norm_squared(self) -> float:
        return float(sum(abs(value) ** 2 for value in self.amplitudes.values()))

    def raw_amplitudes(self) -> Dict[Tuple[int, ...], complex]:
        """The truncated series before renormalization; its squared norm is 1 - deficit."""
        scale = math.sqrt(1.0 - self.normalization_deficit)
        return {occupations: value * scale for occupations, value in self.amplitudes.items()}

    def branch(self, index: int) -> Dict[Tuple[int, ...], complex]:
        """Returns the amplitude table of one superposed branch (0 or 1)."""
        if index not in (0, 1):
            raise ValueError(f"The branch index must be 0 or 1, got {index}")
        return {
            occupations: value
            for occupations, value in self.amplitudes.items()
            if self.branches[occupations] == index
        }

    def series_coefficient(self, occupations: Tuple[int, ...]) -> float:
        """
        The bare series term of an occupation tuple, without prefactor and
        injection phase: sqrt(P_n) Gamma^m sqrt(m+1) for the non-degenerate
        layout, Gamma^n sqrt(n+1) for the degenerate one. Zero if the tuple is
        not in the table.
        """
        occupations = tuple(occupations)
        if occupations not in self.amplitudes:
            return 0.0
        raw = abs(self.amplitudes[occupations]) * math.sqrt(1.0 - self.normalization_deficit)
        return raw / self.prefactor

    def printed_amplitude(self, occupations: Tuple[int, ...]) -> complex:
        """The amplitude as the printed formula (with its prefactor) gives it."""
        occupations = tuple(occupations)
        if occupations not in self.amplitudes:
            return 0j
        phase = cmath.exp(1j * self.params.phase_phi) if self.branches[occupations] == 1 else 1.0
        return self.printed_prefactor * self.series_coefficient(occupations) * phase

    def relabel(self, modes: Tuple[ModeLabel, ...]) -> "OutputState":
        if len(modes) != len(self.modes):
            raise ValueError("The relabelling must keep the number of modes")
        return OutputState(
            self.configuration, self.params, self.truncation, modes,
            self.amplitudes, self.branches, self.prefactor,
            self.printed_prefactor, self.normalization_deficit,
        )

    def to_dict(self) -> dict:
        """JSON-ready representation; entries ordered by branch then occupations."""
        ordered = sorted(self.amplitudes, key=lambda occ: (self.branches[occ], occ))
        return {
            "schema_version": 1,
            "configuration": self.configuration.value,
            "gain": self.params.gain,
            "phi": self.params.phase_phi,
            "truncation": self.truncation,
            "modes": [str(mode) for mode in self.modes],
            "prefactor": self.prefactor,
            "printed_prefactor": self.printed_prefactor,
            "normalization_deficit": self.normalization_deficit,
            "entries": [
                {
                    "occupations": list(occ),
                    "branch": self.branches[occ],
                    "re": self.amplitudes[occ].real,
                    "im": self.amplitudes[occ].imag,
                }
                for occ in ordered
            ],
        }


def _check_inputs(params: OpaParams, truncation: int) -> None:
    # Check validity of inputs
    if not isinstance(params, OpaParams):
        raise InvalidParameterError("The params must be an OpaParams")
    if isinstance(truncation, bool) or not isinstance(truncation, (int, np.integer)) or truncation < 0:
        raise InvalidParameterError(f"The truncation must be a non-negative integer, got {truncation!r}")


def _injected_series(params: OpaParams, truncation: int) -> np.ndarray:
    # Gamma^m sqrt(m+1): the amplified single-photon branch
    m = np.arange(truncation + 1)
    return np.power(params.gamma_ratio, m) * np.sqrt(m + 1.0)


def normalizing_prefactor(params: OpaParams) -> float:
    """(sqrt(2) C^2)^-1, which normalizes both layouts' series."""
    return 1.0 / (math.sqrt(2.0) * params.cosh_c ** 2)


def printed_prefactor(params: OpaParams, configuration: Configuration) -> float:
    """The prefactor G exactly as printed: (sqrt(2) C^2)^-1 or (2C)^-2."""
    if configuration is Configuration.NONDEGENERATE:
        return normalizing_prefactor(params)
    return 1.0 / (2.0 * params.cosh_c) ** 2


def deficit_bound(params: OpaParams, truncation: int) -> float:
    """Upper bound (N + 3) Gamma^(2(N + 1)) on the truncation deficit."""
    return (truncation + 3) * params.gamma_ratio ** (2 * (truncation + 1))


def _finish(
        configuration: Configuration,
        params: OpaParams,
        truncation: int,
        modes: Tuple[ModeLabel, ...],
        raw: Dict[Tuple[int, ...], complex],
        branches: Dict[Tuple[int, ...], int],
        ) -> OutputState:
    norm_squared = float(sum(abs(value) ** 2 for value in raw.values()))
    deficit = max(0.0, 1.0 - norm_squared)
    if deficit > DEFICIT_WARNING_LEVEL:
        logger.warning(
            "Truncation %d keeps only %.3f of the norm at gain %.3f; increase the truncation",
            truncation, norm_squared, params.gain,
        )
    scale = 1.0 / math.sqrt(norm_squared)
    amplitudes = {occupations: value * scale for occupations, value in raw.items()}
    return OutputState(
        configuration, params, truncation, modes, amplitudes, branches,
        normalizing_prefactor(params), printed_prefactor(params, configuration), deficit,
    )


def build_output_state_nondegenerate(params: OpaParams, truncation: int = DEFAULT_TRUNCATION) -> OutputState:
    """
    Builds G{|Psi_B(0)> x |Psi_A(1)> + exp(i Phi) |Psi_A(0)> x |Psi_B(1)>}.

    Amplifier A acts on (k1 perp, k2 par), amplifier B on (k1 par, k2 perp).
    The first branch holds (m+1, n, n, m) with amplitude G sqrt(P_n) Gamma^m
    sqrt(m+1); the second holds (n, m+1, m, n) with the same magnitude times
    exp(i Phi). Both indices run over 0..truncation.

    Args:
    - params (OpaParams): the amplifier parameters
    - truncation (int): the largest series index retained

    Raises:
    - InvalidParameterError: if the truncation is not a non-negative integer

    Returns: the unit-norm OutputState
    """
    _check_inputs(params, truncation)

    prefactor = normalizing_prefactor(params)
    phase = cmath.exp(1j * params.phase_phi)
    vacuum_series = np.power(params.gamma_ratio, np.arange(truncation + 1)) / params.cosh_c
    injected_series = _injected_series(params, truncation)

    raw: Dict[Tuple[int, ...], complex] = {}
    branches: Dict[Tuple[int, ...], int] = {}
    for n in range(truncation + 1):
        for m in range(truncation + 1):
            magnitude = prefactor * vacuum_series[n] * injected_series[m]
            first = (m + 1, n, n, m)
            second = (n, m + 1, m, n)
            raw[first] = complex(magnitude)
            branches[first] = 0
            raw[second] = magnitude * phase
            branches[second] = 1

    logger.debug("Built non-degenerate state with %d entries", len(raw))
    return _finish(Configuration.NONDEGENERATE, params, truncation, NONDEGENERATE_MODES, raw, branches)


def build_output_state_degenerate(params: OpaParams, truncation: int = DEFAULT_TRUNCATION) -> OutputState:
    """
    Builds G[|nbar+1 perp, nbar par> + exp(i Phi)|nbar perp, nbar+1 par>]
    over (k1 perp, k1 par): the tuples (n+1, n) and (n, n+1) with amplitude
    G Gamma^n sqrt(n+1).

    The printed prefactor (2C)^-2 does not normalize the series; the state
    uses (sqrt(2) C^2)^-1 and keeps the printed value in printed_prefactor.
    """
    _check_inputs(params, truncation)

    prefactor = normalizing_prefactor(params)
    phase = cmath.exp(1j * params.phase_phi)
    injected_series = _injected_series(params, truncation)

    raw: Dict[Tuple[int, ...], complex] = {}
    branches: Dict[Tuple[int, ...], int] = {}
    for n in range(truncation + 1):
        raw[(n + 1, n)] = complex(prefactor * injected_series[n])
        branches[(n + 1, n)] = 0
        raw[(n, n + 1)] = prefactor * injected_series[n] * phase
        branches[(n, n + 1)] = 1

    return _finish(Configuration.DEGENERATE, params, truncation, DEGENERATE_MODES, raw, branches)


def build_output_state_noncollinear(
        params: OpaParams,
        truncation: int = DEFAULT_TRUNCATION,
        variant: NoncollinearVariant = NoncollinearVariant.TYPE_II,
        ) -> OutputState:
    """
    The non-collinear single-amplifier variants, injected over k1 and k2.

    Both the Type II (orthogonal polarizations) and Type I (equal
    polarizations) crystals give the swapped degenerate state with the
    output modes labelled k1 and k2.
    """
    variant = NoncollinearVariant(variant)
    return build_output_state_degenerate(params, truncation).relabel(NONCOLLINEAR_MODES[variant])


def build_output_state(
        params: OpaParams,
        configuration: Configuration,
        truncation: int = DEFAULT_TRUNCATION,
        ) -> OutputState:
    configuration = Configuration.parse(configuration)
    if configuration is Configuration.NONDEGENERATE:
        return build_output_state_nondegenerate(params, truncation)
    return build_output_state_degenerate(params, truncation)


def apply_pbs_swap(state: OutputState) -> OutputState:
    """
    Separates the two polarizations of k1 into the momentum modes k3 (perp)
    and k4 (par) with a polarizing beam splitter. Amplitudes are unchanged.

    Raises:
    - InvalidConfigurationError: if the state is not a degenerate k1 state
    """
    if not isinstance(state, OutputState):
        raise InvalidConfigurationError("The state must be an OutputState")
    if state.configuration is not Configuration.DEGENERATE or state.modes != DEGENERATE_MODES:
        raise InvalidConfigurationError(
            "Entanglement swapping needs a degenerate state on the k1 polarization modes"
        )
    return state.relabel(SWAPPED_MODES)


def input_state(configuration: Configuration, phase_phi: float) -> Dict[Tuple[int, ...], complex]:
    """The injected single-photon qubit (zero gain), as an amplitude table."""
    configuration = Configuration.parse(configuration)
    amplitude = 1.0 / math.sqrt(2.0)
    phase = cmath.exp(1j * phase_phi)
    if configuration is Configuration.NONDEGENERATE:
        return {(1, 0, 0, 0): complex(amplitude), (0, 1, 0, 0): amplitude * phase}
    return {(1, 0): complex(amplitude), (0, 1): amplitude * phase}


def find_branch_overlap(state: OutputState) -> Optional[Tuple[int, ...]]:
    """Returns an occupation tuple shared by both branches, or None."""
    shared = set(state.branch(0)) & set(state.branch(1))
    return min(shared) if shared else None
