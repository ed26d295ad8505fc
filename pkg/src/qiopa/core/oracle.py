"""
Brute-force truncated Fock-space engine.

Registers hold dense state vectors over mode_count modes with photon numbers
0..cutoff-1 per mode. The flat index of an occupation tuple is its row-major
(C-order) position, so (n_0, ..., n_{m-1}) -> sum n_k d^(m-1-k).
"""
import enum
import logging
import math
from typing import Dict, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import expm

from .errors import CutoffError, InvalidParameterError
from .params import Configuration, OpaParams

logger = logging.getLogger(__name__)

DEFAULT_CUTOFF_TOLERANCE = 1e-10
WORKING_TOLERANCE = 1e-30
LEAKAGE_TOLERANCE = 1e-6
PARITY_TOLERANCE = 1e-10
DISPLACEMENT_MARGIN = 30

MAX_PROPAGATOR_CUTOFF = 64
MAX_REGISTER_AMPLITUDES = 3_000_000
MAX_WORKING_CUTOFF = 4000


def annihilation(cutoff: int) -> np.ndarray:
    """The d x d annihilation matrix, sqrt(1..d-1) on the first superdiagonal."""
    return np.diagflat(np.sqrt(np.arange(1, cutoff, dtype=float)), 1)


def creation(cutoff: int) -> np.ndarray:
    return annihilation(cutoff).T


def number(cutoff: int) -> np.ndarray:
    return np.diagflat(np.arange(cutoff, dtype=float))


def displacement(cutoff: int, amplitude: complex) -> np.ndarray:
    """exp(alpha a^dag - alpha^* a) on the truncated space."""
    a = annihilation(cutoff)
    return expm(amplitude * a.T - np.conj(amplitude) * a)


class OperatorKind(enum.Enum):
    CREATE = "create"
    ANNIHILATE = "annihilate"
    NUMBER = "number"
    DISPLACEMENT = "displacement"
    SQUEEZE = "squeeze"


class ModeOperator:
    """
    A dense operator acting on one mode, or on an ordered pair of modes.

    For a pair (i, j) the matrix is indexed by p * cutoff + q with p the
    occupation of mode i and q that of mode j.

    Attributes:
    - kind (OperatorKind): what the operator represents
    - modes (Tuple[int, ...]): the register modes it acts on
    - cutoff (int): the per-mode dimension
    - matrix (np.ndarray): the dense complex matrix, read-only
    - amplitude (Optional[complex]): the displacement amplitude or squeeze gain
    """
    def __init__(
            self,
            kind: OperatorKind,
            modes: Tuple[int, ...],
            cutoff: int,
            matrix: np.ndarray,
            amplitude: Optional[complex] = None,
            ) -> None:
        # Check validity of inputs
        if not isinstance(kind, OperatorKind):
            raise InvalidParameterError("The kind must be an OperatorKind")
        modes = tuple(int(mode) for mode in modes)
        if len(modes) not in (1, 2) or len(set(modes)) != len(modes) or min(modes) < 0:
            raise InvalidParameterError(f"An operator acts on one mode or two distinct modes, got {modes}")
        size = cutoff ** len(modes)
        if matrix.shape != (size, size):
            raise InvalidParameterError(f"The matrix must be {size}x{size}, got {matrix.shape}")

        matrix = np.array(matrix, dtype=complex)
        matrix.setflags(write=False)
        self.kind = kind
        self.modes = modes
        self.cutoff = cutoff
        self.matrix = matrix
        self.amplitude = amplitude

    def __repr__(self) -> str:
        return f"ModeOperator({self.kind.value}, modes={self.modes}, cutoff={self.cutoff})"

    def dagger(self) -> "ModeOperator":
        kind = {
            OperatorKind.CREATE: OperatorKind.ANNIHILATE,
            OperatorKind.ANNIHILATE: OperatorKind.CREATE,
        }.get(self.kind, self.kind)
        amplitude = self.amplitude
        if amplitude is not None and self.kind in (OperatorKind.DISPLACEMENT, OperatorKind.SQUEEZE):
            amplitude = -amplitude
        return ModeOperator(kind, self.modes, self.cutoff, self.matrix.conj().T, amplitude)


def mode_operator(kind: Union[OperatorKind, str], mode: int, cutoff: int, amplitude: complex = 0j) -> ModeOperator:
    """
    Builds a single-mode operator.

    Raises:
    - InvalidParameterError: if the cutoff is below 2 or the kind is a squeeze
    """
    kind = OperatorKind(kind)
    _check_cutoff(cutoff)
    if kind is OperatorKind.CREATE:
        matrix = creation(cutoff)
    elif kind is OperatorKind.ANNIHILATE:
        matrix = annihilation(cutoff)
    elif kind is OperatorKind.NUMBER:
        matrix = number(cutoff)
    elif kind is OperatorKind.DISPLACEMENT:
        matrix = displacement(cutoff, complex(amplitude))
    else:
        raise InvalidParameterError("Use squeeze_propagator for two-mode squeezing")
    return ModeOperator(kind, (mode,), cutoff, matrix, complex(amplitude) if kind is OperatorKind.DISPLACEMENT else None)


def _check_cutoff(cutoff: int) -> None:
    if isinstance(cutoff, bool) or not isinstance(cutoff, (int, np.integer)) or cutoff < 2:
        raise InvalidParameterError(f"The cutoff must be an integer >= 2, got {cutoff!r}")


class FockRegister:
    """
    A dense multimode state vector in the truncated Fock basis.

    Attributes:
    - mode_count (int): the number of bosonic modes
    - cutoff (int): photons per mode range over 0..cutoff-1
    - state_vector (np.ndarray): length cutoff**mode_count, read-only
    """
    def __init__(self, mode_count: int, cutoff: int, state_vector: np.ndarray) -> None:
        """
        Raises:
        - InvalidParameterError: if the mode count or cutoff are invalid
        - InvalidParameterError: if the vector length does not match
        - InvalidParameterError: if the norm exceeds 1
        """
        # Check validity of inputs
        # 0. Check variable types
        if isinstance(mode_count, bool) or not isinstance(mode_count, (int, np.integer)) or mode_count < 1:
            raise InvalidParameterError(f"The mode count must be a positive integer, got {mode_count!r}")
        _check_cutoff(cutoff)
        # 1. Check the size
        state_vector = np.array(state_vector, dtype=complex).reshape(-1)
        if state_vector.size != cutoff ** mode_count:
            raise InvalidParameterError(
                f"A register with {mode_count} modes and cutoff {cutoff} needs "
                f"{cutoff ** mode_count} amplitudes, got {state_vector.size}"
            )
        # 2. Check the norm
        if np.linalg.norm(state_vector) > 1.0 + 1e-9:
            raise InvalidParameterError("The state vector norm must not exceed 1")

        state_vector.setflags(write=False)
        self.mode_count = int(mode_count)
        self.cutoff = int(cutoff)
        self.state_vector = state_vector

    @classmethod
    def from_tensor(cls, tensor: np.ndarray) -> "FockRegister":
        return cls(tensor.ndim, tensor.shape[0], tensor.reshape(-1))

    def __repr__(self) -> str:
        return f"FockRegister(modes={self.mode_count}, cutoff={self.cutoff}, norm={self.norm():.12f})"

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.cutoff,) * self.mode_count

    def tensor(self) -> np.ndarray:
        return self.state_vector.reshape(self.shape)

    def index_of(self, occupations: Sequence[int]) -> int:
        self._check_occupations(occupations)
        return int(np.ravel_multi_index(tuple(occupations), self.shape))

    def occupations_of(self, index: int) -> Tuple[int, ...]:
        return tuple(int(n) for n in np.unravel_index(index, self.shape))

    def _check_occupations(self, occupations: Sequence[int]) -> None:
        if len(occupations) != self.mode_count:
            raise InvalidParameterError(f"Expected {self.mode_count} occupations, got {len(occupations)}")
        for n in occupations:
            if n < 0 or n >= self.cutoff:
                raise InvalidParameterError(f"Occupation {n} is outside 0..{self.cutoff - 1}")

    def occupation_amplitude(self, occupations: Sequence[int]) -> complex:
        return complex(self.state_vector[self.index_of(occupations)])

    def norm(self) -> float:
        return float(np.linalg.norm(self.state_vector))

    def overlap(self, other: "FockRegister") -> complex:
        """<self|other>, embedding the smaller register into the larger cutoff."""
        if self.mode_count != other.mode_count:
            raise InvalidParameterError("Registers with different mode counts cannot overlap")
        cutoff = max(self.cutoff, other.cutoff)
        return complex(np.vdot(self.embed(cutoff).state_vector, other.embed(cutoff).state_vector))

    def embed(self, cutoff: int) -> "FockRegister":
        """Zero-pads into a larger cutoff; the same cutoff returns self."""
        if cutoff == self.cutoff:
            return self
        if cutoff < self.cutoff:
            raise InvalidParameterError(f"Cannot embed cutoff {self.cutoff} into the smaller cutoff {cutoff}")
        padded = np.zeros((cutoff,) * self.mode_count, dtype=complex)
        padded[(slice(0, self.cutoff),) * self.mode_count] = self.tensor()
        return FockRegister(self.mode_count, cutoff, padded.reshape(-1))

    def top_occupancy(self) -> float:
        """Probability that at least one mode holds cutoff-1 photons."""
        probabilities = np.abs(self.tensor()) ** 2
        inner = probabilities[(slice(0, self.cutoff - 1),) * self.mode_count]
        return float(np.sum(probabilities) - np.sum(inner))

    def apply(self, operator: ModeOperator) -> "FockRegister":
        return FockRegister.from_tensor(_apply_tensor(self.tensor(), operator))


def _apply_tensor(tensor: np.ndarray, operator: ModeOperator) -> np.ndarray:
    cutoff = tensor.shape[0]
    if operator.cutoff != cutoff:
        raise InvalidParameterError(
            f"The operator cutoff {operator.cutoff} does not match the register cutoff {cutoff}"
        )
    if max(operator.modes) >= tensor.ndim:
        raise InvalidParameterError(f"The operator acts on mode {max(operator.modes)} of a {tensor.ndim}-mode register")

    k = len(operator.modes)
    op_tensor = operator.matrix.reshape((cutoff,) * (2 * k))
    out = np.tensordot(op_tensor, tensor, axes=(list(range(k, 2 * k)), list(operator.modes)))
    return np.moveaxis(out, list(range(k)), list(operator.modes))


def _annihilate(tensor: np.ndarray, mode: int) -> np.ndarray:
    # out[.., n, ..] = sqrt(n + 1) psi[.., n + 1, ..]
    moved = np.moveaxis(tensor, mode, 0)
    out = np.zeros_like(moved)
    weights = np.sqrt(np.arange(1, moved.shape[0], dtype=float))
    out[:-1] = moved[1:] * weights.reshape((-1,) + (1,) * (moved.ndim - 1))
    return np.moveaxis(out, 0, mode)


def make_register(
        mode_count: int,
        cutoff: int,
        occupations: Optional[Sequence[int]] = None,
        superposition: Optional[Tuple[Sequence[int], Sequence[int]]] = None,
        phase_phi: float = 0.0,
        ) -> FockRegister:
    """
    Prepares a basis state, or the two-term superposition
    (|first> + exp(i phase_phi)|second>) / sqrt(2).

    Args:
    - mode_count (int): the number of modes
    - cutoff (int): the per-mode dimension, >= 2
    - occupations (Sequence[int]): the basis state, exclusive with superposition
    - superposition (Tuple): two distinct occupation tuples
    - phase_phi (float): the relative phase of the second term

    Raises:
    - InvalidParameterError: if neither or both of occupations and superposition are given
    - InvalidParameterError: if an occupation is not below the cutoff

    Returns: a unit-norm FockRegister
    """
    if (occupations is None) == (superposition is None):
        raise InvalidParameterError("Give exactly one of occupations and superposition")
    _check_cutoff(cutoff)
    if isinstance(mode_count, bool) or not isinstance(mode_count, (int, np.integer)) or mode_count < 1:
        raise InvalidParameterError(f"The mode count must be a positive integer, got {mode_count!r}")

    vector = np.zeros(cutoff ** mode_count, dtype=complex)
    register = FockRegister(mode_count, cutoff, vector)
    if occupations is not None:
        vector[register.index_of(occupations)] = 1.0
    else:
        first, second = superposition
        if tuple(first) == tuple(second):
            raise InvalidParameterError("The superposed occupations must differ")
        vector[register.index_of(first)] = 1.0 / math.sqrt(2.0)
        vector[register.index_of(second)] = np.exp(1j * phase_phi) / math.sqrt(2.0)
    return FockRegister(mode_count, cutoff, vector)


def input_register(configuration: Configuration, cutoff: int, phase_phi: float = 0.0) -> FockRegister:
    """The injected single-photon qubit with every other mode in vacuum."""
    configuration = Configuration.parse(configuration)
    if configuration is Configuration.NONDEGENERATE:
        return make_register(4, cutoff, superposition=((1, 0, 0, 0), (0, 1, 0, 0)), phase_phi=phase_phi)
    return make_register(2, cutoff, superposition=((1, 0), (0, 1)), phase_phi=phase_phi)


def cutoff_for_gain(gain: float, tolerance: float = DEFAULT_CUTOFF_TOLERANCE) -> int:
    """
    The smallest cutoff d >= 2 with Gamma^(2d) < tolerance.

    Raises:
    - InvalidParameterError: if the tolerance is not in (0, 1)
    """
    if not 0.0 < tolerance < 1.0:
        raise InvalidParameterError(f"The tolerance must be in (0, 1), got {tolerance}")
    ratio = OpaParams(gain).gamma_ratio
    if ratio == 0.0:
        return 2
    if ratio >= 1.0:
        raise CutoffError(f"No finite cutoff represents gain {gain}")
    cutoff = max(2, math.ceil(math.log(tolerance) / (2.0 * math.log(ratio))))
    while ratio ** (2 * cutoff) >= tolerance:
        cutoff += 1
    return cutoff


def check_register_size(mode_count: int, cutoff: int) -> None:
    """
    Raises:
    - CutoffError: if cutoff**mode_count exceeds the amplitude cap
    """
    if cutoff ** mode_count > MAX_REGISTER_AMPLITUDES:
        raise CutoffError(
            f"A {mode_count}-mode register at cutoff {cutoff} needs {cutoff ** mode_count} amplitudes, "
            f"above the cap of {MAX_REGISTER_AMPLITUDES}; use the closed-form path instead",
            suggested_cutoff=cutoff,
        )


def squeeze_generator(cutoff: int) -> np.ndarray:
    """a^dag b^dag - a b on the d^2 two-mode space."""
    a = annihilation(cutoff)
    return np.kron(a.T, a.T) - np.kron(a, a)


def squeeze_propagator(cutoff: int, mode_pair: Tuple[int, int], gain: float) -> ModeOperator:
    """
    Computes exp[g(a_i^dag a_j^dag - a_i a_j)] as a dense d^2 x d^2 matrix.

    The generator is anti-Hermitian, so i times it is Hermitian; it is
    diagonalized with eigh and exponentiated on its spectrum. It conserves
    n_i - n_j, so each conserved block is diagonalized on its own.

    Args:
    - cutoff (int): the per-mode dimension
    - mode_pair (Tuple[int, int]): two distinct register modes
    - gain (float): the amplification gain

    Raises:
    - InvalidParameterError: if the modes coincide or the gain is invalid
    - CutoffError: if the cutoff exceeds the dense propagator cap

    Returns: a SQUEEZE ModeOperator
    """
    # Check validity of inputs
    _check_cutoff(cutoff)
    if len(mode_pair) != 2 or mode_pair[0] == mode_pair[1]:
        raise InvalidParameterError(f"Two-mode squeezing needs two distinct modes, got {mode_pair}")
    params = OpaParams(gain)
    if cutoff > MAX_PROPAGATOR_CUTOFF:
        raise CutoffError(
            f"A dense propagator at cutoff {cutoff} exceeds the cap of {MAX_PROPAGATOR_CUTOFF}",
            suggested_cutoff=MAX_PROPAGATOR_CUTOFF,
        )

    hermitian = 1j * squeeze_generator(cutoff)
    occupations = np.arange(cutoff)
    difference = (occupations[:, None] - occupations[None, :]).reshape(-1)
    propagator = np.zeros((cutoff ** 2, cutoff ** 2), dtype=complex)
    for block in range(-(cutoff - 1), cutoff):
        indices = np.flatnonzero(difference == block)
        eigenvalues, eigenvectors = np.linalg.eigh(hermitian[np.ix_(indices, indices)])
        phases = np.exp(-1j * params.gain * eigenvalues)
        propagator[np.ix_(indices, indices)] = (eigenvectors * phases) @ eigenvectors.conj().T

    return ModeOperator(OperatorKind.SQUEEZE, tuple(mode_pair), cutoff, propagator, params.gain)


def propagate(register: FockRegister, mode_pair: Tuple[int, int], gain: float) -> FockRegister:
    """
    Applies the two-mode squeeze propagator to a register.

    Raises:
    - CutoffError: if more than 1e-6 of the output probability reaches the
        top level, with the policy cutoff as suggestion
    """
    output = register.apply(squeeze_propagator(register.cutoff, mode_pair, gain))
    leakage = output.top_occupancy()
    if leakage > LEAKAGE_TOLERANCE:
        raise CutoffError(
            f"Cutoff {register.cutoff} is too small for gain {gain}: {leakage:.2e} of the "
            f"probability reaches the top level",
            suggested_cutoff=max(cutoff_for_gain(gain), register.cutoff + 1),
        )
    return output


def pair_evolution(gain: float, occupations: Tuple[int, int], cutoff: int) -> np.ndarray:
    """
    The two-mode squeezed image U|p, q> as a cutoff x cutoff amplitude table.

    Only the block with n_0 - n_1 = p - q is populated, so the evolution is
    carried out on that tridiagonal block at a working cutoff well above the
    requested one and then cropped.

    Raises:
    - CutoffError: if the working cutoff exceeds its cap
    """
    params = OpaParams(gain)
    p, q = (int(n) for n in occupations)
    if p < 0 or q < 0:
        raise InvalidParameterError(f"Occupations must be non-negative, got {occupations}")
    _check_cutoff(cutoff)

    offset = abs(p - q)
    working = max(cutoff, min(p, q) + 2, cutoff_for_gain(params.gain, WORKING_TOLERANCE)) + 2
    if working > MAX_WORKING_CUTOFF:
        raise CutoffError(f"Gain {gain} needs a working cutoff of {working}", suggested_cutoff=working)

    # block basis e_n = |n + offset, n> (or its mirror)
    n = np.arange(working - 1, dtype=float)
    coupling = np.sqrt((n + 1.0) * (n + 1.0 + offset))
    generator = np.diag(coupling, -1) - np.diag(coupling, 1)
    column = expm(params.gain * generator)[:, min(p, q)]

    table = np.zeros((cutoff, cutoff), dtype=complex)
    for index, amplitude in enumerate(column):
        low = index
        high = index + offset
        if high >= cutoff:
            break
        if p >= q:
            table[high, low] = amplitude
        else:
            table[low, high] = amplitude
    return table


def oracle_output_state(
        params: OpaParams,
        configuration: Configuration,
        cutoff: Optional[int] = None,
        tolerance: float = DEFAULT_CUTOFF_TOLERANCE,
        ) -> FockRegister:
    """
    Propagates the injected qubit through the amplifier(s) numerically.

    The non-degenerate register uses the mode order (k1 perp, k1 par,
    k2 perp, k2 par); amplifier A couples (k1 perp, k2 par) and amplifier B
    couples (k1 par, k2 perp). The result is not renormalized, so its norm
    falls short of 1 by the tail cut at the cutoff.

    Raises:
    - CutoffError: if the register would exceed the amplitude cap
    """
    configuration = Configuration.parse(configuration)
    if cutoff is None:
        cutoff = cutoff_for_gain(params.gain, tolerance)
    _check_cutoff(cutoff)
    check_register_size(configuration.mode_count, cutoff)

    phase = np.exp(1j * params.phase_phi)
    excited = pair_evolution(params.gain, (1, 0), cutoff)
    if configuration is Configuration.NONDEGENERATE:
        vacuum = pair_evolution(params.gain, (0, 0), cutoff)
        # tensor[a, b, c, d] = pair A[a, d] * pair B[b, c]
        tensor = (
            np.einsum("ad,bc->abcd", excited, vacuum)
            + phase * np.einsum("ad,bc->abcd", vacuum, excited)
        ) / math.sqrt(2.0)
    else:
        mirrored = pair_evolution(params.gain, (0, 1), cutoff)
        tensor = (excited + phase * mirrored) / math.sqrt(2.0)

    logger.debug("Oracle %s state at cutoff %d", configuration.value, cutoff)
    return FockRegister.from_tensor(tensor)


def oracle_vacuum_state(
        params: OpaParams,
        configuration: Configuration,
        cutoff: Optional[int] = None,
        tolerance: float = DEFAULT_CUTOFF_TOLERANCE,
        ) -> FockRegister:
    """The squeezed vacuum, the output with the injection removed."""
    configuration = Configuration.parse(configuration)
    if cutoff is None:
        cutoff = cutoff_for_gain(params.gain, tolerance)
    _check_cutoff(cutoff)
    check_register_size(configuration.mode_count, cutoff)

    vacuum = pair_evolution(params.gain, (0, 0), cutoff)
    if configuration is Configuration.NONDEGENERATE:
        return FockRegister.from_tensor(np.einsum("ad,bc->abcd", vacuum, vacuum))
    return FockRegister.from_tensor(vacuum)


def register_from_amplitudes(
        mode_count: int,
        cutoff: int,
        amplitudes: Mapping[Tuple[int, ...], complex],
        ) -> FockRegister:
    """Embeds an amplitude table, dropping tuples at or above the cutoff."""
    tensor = np.zeros((cutoff,) * mode_count, dtype=complex)
    for occupations, value in amplitudes.items():
        if len(occupations) != mode_count:
            raise InvalidParameterError(f"Expected {mode_count} occupations, got {occupations}")
        if max(occupations) < cutoff:
            tensor[tuple(occupations)] = value
    return FockRegister.from_tensor(tensor)


def expectation(register: FockRegister, operators: Union[ModeOperator, Sequence[ModeOperator]]) -> complex:
    """
    <psi| O_1 O_2 ... O_k |psi>, the rightmost operator applied first.

    Raises:
    - InvalidParameterError: if an operator's dimension does not match
    """
    if isinstance(operators, ModeOperator):
        operators = [operators]
    tensor = register.tensor()
    for operator in reversed(list(operators)):
        tensor = _apply_tensor(tensor, operator)
    return complex(np.vdot(register.state_vector, tensor.reshape(-1)))


Field = Mapping[int, complex]


def _apply_field(tensor: np.ndarray, field: Field) -> np.ndarray:
    out = np.zeros_like(tensor)
    for mode, coefficient in field.items():
        if coefficient != 0:
            out = out + coefficient * _annihilate(tensor, mode)
    return out


def field_intensity(register: FockRegister, field: Field) -> float:
    """<c^dag c> for the detected field c = sum_k field[k] a_k."""
    return float(np.sum(np.abs(_apply_field(register.tensor(), field)) ** 2))


def field_coincidence(register: FockRegister, first: Field, second: Field) -> float:
    """<c_1^dag c_2^dag c_2 c_1>, the normal-ordered coincidence rate."""
    lowered = _apply_field(_apply_field(register.tensor(), first), second)
    return float(np.sum(np.abs(lowered) ** 2))


def wigner_by_displacement(
        register: FockRegister,
        amplitudes: Sequence[complex],
        modes: Optional[Sequence[int]] = None,
        margin: int = DISPLACEMENT_MARGIN,
        ) -> float:
    """
    The (reduced) Wigner function as a displaced parity:
    W = (2/pi)^k sum_n (-1)^(n on the kept modes) |<n|D(-alpha)|psi>|^2.

    Args:
    - register (FockRegister): the state
    - amplitudes (Sequence[complex]): one phase-space amplitude per kept mode
    - modes (Sequence[int]): the kept modes, all modes by default
    - margin (int): extra levels added before displacing

    Raises:
    - InvalidParameterError: if the amplitudes do not match the kept modes
    - CutoffError: if the displaced state reaches the top level

    Returns: the Wigner value in the d^2 alpha = dRe dIm convention
    """
    if modes is None:
        modes = list(range(register.mode_count))
    modes = [int(mode) for mode in modes]
    if len(amplitudes) != len(modes):
        raise InvalidParameterError(f"Expected {len(modes)} amplitudes, got {len(amplitudes)}")
    if len(set(modes)) != len(modes) or min(modes) < 0 or max(modes) >= register.mode_count:
        raise InvalidParameterError(f"Invalid mode subset {modes}")

    cutoff = register.cutoff + margin
    tensor = register.embed(cutoff).tensor()
    for mode, amplitude in zip(modes, amplitudes):
        tensor = _apply_tensor(tensor, mode_operator(OperatorKind.DISPLACEMENT, mode, cutoff, -complex(amplitude)))

    probabilities = np.abs(tensor) ** 2
    top = float(np.sum(probabilities) - np.sum(probabilities[(slice(0, cutoff - 1),) * tensor.ndim]))
    if top > PARITY_TOLERANCE:
        raise CutoffError(
            f"The displaced state leaks {top:.2e} into the top level; increase the margin",
            suggested_cutoff=cutoff + margin,
        )

    parity = np.ones(())
    signs = (-1.0) ** np.arange(cutoff)
    for axis in range(tensor.ndim):
        shape = [1] * tensor.ndim
        if axis in modes:
            shape[axis] = cutoff
            parity = parity * signs.reshape(shape)
    return float((2.0 / math.pi) ** len(modes) * np.sum(parity * probabilities))


def register_to_dict(register: FockRegister, threshold: float = 1e-12) -> Dict[str, object]:
    """A debug dump of the non-negligible amplitudes."""
    entries = []
    for index in np.flatnonzero(np.abs(register.state_vector) > threshold):
        value = register.state_vector[index]
        entries.append({"occupations": list(register.occupations_of(int(index))), "re": value.real, "im": value.imag})
    return {
        "schema_version": 1,
        "mode_count": register.mode_count,
        "cutoff": register.cutoff,
        "norm": register.norm(),
        "entries": entries,
    }
