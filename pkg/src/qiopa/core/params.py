import enum
import math

import numpy as np

from .errors import InvalidParameterError

# Keeps every power of cosh g and e^g the closed forms take inside double range
MAX_GAIN = 50.0


class Configuration(enum.Enum):
    """
    The two optical layouts of the quantum-injected amplifier.

    - NONDEGENERATE: two independent amplifiers over the modes k1, k2 with
        two polarizations each (four bosonic modes)
    - DEGENERATE: a single collinear amplifier over the two polarizations
        of k1 (two bosonic modes)
    """
    NONDEGENERATE = "nondegenerate"
    DEGENERATE = "degenerate"

    @property
    def mode_count(self) -> int:
        return 4 if self is Configuration.NONDEGENERATE else 2

    @classmethod
    def parse(cls, value) -> "Configuration":
        """
        Accepts a Configuration or one of its (case-insensitive) names.

        Raises:
        - InvalidParameterError: if the value names no configuration
        """
        if isinstance(value, Configuration):
            return value
        if isinstance(value, str):
            for member in cls:
                if value.strip().lower() in (member.value, member.name.lower()):
                    return member
        raise InvalidParameterError(f"Unknown configuration {value!r}")


class OpaParams:
    """
    The gain and injection phase of the amplifier, with the hyperbolic
    coefficients every closed form is written in.

    Attributes:
    - gain (float): the dimensionless gain g = chi * t, g >= 0
    - phase_phi (float): the injection phase Phi in radians

    Derived (read-only):
    - cosh_c (float): C = cosh g
    - sinh_s (float): S = sinh g
    - gamma_ratio (float): Gamma = S / C = tanh g
    - mean_photons (float): nbar = S^2
    """
    __slots__ = ("_gain", "_phase_phi")

    def __init__(self, gain: float, phase_phi: float = 0.0) -> None:
        """
        Initializes the parameter set.

        Args:
        - gain (float): the amplification gain, finite and non-negative
        - phase_phi (float): the injection phase, finite

        Raises:
        - InvalidParameterError: if the gain is negative or not finite
        - InvalidParameterError: if the gain exceeds MAX_GAIN
        - InvalidParameterError: if the phase is not finite

        Returns: None
        """
        # Check validity of inputs
        # 0. Check variable types
        if isinstance(gain, bool) or not isinstance(gain, (int, float, np.floating, np.integer)):
            raise InvalidParameterError("The gain must be a real number")
        if isinstance(phase_phi, bool) or not isinstance(phase_phi, (int, float, np.floating, np.integer)):
            raise InvalidParameterError("The phase must be a real number")
        # 1. Check ranges
        if not math.isfinite(gain) or gain < 0:
            raise InvalidParameterError(f"The gain must be finite and non-negative, got {gain}")
        if gain > MAX_GAIN:
            raise InvalidParameterError(f"The gain must be at most {MAX_GAIN}, got {gain}")
        if not math.isfinite(phase_phi):
            raise InvalidParameterError(f"The phase must be finite, got {phase_phi}")

        self._gain = float(gain)
        self._phase_phi = float(phase_phi)

    @property
    def gain(self) -> float:
        return self._gain

    @property
    def phase_phi(self) -> float:
        return self._phase_phi

    @property
    def cosh_c(self) -> float:
        return math.cosh(self._gain)

    @property
    def sinh_s(self) -> float:
        return math.sinh(self._gain)

    @property
    def gamma_ratio(self) -> float:
        return math.tanh(self._gain)

    @property
    def mean_photons(self) -> float:
        return self.sinh_s ** 2

    def with_phase(self, phase_phi: float) -> "OpaParams":
        return OpaParams(self._gain, phase_phi)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OpaParams):
            return NotImplemented
        return self._gain == other._gain and self._phase_phi == other._phase_phi

    def __hash__(self) -> int:
        return hash((self._gain, self._phase_phi))

    def __repr__(self) -> str:
        return f"OpaParams(gain={self._gain!r}, phase_phi={self._phase_phi!r})"


def derive_params(gain: float, phase_phi: float = 0.0) -> OpaParams:
    """Builds an OpaParams; see OpaParams for the validation rules."""
    return OpaParams(gain, phase_phi)


def gain_for_mean_photons(mean_photons: float) -> float:
    """
    Inverts nbar = sinh(g)^2.

    Raises:
    - InvalidParameterError: if the mean photon number is negative or not finite
    """
    if not math.isfinite(mean_photons) or mean_photons < 0:
        raise InvalidParameterError(f"The mean photon number must be finite and non-negative, got {mean_photons}")
    return math.asinh(math.sqrt(mean_photons))


class ThermalDistribution:
    """
    The photon-number distribution of the squeezed vacuum on each output
    mode, P_n = nbar^n / (1 + nbar)^(1 + n) = Gamma^(2n) / C^2.

    Attributes:
    - weights (np.ndarray): P_0 .. P_nmax
    - tail_bound (float): the probability mass beyond n_max, Gamma^(2(n_max + 1))
    """
    def __init__(self, weights: np.ndarray, tail_bound: float) -> None:
        weights = np.asarray(weights, dtype=float)
        weights.setflags(write=False)
        self.weights = weights
        self.tail_bound = float(tail_bound)

    @property
    def n_max(self) -> int:
        return len(self.weights) - 1

    def partial_sum(self) -> float:
        return float(np.sum(self.weights))

    def mean(self) -> float:
        return float(np.dot(np.arange(len(self.weights)), self.weights))

    def __repr__(self) -> str:
        return f"ThermalDistribution(n_max={self.n_max}, tail_bound={self.tail_bound:.3e})"


def thermal_weights(params: OpaParams, n_max: int) -> ThermalDistribution:
    """
    Tabulates the thermal distribution of the squeezed vacuum.

    Args:
    - params (OpaParams): the amplifier parameters
    - n_max (int): the largest photon number tabulated

    Raises:
    - InvalidParameterError: if n_max is not a non-negative integer

    Returns: a ThermalDistribution with weights P_0 .. P_nmax
    """
    if not isinstance(params, OpaParams):
        raise InvalidParameterError("The params must be an OpaParams")
    if isinstance(n_max, bool) or not isinstance(n_max, (int, np.integer)) or n_max < 0:
        raise InvalidParameterError(f"n_max must be a non-negative integer, got {n_max!r}")

    x = params.gamma_ratio ** 2
    n = np.arange(n_max + 1)
    weights = np.power(x, n) / params.cosh_c ** 2
    return ThermalDistribution(weights, x ** (n_max + 1))
