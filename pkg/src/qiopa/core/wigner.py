"""
Closed-form Wigner functions of the amplified qubit, in the squeezed
phase-space variables.

Real coordinates follow the axis names in AXES; the phase-space measure is
d^2 alpha = d Re(alpha) d Im(alpha), under which every Wigner function here
integrates to one. Marginals are densities in the kept squeezed coordinates.
"""
import cmath
import itertools
import logging
import math
from typing import Dict, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from .errors import (
    GridSizeError,
    InvalidConfigurationError,
    InvalidParameterError,
    QuadratureOrderError,
)
from .params import Configuration, OpaParams

logger = logging.getLogger(__name__)

AXES = {
    Configuration.NONDEGENERATE: (
        "re_gamma_a_plus", "im_gamma_a_plus", "re_gamma_a_minus", "im_gamma_a_minus",
        "re_gamma_b_plus", "im_gamma_b_plus", "re_gamma_b_minus", "im_gamma_b_minus",
    ),
    Configuration.DEGENERATE: (
        "re_gamma_a_plus", "im_gamma_a_plus", "re_gamma_a_minus", "im_gamma_a_minus",
    ),
}

# d^2 gamma = JACOBIAN * d^2 alpha over the whole phase space
JACOBIAN = {Configuration.NONDEGENERATE: 16.0, Configuration.DEGENERATE: 4.0}

# -W at the origin of the squeezed variables
PEAK = {Configuration.NONDEGENERATE: 16.0 / math.pi ** 4, Configuration.DEGENERATE: 4.0 / math.pi ** 2}

DEFAULT_QUADRATURE_ORDER = 5
MIN_QUADRATURE_ORDER = 3
DEFAULT_MAX_SAMPLES = 1_000_000

# Delta = (gamma_plus - i gamma_minus) / sqrt(2) over (Re g+, Im g+, Re g-, Im g-)
_DELTA = np.array([1.0, 1.0j, -1.0j, 1.0]) / math.sqrt(2.0)
# The degenerate Delta_B over the A coordinates, since gamma_B = conj(gamma_A)
_DELTA_B_DEGENERATE = np.array([1.0, -1.0j, -1.0j, -1.0]) / math.sqrt(2.0)


def convention_constant(configuration: Configuration) -> float:
    """
    The factor converting the displaced-parity Wigner function into the
    closed-form convention. It is fixed by matching the two at the origin,
    where both give (2/pi)^m times the output parity.
    """
    Configuration.parse(configuration)
    return 1.0


class PhasePoint:
    """
    A point of the output phase space.

    Attributes:
    - configuration (Configuration): the layout the point belongs to
    - alphas (Tuple[complex, ...]): (alpha_1, alpha_2), or (alpha,) for the
        degenerate layout
    - betas (Tuple[complex, ...]): (beta_1, beta_2), or (beta,)

    The non-degenerate alpha_1, alpha_2 are the amplitudes of k1 perp and
    k2 par (amplifier A), beta_1, beta_2 those of k1 par and k2 perp. The
    degenerate alpha, beta are k1 perp and k1 par.
    """
    __slots__ = ("configuration", "alphas", "betas")

    def __init__(self, configuration: Configuration, alphas: Sequence[complex], betas: Sequence[complex]) -> None:
        configuration = Configuration.parse(configuration)
        size = 2 if configuration is Configuration.NONDEGENERATE else 1
        alphas = tuple(complex(value) for value in alphas)
        betas = tuple(complex(value) for value in betas)
        if len(alphas) != size or len(betas) != size:
            raise InvalidParameterError(
                f"A {configuration.value} point needs {size} alpha and {size} beta values"
            )
        if not all(cmath.isfinite(value) for value in alphas + betas):
            raise InvalidParameterError("Phase-space components must be finite")

        self.configuration = configuration
        self.alphas = alphas
        self.betas = betas

    @classmethod
    def origin(cls, configuration: Configuration) -> "PhasePoint":
        configuration = Configuration.parse(configuration)
        size = 2 if configuration is Configuration.NONDEGENERATE else 1
        return cls(configuration, (0j,) * size, (0j,) * size)

    def mode_amplitudes(self) -> Tuple[complex, ...]:
        """The amplitudes in register mode order (k1 perp, k1 par, k2 perp, k2 par)."""
        if self.configuration is Configuration.NONDEGENERATE:
            return (self.alphas[0], self.betas[0], self.betas[1], self.alphas[1])
        return (self.alphas[0], self.betas[0])

    def __repr__(self) -> str:
        return f"PhasePoint({self.configuration.value}, alphas={self.alphas}, betas={self.betas})"


class SqueezedCoords(NamedTuple):
    gamma_a_plus: complex
    gamma_a_minus: complex
    gamma_b_plus: complex
    gamma_b_minus: complex

    def real_coordinates(self, configuration: Configuration) -> np.ndarray:
        """The point on AXES[configuration]."""
        configuration = Configuration.parse(configuration)
        values = [self.gamma_a_plus, self.gamma_a_minus]
        if configuration is Configuration.NONDEGENERATE:
            values += [self.gamma_b_plus, self.gamma_b_minus]
        return np.array([part for value in values for part in (value.real, value.imag)])


class WignerValue(NamedTuple):
    """value = -vacuum_envelope_a * vacuum_envelope_b * (1 - superposition_modulus_sq)"""
    value: float
    vacuum_envelope_a: float
    vacuum_envelope_b: float
    superposition_modulus_sq: float


def _pair_coords(gain: float, first, second) -> Tuple:
    plus = (first + np.conj(second)) * math.exp(-gain)
    minus = 1j * (first - np.conj(second)) * math.exp(gain)
    return plus, minus


def _squeezed_arrays(gain: float, configuration: Configuration, alphas, betas) -> Tuple:
    if configuration is Configuration.NONDEGENERATE:
        a_plus, a_minus = _pair_coords(gain, alphas[0], alphas[1])
        b_plus, b_minus = _pair_coords(gain, betas[0], betas[1])
    else:
        a_plus, a_minus = _pair_coords(gain, alphas[0], betas[0])
        b_plus, b_minus = _pair_coords(gain, betas[0], alphas[0])
    return a_plus, a_minus, b_plus, b_minus


def _points_from_real(gain: float, configuration: Configuration, x: np.ndarray) -> Tuple:
    # inverse of _pair_coords: u = first + conj(second), v = first - conj(second)
    def unpair(plus, minus):
        u = plus * math.exp(gain)
        v = -1j * minus * math.exp(-gain)
        return (u + v) / 2.0, np.conj((u - v) / 2.0)

    a_plus = x[..., 0] + 1j * x[..., 1]
    a_minus = x[..., 2] + 1j * x[..., 3]
    first, second = unpair(a_plus, a_minus)
    if configuration is Configuration.DEGENERATE:
        return (first,), (second,)
    b_plus = x[..., 4] + 1j * x[..., 5]
    b_minus = x[..., 6] + 1j * x[..., 7]
    beta_1, beta_2 = unpair(b_plus, b_minus)
    return (first, second), (beta_1, beta_2)


def _evaluate(phase_phi: float, configuration: Configuration, gammas: Tuple) -> Tuple:
    a_plus, a_minus, b_plus, b_minus = gammas
    radius_a = np.abs(a_plus) ** 2 + np.abs(a_minus) ** 2
    radius_b = np.abs(b_plus) ** 2 + np.abs(b_minus) ** 2
    delta_a = (a_plus - 1j * a_minus) / math.sqrt(2.0)
    delta_b = (b_plus - 1j * b_minus) / math.sqrt(2.0)
    superposition = np.abs(cmath.exp(1j * phase_phi) * delta_a + delta_b) ** 2
    if configuration is Configuration.NONDEGENERATE:
        envelope_a = 4.0 / math.pi ** 2 * np.exp(-radius_a)
        envelope_b = 4.0 / math.pi ** 2 * np.exp(-radius_b)
    else:
        envelope_a = 2.0 / math.pi * np.exp(-0.5 * radius_a)
        envelope_b = 2.0 / math.pi * np.exp(-0.5 * radius_b)
    value = -envelope_a * envelope_b * (1.0 - superposition)
    return value, envelope_a, envelope_b, superposition


def _evaluate_real(params: OpaParams, configuration: Configuration, x: np.ndarray) -> np.ndarray:
    alphas, betas = _points_from_real(params.gain, configuration, x)
    gammas = _squeezed_arrays(params.gain, configuration, alphas, betas)
    return _evaluate(params.phase_phi, configuration, gammas)


def characteristic_function(
        params: OpaParams,
        configuration: Configuration,
        etas: Sequence[complex],
        xis: Sequence[complex],
        ) -> complex:
    """
    The symmetrically ordered characteristic function of the output state,
    chi = {1 - |exp(i Phi) eta_1(t) + xi_1(t)|^2 / 2} exp[-sum(|eta_j(t)|^2 + |xi_j(t)|^2) / 2].

    Non-degenerate: eta_1(t) = C eta_1 - S eta_2^*, eta_2(t) = C eta_2 - S eta_1^*
    and likewise for xi. Degenerate (etas = (eta,), xis = (xi,)):
    eta(t) = C eta - S xi^*, xi(t) = C xi - S eta^*.

    Works elementwise on arrays as well as on scalars.

    Raises:
    - InvalidParameterError: if the variable counts do not match the configuration
    """
    configuration = Configuration.parse(configuration)
    size = 2 if configuration is Configuration.NONDEGENERATE else 1
    if len(etas) != size or len(xis) != size:
        raise InvalidParameterError(f"A {configuration.value} characteristic function takes {size} eta and {size} xi")

    c, s = params.cosh_c, params.sinh_s
    if configuration is Configuration.NONDEGENERATE:
        eta_1, eta_2 = etas
        xi_1, xi_2 = xis
        evolved = [
            c * eta_1 - s * np.conj(eta_2),
            c * eta_2 - s * np.conj(eta_1),
            c * xi_1 - s * np.conj(xi_2),
            c * xi_2 - s * np.conj(xi_1),
        ]
        lead_eta, lead_xi = evolved[0], evolved[2]
    else:
        (eta,), (xi,) = etas, xis
        evolved = [c * eta - s * np.conj(xi), c * xi - s * np.conj(eta)]
        lead_eta, lead_xi = evolved

    bracket = 1.0 - 0.5 * np.abs(np.exp(1j * params.phase_phi) * lead_eta + lead_xi) ** 2
    gaussian = np.exp(-0.5 * sum(np.abs(value) ** 2 for value in evolved))
    result = bracket * gaussian + 0j
    return complex(result) if np.ndim(result) == 0 else result


def squeezed_coords(params: OpaParams, point: PhasePoint) -> SqueezedCoords:
    """
    gamma_+ = (first + second^*) e^-g and gamma_- = i (first - second^*) e^g,
    with (first, second) = (alpha_1, alpha_2) for A and (beta_1, beta_2) for B,
    or (alpha, beta) for A and (beta, alpha) for B in the degenerate layout.
    """
    gammas = _squeezed_arrays(params.gain, point.configuration, point.alphas, point.betas)
    return SqueezedCoords(*(complex(value) for value in gammas))


def point_from_coords(params: OpaParams, configuration: Configuration, x: Sequence[float]) -> PhasePoint:
    """Inverts squeezed_coords from a vector on AXES[configuration]."""
    configuration = Configuration.parse(configuration)
    x = np.asarray(x, dtype=float)
    if x.shape != (len(AXES[configuration]),):
        raise InvalidParameterError(f"Expected {len(AXES[configuration])} coordinates, got {x.shape}")
    alphas, betas = _points_from_real(params.gain, configuration, x)
    return PhasePoint(configuration, alphas, betas)


def wigner_closed_form(params: OpaParams, point: PhasePoint) -> WignerValue:
    """
    W = -W_A W_B [1 - |exp(i Phi) Delta_A + Delta_B|^2], Delta = (gamma_+ - i gamma_-) / sqrt(2).

    Non-degenerate envelopes are (4/pi^2) exp(-(|gamma_+|^2 + |gamma_-|^2))
    per amplifier. In the degenerate layout |gamma_B| = |gamma_A| and the
    envelopes are (2/pi) exp(-(|gamma_+|^2 + |gamma_-|^2)/2), so the product
    is (4/pi^2) exp(-(|gamma_A+|^2 + |gamma_A-|^2)).
    """
    gammas = squeezed_coords(params, point)
    value, envelope_a, envelope_b, superposition = _evaluate(params.phase_phi, point.configuration, gammas)
    return WignerValue(float(value), float(envelope_a), float(envelope_b), float(superposition))


def wigner_printed(params: OpaParams, point: PhasePoint) -> WignerValue:
    """
    The closed form exactly as printed: both envelopes (4/pi^2) exp(-(|gamma_+|^2 + |gamma_-|^2)),
    with the degenerate product rescaled by pi^2/4. In the degenerate layout
    this doubles the Gaussian exponent; it agrees with wigner_closed_form at
    the origin only.
    """
    a_plus, a_minus, b_plus, b_minus = squeezed_coords(params, point)
    _, _, _, superposition = _evaluate(params.phase_phi, point.configuration, (a_plus, a_minus, b_plus, b_minus))
    envelope_a = 4.0 / math.pi ** 2 * math.exp(-(abs(a_plus) ** 2 + abs(a_minus) ** 2))
    envelope_b = 4.0 / math.pi ** 2 * math.exp(-(abs(b_plus) ** 2 + abs(b_minus) ** 2))
    scale = math.pi ** 2 / 4.0 if point.configuration is Configuration.DEGENERATE else 1.0
    value = -scale * envelope_a * envelope_b * (1.0 - superposition)
    return WignerValue(float(value), envelope_a, envelope_b, float(superposition))


def superposition_coefficients(phase_phi: float, configuration: Configuration) -> np.ndarray:
    """The complex l with exp(i Phi) Delta_A + Delta_B = l . x on AXES[configuration]."""
    configuration = Configuration.parse(configuration)
    phase = cmath.exp(1j * phase_phi)
    if configuration is Configuration.NONDEGENERATE:
        return np.concatenate([phase * _DELTA, _DELTA])
    return phase * _DELTA + _DELTA_B_DEGENERATE


def hermgauss_nodes(order: int, dims: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Tensor-product Gauss-Hermite nodes (order**dims x dims) and weights for
    integrals of exp(-|x|^2) f(x).

    Raises:
    - QuadratureOrderError: if the order is below 3
    """
    if isinstance(order, bool) or not isinstance(order, (int, np.integer)):
        raise QuadratureOrderError(f"The quadrature order must be an integer, got {order!r}")
    if order < MIN_QUADRATURE_ORDER:
        raise QuadratureOrderError(
            f"Quadrature order {order} is below {MIN_QUADRATURE_ORDER}, the smallest exact order"
        )
    nodes, weights = np.polynomial.hermite.hermgauss(order)
    x = np.array(list(itertools.product(*(nodes,) * dims))).reshape(-1, dims)
    w = np.prod(np.array(list(itertools.product(*(weights,) * dims))).reshape(-1, dims), axis=1)
    return x, w


def wigner_normalization(
        params: OpaParams,
        configuration: Configuration,
        order: int = DEFAULT_QUADRATURE_ORDER,
        ) -> float:
    """
    Integrates W over the whole phase space by Gauss-Hermite quadrature in
    the squeezed coordinates. The integrand is a Gaussian times a quadratic,
    so any order >= 3 is exact.

    Raises:
    - QuadratureOrderError: if the order is below 3

    Returns: the integral, 1 up to rounding
    """
    configuration = Configuration.parse(configuration)
    x, w = hermgauss_nodes(order, len(AXES[configuration]))
    value, _, _, _ = _evaluate_real(params, configuration, x)
    integral = float(np.sum(w * value * np.exp(np.sum(x ** 2, axis=1)))) / JACOBIAN[configuration]
    logger.debug("Normalization %s g=%s phi=%s: %.15f", configuration.value, params.gain, params.phase_phi, integral)
    return integral


def envelope_normalization(
        params: OpaParams,
        configuration: Configuration,
        order: int = DEFAULT_QUADRATURE_ORDER,
        ) -> float:
    """
    Integrates the vacuum envelope: W_A over (alpha_1, alpha_2) for the
    non-degenerate layout, W_A W_B over (alpha, beta) for the degenerate one.
    """
    configuration = Configuration.parse(configuration)
    x, w = hermgauss_nodes(order, 4)
    if configuration is Configuration.NONDEGENERATE:
        full = np.concatenate([x, np.zeros_like(x)], axis=1)
        _, envelope, _, _ = _evaluate_real(params, configuration, full)
    else:
        _, envelope_a, envelope_b, _ = _evaluate_real(params, configuration, x)
        envelope = envelope_a * envelope_b
    return float(np.sum(w * envelope * np.exp(np.sum(x ** 2, axis=1)))) / 4.0


def _axis_indices(configuration: Configuration, axes: Sequence[str]) -> list:
    names = AXES[configuration]
    indices = []
    for axis in axes:
        if axis not in names:
            raise InvalidParameterError(
                f"Unknown axis {axis!r} for the {configuration.value} layout; expected one of {', '.join(names)}"
            )
        indices.append(names.index(axis))
    if len(set(indices)) != len(indices):
        raise InvalidParameterError("Axes must not repeat")
    return indices


def _check_partition(configuration: Configuration, kept_axes: Sequence[str], integrated_axes: Sequence[str]) -> Tuple[list, list]:
    kept = _axis_indices(configuration, kept_axes)
    integrated = _axis_indices(configuration, integrated_axes)
    if set(kept) & set(integrated):
        raise InvalidParameterError("Kept and integrated axes overlap")
    if len(kept) + len(integrated) != len(AXES[configuration]):
        raise InvalidParameterError("Kept and integrated axes must cover every phase-space axis")
    return kept, integrated


def _marginal_parts(params: OpaParams, configuration: Configuration, kept: list, integrated: list, x_kept: np.ndarray) -> Tuple:
    # integrating exp(-|x|^2)(1 - |l.x|^2) over x_I leaves
    # pi^(|I|/2) exp(-|x_K|^2)(1 - |l_I|^2/2 - |l_K.x_K|^2)
    coefficients = superposition_coefficients(params.phase_phi, configuration)
    scale = PEAK[configuration] / JACOBIAN[configuration] * math.pi ** (len(integrated) / 2.0)
    superposition = 0.5 * float(np.sum(np.abs(coefficients[integrated]) ** 2))
    if kept:
        superposition = superposition + np.abs(x_kept @ coefficients[kept]) ** 2

    # split the Gaussian between the two envelopes
    if configuration is Configuration.NONDEGENERATE:
        mask_a = np.array([index < 4 for index in kept], dtype=bool)
        radius_a = np.sum(x_kept[..., mask_a] ** 2, axis=-1) if kept else 0.0
        radius_b = np.sum(x_kept[..., ~mask_a] ** 2, axis=-1) if kept else 0.0
    else:
        radius_a = radius_b = 0.5 * np.sum(x_kept ** 2, axis=-1) if kept else 0.0
    envelope_a = math.sqrt(scale) * np.exp(-radius_a)
    envelope_b = math.sqrt(scale) * np.exp(-radius_b)
    value = -envelope_a * envelope_b * (1.0 - superposition)
    return value, envelope_a, envelope_b, superposition


def marginal_value(params: OpaParams, configuration: Configuration, kept: Dict[str, float]) -> float:
    """
    The analytic marginal at one point of the kept axes, every other axis
    integrated out. With no kept axis this is the full normalization.
    """
    configuration = Configuration.parse(configuration)
    kept_axes = list(kept)
    integrated_axes = [axis for axis in AXES[configuration] if axis not in kept]
    kept_indices, integrated_indices = _check_partition(configuration, kept_axes, integrated_axes)
    x_kept = np.array([float(kept[axis]) for axis in kept_axes])
    value, _, _, _ = _marginal_parts(params, configuration, kept_indices, integrated_indices, x_kept)
    return float(value)


def marginal_quadrature(
        params: OpaParams,
        configuration: Configuration,
        kept: Dict[str, float],
        order: int = DEFAULT_QUADRATURE_ORDER,
        ) -> float:
    """The same marginal as marginal_value, by quadrature over the integrated axes."""
    configuration = Configuration.parse(configuration)
    names = AXES[configuration]
    kept_indices = _axis_indices(configuration, list(kept))
    integrated = [index for index in range(len(names)) if index not in kept_indices]
    if not integrated:
        return float(_evaluate_real(params, configuration, _full_point(names, kept))[0]) / JACOBIAN[configuration]

    nodes, weights = hermgauss_nodes(order, len(integrated))
    x = np.zeros((len(weights), len(names)))
    for index in kept_indices:
        x[:, index] = kept[names[index]]
    x[:, integrated] = nodes
    value, _, _, _ = _evaluate_real(params, configuration, x)
    gaussian = np.exp(np.sum(nodes ** 2, axis=1))
    return float(np.sum(weights * value * gaussian)) / JACOBIAN[configuration]


def _full_point(names: Sequence[str], values: Dict[str, float]) -> np.ndarray:
    return np.array([float(values.get(name, 0.0)) for name in names])


class GridSpec:
    """
    A two-axis phase-space grid.

    Attributes:
    - configuration (Configuration): the layout
    - x_axis, y_axis (str): names from AXES[configuration]
    - x_range, y_range (Tuple[float, float]): finite, increasing ranges
    - x_count, y_count (int): samples per axis, >= 2
    - mode (str): "slice" pins the other axes to `fixed` (default 0),
        "marginal" integrates them out
    - fixed (Dict[str, float]): pinned values for the slice mode
    - max_samples (int): the refusal threshold for x_count * y_count
    """
    MODES = ("slice", "marginal")

    def __init__(
            self,
            configuration: Configuration,
            x_axis: str,
            y_axis: str,
            x_range: Tuple[float, float] = (-3.0, 3.0),
            y_range: Tuple[float, float] = (-3.0, 3.0),
            x_count: int = 61,
            y_count: int = 61,
            mode: str = "slice",
            fixed: Optional[Dict[str, float]] = None,
            max_samples: int = DEFAULT_MAX_SAMPLES,
            ) -> None:
        """
        Raises:
        - InvalidParameterError: if an axis, range, count or mode is invalid
        - GridSizeError: if the grid holds more than max_samples points
        """
        # Check validity of inputs
        configuration = Configuration.parse(configuration)
        _axis_indices(configuration, [x_axis, y_axis])
        if mode not in self.MODES:
            raise InvalidParameterError(f"The grid mode must be one of {self.MODES}, got {mode!r}")
        for name, count in (("x", x_count), ("y", y_count)):
            if isinstance(count, bool) or not isinstance(count, (int, np.integer)) or count < 2:
                raise InvalidParameterError(f"The {name} sample count must be an integer >= 2, got {count!r}")
        for name, bounds in (("x", x_range), ("y", y_range)):
            low, high = (float(value) for value in bounds)
            if not (math.isfinite(low) and math.isfinite(high)) or low >= high:
                raise InvalidParameterError(f"The {name} range must be finite and increasing, got {bounds}")
        fixed = dict(fixed or {})
        if fixed:
            if mode == "marginal":
                raise InvalidParameterError("Pinned values only apply to the slice mode")
            _axis_indices(configuration, list(fixed))
            if x_axis in fixed or y_axis in fixed:
                raise InvalidParameterError("The swept axes cannot be pinned")
        if x_count * y_count > max_samples:
            raise GridSizeError(
                f"A {x_count}x{y_count} grid has {x_count * y_count} samples, above the cap of {max_samples}"
            )

        self.configuration = configuration
        self.x_axis = x_axis
        self.y_axis = y_axis
        self.x_range = (float(x_range[0]), float(x_range[1]))
        self.y_range = (float(y_range[0]), float(y_range[1]))
        self.x_count = int(x_count)
        self.y_count = int(y_count)
        self.mode = mode
        self.fixed = {axis: float(value) for axis, value in fixed.items()}
        self.max_samples = max_samples

    def x_values(self) -> np.ndarray:
        return np.linspace(self.x_range[0], self.x_range[1], self.x_count)

    def y_values(self) -> np.ndarray:
        return np.linspace(self.y_range[0], self.y_range[1], self.y_count)

    def to_dict(self) -> dict:
        return {
            "configuration": self.configuration.value,
            "axes": [self.x_axis, self.y_axis],
            "ranges": [list(self.x_range), list(self.y_range)],
            "counts": [self.x_count, self.y_count],
            "mode": self.mode,
            "fixed": dict(self.fixed),
        }


class PhaseGrid:
    """
    Sampled Wigner values on a GridSpec. Arrays have shape (y_count, x_count),
    so flattening them row-major runs X fastest.
    """
    def __init__(
            self,
            spec: GridSpec,
            params: OpaParams,
            values: np.ndarray,
            envelope_a: np.ndarray,
            envelope_b: np.ndarray,
            superposition_sq: np.ndarray,
            ) -> None:
        self.spec = spec
        self.params = params
        self.values = values
        self.envelope_a = envelope_a
        self.envelope_b = envelope_b
        self.superposition_sq = superposition_sq

    def samples(self):
        """Yields (x, y, WignerValue) in row-major order, X fastest."""
        x_values, y_values = self.spec.x_values(), self.spec.y_values()
        for row, y in enumerate(y_values):
            for column, x in enumerate(x_values):
                yield float(x), float(y), WignerValue(
                    float(self.values[row, column]),
                    float(self.envelope_a[row, column]),
                    float(self.envelope_b[row, column]),
                    float(self.superposition_sq[row, column]),
                )

    def min_sample(self) -> Tuple[float, float, float]:
        """(W, x, y) of the smallest sample."""
        row, column = np.unravel_index(int(np.argmin(self.values)), self.values.shape)
        return float(self.values[row, column]), float(self.spec.x_values()[column]), float(self.spec.y_values()[row])


def wigner_grid(params: OpaParams, spec: GridSpec) -> PhaseGrid:
    """
    Fills a GridSpec with the closed form (slice mode) or the analytic
    marginal (marginal mode).
    """
    configuration = spec.configuration
    names = AXES[configuration]
    x_mesh, y_mesh = np.meshgrid(spec.x_values(), spec.y_values())
    x_index, y_index = names.index(spec.x_axis), names.index(spec.y_axis)

    if spec.mode == "slice":
        points = np.tile(_full_point(names, spec.fixed), x_mesh.shape + (1,))
        points[..., x_index] = x_mesh
        points[..., y_index] = y_mesh
        parts = _evaluate_real(params, configuration, points)
    else:
        kept = [x_index, y_index]
        integrated = [index for index in range(len(names)) if index not in kept]
        parts = _marginal_parts(params, configuration, kept, integrated, np.stack([x_mesh, y_mesh], axis=-1))

    value, envelope_a, envelope_b, superposition = (np.broadcast_to(part, x_mesh.shape).astype(float) for part in parts)
    logger.info(
        "Filled %dx%d %s grid (%s, %s) at g=%s phi=%s",
        spec.x_count, spec.y_count, spec.mode, spec.x_axis, spec.y_axis, params.gain, params.phase_phi,
    )
    return PhaseGrid(spec, params, value, envelope_a, envelope_b, superposition)


def marginal_wigner(
        params: OpaParams,
        configuration: Configuration,
        kept_axes: Sequence[str],
        integrated_axes: Sequence[str],
        x_range: Tuple[float, float] = (-3.0, 3.0),
        y_range: Tuple[float, float] = (-3.0, 3.0),
        x_count: int = 61,
        y_count: int = 61,
        ) -> PhaseGrid:
    """
    The analytic marginal on the two kept axes.

    Raises:
    - InvalidParameterError: if the axes do not partition the phase space,
        or if not exactly two axes are kept
    """
    configuration = Configuration.parse(configuration)
    _check_partition(configuration, kept_axes, integrated_axes)
    if len(kept_axes) != 2:
        raise InvalidParameterError(f"A marginal grid keeps exactly two axes, got {len(kept_axes)}")
    spec = GridSpec(configuration, kept_axes[0], kept_axes[1], x_range, y_range, x_count, y_count, mode="marginal")
    return wigner_grid(params, spec)


PRESET_AXES = {
    Configuration.NONDEGENERATE: ("re_gamma_a_plus", "im_gamma_b_minus"),
    Configuration.DEGENERATE: ("re_gamma_a_plus", "im_gamma_a_minus"),
}
PRESET_GAIN = 2.5
PRESET_PHASES = (0.0, math.pi / 2.0, math.pi)


def preset_spec(
        configuration: Configuration,
        mode: str = "marginal",
        extent: float = 3.0,
        count: int = 121,
        ) -> GridSpec:
    """
    The cat-surface preset: X = Re gamma_A+ and
    Y = Im gamma_B- (Im gamma_A- in the degenerate layout, where
    Im gamma_B- = -Im gamma_A-).
    """
    configuration = Configuration.parse(configuration)
    x_axis, y_axis = PRESET_AXES[configuration]
    return GridSpec(configuration, x_axis, y_axis, (-extent, extent), (-extent, extent), count, count, mode=mode)


class MinimumReport(NamedTuple):
    value: float
    coordinates: np.ndarray
    location: PhasePoint


def wigner_minimum(params: OpaParams, configuration: Configuration, lattice: Sequence[float] = (-1.0, 0.0, 1.0)) -> MinimumReport:
    """
    Locates the global minimum of W: the best point of a coarse lattice in
    every squeezed coordinate, refined with BFGS.
    """
    configuration = Configuration.parse(configuration)
    dims = len(AXES[configuration])
    candidates = np.array(list(itertools.product(*(tuple(lattice),) * dims)))
    values = _evaluate_real(params, configuration, candidates)[0]
    start = candidates[int(np.argmin(values))]

    def objective(x: np.ndarray) -> float:
        return float(_evaluate_real(params, configuration, x)[0])

    result = minimize(objective, start, method="BFGS", options={"gtol": 1e-12})
    best = result.x if result.fun <= values.min() else start
    value = objective(best)
    return MinimumReport(value, best, point_from_coords(params, configuration, best))


class CatReport(NamedTuple):
    """
    The three cat criteria for one parameter set.

    - fringe_capable / cross_term_norm: the interference term
        2 Re[exp(i Phi) Delta_A Delta_B^*] is present
    - minimum_value / minimum_location / negative: W is not positive definite
    - separation, width, separation_ratio, resolvable: the two positive
        lobes of the marginal on `axes` are farther apart than their width
    - microscopic: zero gain, the injected single photon itself
    """
    configuration: Configuration
    gain: float
    phase_phi: float
    fringe_capable: bool
    cross_term_norm: float
    minimum_value: float
    minimum_location: PhasePoint
    negative: bool
    axes: Tuple[str, str]
    separation: float
    width: float
    separation_ratio: float
    resolvable: bool
    microscopic: bool


def _axis_scale(gain: float, axis: str) -> float:
    # physical (unsqueezed) length per unit of the squeezed coordinate
    return math.exp(gain) if "plus" in axis else math.exp(-gain)


def cat_criteria(params: OpaParams, configuration: Configuration, axes: Optional[Tuple[str, str]] = None) -> CatReport:
    """
    Evaluates the cat criteria.

    The lobe separation uses the analytic marginal on two axes: along the
    leading eigenvector v of Re(l l^dag) the marginal peaks at
    t^2 = 1 + c0 / lambda, with c0 = 1 - |l_integrated|^2 / 2. The
    separation 2 t |(v_k s_k)| and the mean width 2 sqrt(ln 2) s_k are
    converted to unsqueezed units with s = e^g on "+" axes and e^-g on "-"
    axes.
    """
    configuration = Configuration.parse(configuration)
    axes = tuple(axes or PRESET_AXES[configuration])
    kept = _axis_indices(configuration, axes)
    if len(kept) != 2:
        raise InvalidParameterError("The lobe separation needs exactly two axes")
    coefficients = superposition_coefficients(params.phase_phi, configuration)

    # (a)
    # 2 Re[exp(i Phi) Delta_A Delta_B^*] = x^T Re(M + M^T) x
    if configuration is Configuration.NONDEGENERATE:
        delta_a = np.concatenate([_DELTA, np.zeros(4)])
        delta_b = np.concatenate([np.zeros(4), _DELTA])
    else:
        delta_a, delta_b = _DELTA, _DELTA_B_DEGENERATE
    cross = cmath.exp(1j * params.phase_phi) * np.outer(delta_a, np.conj(delta_b))
    cross_norm = float(np.linalg.norm(np.real(cross + cross.T)))

    # (b)
    minimum = wigner_minimum(params, configuration)

    # (c)
    integrated = [index for index in range(len(AXES[configuration])) if index not in kept]
    offset = 1.0 - 0.5 * float(np.sum(np.abs(coefficients[integrated]) ** 2))
    kept_coefficients = coefficients[kept]
    curvature = np.real(np.outer(kept_coefficients, np.conj(kept_coefficients)))
    eigenvalues, eigenvectors = np.linalg.eigh(curvature)
    leading, direction = eigenvalues[-1], eigenvectors[:, -1]
    scales = np.array([_axis_scale(params.gain, axis) for axis in axes])
    width = 2.0 * math.sqrt(math.log(2.0)) * float(np.mean(scales))
    peak_sq = 1.0 + offset / leading if leading > 1e-14 else 0.0
    separation = 2.0 * math.sqrt(peak_sq) * float(np.linalg.norm(direction * scales)) if peak_sq > 0 else 0.0
    ratio = separation / width

    return CatReport(
        configuration=configuration,
        gain=params.gain,
        phase_phi=params.phase_phi,
        fringe_capable=cross_norm > 1e-12,
        cross_term_norm=cross_norm,
        minimum_value=minimum.value,
        minimum_location=minimum.location,
        negative=minimum.value < 0.0,
        axes=axes,
        separation=separation,
        width=width,
        separation_ratio=ratio,
        resolvable=ratio > 1.0,
        microscopic=params.gain == 0.0,
    )


def wigner_from_characteristic(
        params: OpaParams,
        point: PhasePoint,
        extent: float = 5.0,
        step: float = 0.3,
        ) -> float:
    """
    Fourier-transforms the degenerate characteristic function on a lattice:
    W = pi^-4 sum chi exp(eta^* alpha - eta alpha^* + xi^* beta - xi beta^*) h^4.

    The lattice is uniform in eta' = eta(t), xi' = xi(t); the map
    eta = C eta' + S xi'^*, xi = C xi' + S eta'^* has unit Jacobian.

    Raises:
    - InvalidConfigurationError: for a non-degenerate point
    """
    if point.configuration is not Configuration.DEGENERATE:
        raise InvalidConfigurationError("The lattice transform is only tractable for the degenerate layout")
    if step <= 0 or extent <= 0:
        raise InvalidParameterError("The lattice step and extent must be positive")

    axis = np.arange(-extent, extent + step / 2.0, step)
    eta_re, eta_im, xi_re, xi_im = np.meshgrid(axis, axis, axis, axis, indexing="ij", sparse=True)
    eta_t = eta_re + 1j * eta_im
    xi_t = xi_re + 1j * xi_im
    c, s = params.cosh_c, params.sinh_s
    eta = c * eta_t + s * np.conj(xi_t)
    xi = c * xi_t + s * np.conj(eta_t)

    chi = characteristic_function(params, Configuration.DEGENERATE, (eta,), (xi,))
    (alpha,), (beta,) = point.alphas, point.betas
    kernel = np.exp(np.conj(eta) * alpha - eta * np.conj(alpha) + np.conj(xi) * beta - xi * np.conj(beta))
    total = np.sum(chi * kernel) * step ** 4 / math.pi ** 4
    return float(total.real)
