from .core.params import Configuration, OpaParams, derive_params
from .core.states import build_output_state
from .core.wigner import PhasePoint, wigner_closed_form
from .core.correlations import DetectorSettings, correlation_report

__version__ = "0.1.0"
