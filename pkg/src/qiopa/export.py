"""
CSV and JSON writers for grids, sweeps and states.

Floats are printed with 17 significant digits and rows follow a fixed
traversal order, so identical inputs give byte-identical files. Everything is
rendered in memory before any file is touched.
"""
import csv
import io
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Union

from .core.correlations import CorrelationReport
from .core.states import OutputState
from .core.wigner import PhaseGrid

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
GRID_COLUMNS = ("x", "y", "W", "envelope_a", "envelope_b", "superposition_sq")
SWEEP_COLUMNS = ("sweep_var", "value", "G1_1", "G1_2", "G2_11", "G2_22", "G2_12", "V", "s/n", "fringe")
NOT_APPLICABLE = "n/a"


def format_float(value: Optional[float]) -> str:
    if value is None:
        return NOT_APPLICABLE
    return format(float(value), ".17g")


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def json_text(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def render_grid_csv(grid: PhaseGrid) -> str:
    rows = (
        [format_float(x), format_float(y)] + [format_float(part) for part in sample]
        for x, y, sample in grid.samples()
    )
    return _csv_text(GRID_COLUMNS, rows)


def grid_sidecar(grid: PhaseGrid) -> dict:
    spec = grid.spec.to_dict()
    return {
        "schema_version": SCHEMA_VERSION,
        "gain": grid.params.gain,
        "phi": grid.params.phase_phi,
        "configuration": spec["configuration"],
        "axes": spec["axes"],
        "ranges": spec["ranges"],
        "counts": spec["counts"],
        "mode": spec["mode"],
        "fixed": spec["fixed"],
        "columns": list(GRID_COLUMNS),
    }


def sweep_row(variable: str, value: float, report: CorrelationReport) -> List[str]:
    return [
        variable,
        format_float(value),
        format_float(report.g1["1"]),
        format_float(report.g1["2"]),
        format_float(report.g2["11"]),
        format_float(report.g2["22"]),
        format_float(report.g2["12"]),
        format_float(report.visibility),
        format_float(report.signal_to_noise),
        format_float(report.fringe_difference),
    ]


def render_sweep_csv(variable: str, values: Sequence[float], reports: Sequence[CorrelationReport]) -> str:
    return _csv_text(SWEEP_COLUMNS, (sweep_row(variable, value, report) for value, report in zip(values, reports)))


def sweep_sidecar(fixed: dict, sweep: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "fixed": fixed,
        "sweep": sweep,
        "columns": list(SWEEP_COLUMNS),
    }


def state_document(state: OutputState) -> dict:
    return state.to_dict()


def write_files(contents: Dict[Union[str, Path], str]) -> List[Path]:
    """
    Writes every file or none: each text goes to a temporary file in the
    target directory first, and the temporaries are renamed only once all of
    them are written.
    """
    staged = []
    try:
        for path, text in contents.items():
            path = Path(path)
            path.parent.mkdir(parents=True, exist_ok=True)
            handle, temporary = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
            staged.append((Path(temporary), path))
            with os.fdopen(handle, "w", encoding="utf-8", newline="") as stream:
                stream.write(text)
    except OSError:
        for temporary, _ in staged:
            temporary.unlink(missing_ok=True)
        raise

    for temporary, path in staged:
        os.replace(temporary, path)
        logger.info("Wrote %s", path)
    return [path for _, path in staged]