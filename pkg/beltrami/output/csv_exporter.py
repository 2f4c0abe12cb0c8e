"""
Comma separated tables with a commented provenance header.
"""

import io
import logging
from pathlib import Path
from typing import Any, Sequence

import numpy as np
from numpy.typing import NDArray

from beltrami.errors.beltrami_errors import DescriptorIOError
from beltrami.output import (
    GridExporterBase,
    StructuredGrid,
    provenance_lines,
)

_logger = logging.getLogger(__name__)

# shortest text that reads back to the same double
NUMBER_FORMAT = "%.17g"


def render_table(
    header: Sequence[str],
    rows: Sequence[Sequence[float]] | NDArray,
    provenance: dict[str, Any],
) -> str:
    """
    CSV text: "# key: value" provenance lines, the column names, then one
    line per row.
    """
    buffer = io.StringIO()
    for line in provenance_lines(provenance):
        buffer.write(f"# {line}\n")
    buffer.write(",".join(header) + "\n")
    data = np.asarray(rows, dtype=float).reshape(-1, len(header))
    np.savetxt(buffer, data, fmt=NUMBER_FORMAT, delimiter=",")
    return buffer.getvalue()


def write_table(
    path: Path,
    header: Sequence[str],
    rows: Sequence[Sequence[float]] | NDArray,
    provenance: dict[str, Any],
) -> Path:
    """
    Write a table as CSV.

    Raises:
        DescriptorIOError: if the file cannot be written
    """
    path = Path(path)
    try:
        path.write_text(render_table(header, rows, provenance))
    except OSError as exc:
        raise DescriptorIOError(str(path), str(exc)) from exc

    _logger.info(f"Table of {len(rows)} rows exported to {path}")
    return path


class CsvExporter(GridExporterBase):
    """
    One line per grid point: x1,x2,x3,u1,u2,u3.
    """

    format_name = "csv"
    suffix = ".csv"

    def render(
        self,
        grid: StructuredGrid,
        values: NDArray,
        provenance: dict[str, Any],
    ) -> str:
        header = ("x1", "x2", "x3", "u1", "u2", "u3")
        return render_table(
            header, np.hstack([grid.points(), values]), provenance
        )
