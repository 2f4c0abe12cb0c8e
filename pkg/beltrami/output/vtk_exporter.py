"""
Legacy ASCII VTK structured points with one vector attribute.
"""

import io
from typing import Any

import numpy as np
from numpy.typing import NDArray

from beltrami.output import GridExporterBase, StructuredGrid

VTK_VERSION = "4.2"
# the legacy reader truncates the title line beyond this
MAX_TITLE = 255


def vtk_title(provenance: dict[str, Any]) -> str:
    """
    The one-line VTK title: everything but the configuration, which does
    not fit the title line.
    """
    parts = [f"{k}={v}" for k, v in provenance.items() if k != "config"]
    return " ".join(["beltrami"] + parts)[:MAX_TITLE]


class VtkExporter(GridExporterBase):
    """
    DATASET STRUCTURED_POINTS with POINT_DATA VECTORS, x1 fastest, as
    written by vtkStructuredPointsWriter.
    """

    format_name = "vtk"
    suffix = ".vtk"
    attribute = "u"

    def render(
        self,
        grid: StructuredGrid,
        values: NDArray,
        provenance: dict[str, Any],
    ) -> str:
        buffer = io.StringIO()
        n1, n2, n3 = grid.dimensions
        buffer.write(
            f"# vtk DataFile Version {VTK_VERSION}\n"
            f"{vtk_title(provenance)}\n"
            "ASCII\n"
            "DATASET STRUCTURED_POINTS\n"
            f"DIMENSIONS {n1} {n2} {n3}\n"
            f"SPACING {' '.join(repr(float(s)) for s in grid.spacing)}\n"
            f"ORIGIN {' '.join(repr(float(o)) for o in grid.origin)}\n"
            f"POINT_DATA {len(grid)}\n"
            f"VECTORS {self.attribute} double\n"
        )
        np.savetxt(buffer, values, fmt="%.17g", delimiter=" ")
        return buffer.getvalue()
