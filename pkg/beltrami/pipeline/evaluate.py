"""
Sampling a stored field on a structured grid.
"""

import logging

import numpy as np
from numpy.typing import NDArray

from beltrami import DEFAULT_BASE_POINT
from beltrami.config.pipeline_config import OutputConfig
from beltrami.lib.parallel import chunked_map
from beltrami.lib.r3_fields.fields import R3Field
from beltrami.lib.s3.beltrami_field import RescaledPushforward
from beltrami.lib.s3.chart import exp_chart
from beltrami.output import StructuredGrid
from beltrami.output.descriptors import Descriptor

_logger = logging.getLogger(__name__)


def grid_evaluator(descriptor: Descriptor, grid: StructuredGrid) -> R3Field:
    """
    The R^3 field a descriptor is sampled through: the rescaled
    pushforward at the first chart base point for S^3 fields, the field
    itself otherwise.
    """
    source = descriptor.source
    if descriptor.kind != "s3_beltrami":
        return source

    base_point = descriptor.extras.get("base_points", [DEFAULT_BASE_POINT])[0]
    reach = float(np.max(np.linalg.norm(grid.points(), axis=-1)))
    return RescaledPushforward(
        source, exp_chart(base_point), source.degree, max(reach, 1.0)
    )


def evaluate_grid(
    descriptor: Descriptor, output: OutputConfig, threads: int = 1
) -> tuple[StructuredGrid, NDArray]:
    """
    The field values at every point of the configured grid, x_1 fastest.

    Complex plane-wave sums export their real part.

    Arguments:
        descriptor: the stored field
        output: grid size and bounds
        threads: worker threads

    Returns:
        the grid and the values, shape (len(grid), 3)
    """
    manifold = "t3" if descriptor.kind == "t3_beltrami" else "s3"
    lower, upper = output.grid_bounds(manifold)
    grid = StructuredGrid(lower, upper, output.grid_n)
    evaluator = grid_evaluator(descriptor, grid)

    values = chunked_map(
        lambda chunk: np.real(evaluator(chunk)), grid.points(), threads
    )
    _logger.info(
        f"Evaluated '{descriptor.kind}' on a {output.grid_n}^3 grid"
    )
    return grid, values
