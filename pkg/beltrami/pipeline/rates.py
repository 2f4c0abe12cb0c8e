"""
Error measurements of the rescaled pipeline field and the degree sweeps
that turn them into convergence rates.
"""

import logging
from dataclasses import dataclass, replace
from typing import Any, Optional

import numpy as np

from beltrami.config.pipeline_config import NormsConfig, PipelineConfig
from beltrami.lib.dynamics.norms import (
    ErrorReport,
    RateTable,
    rate_table,
    sup_error_norm,
)
from beltrami.pipeline.build import BuildResult, Fitted, build, fit

_logger = logging.getLogger(__name__)

# room for the differencing stencil around the ball
FD_MARGIN = 0.05


@dataclass(frozen=True)
class ErrorMeasurement:
    """
    Attributes:
        degree: Λ
        to_limit: distance of the rescaled field to the Beltrami projection
            of the unsnapped atom fit
        to_reference: distance of the rescaled field to the reference
    """

    degree: int
    to_limit: ErrorReport
    to_reference: ErrorReport

    def as_dict(self) -> dict[str, Any]:
        return {
            "Lambda": self.degree,
            "to_limit": self.to_limit.as_dict(),
            "to_reference": self.to_reference.as_dict(),
        }


def measure_errors(
    result: BuildResult, fitted: Fitted, norms: NormsConfig, threads: int = 1
) -> ErrorMeasurement:
    """
    Sup-norm errors of the rescaled field on the configured ball.

    Arguments:
        result: the built field
        fitted: the fit it was built from
        norms: ball, order and grid of the measurement
        threads: worker threads

    Returns:
        the errors against the limit field and against the reference

    Raises:
        PreconditionError: for an invalid order or grid
        DerivativeUnavailableError: if order > 0 and differences are off
    """
    reach = norms.radius + float(np.linalg.norm(norms.center)) + FD_MARGIN
    rescaled = result.rescaled(max_radius=reach)
    limit = replace(result, atoms=fitted.atoms).limit()

    options = {
        "radius": norms.radius,
        "order": norms.order,
        "grid_n": norms.grid_n,
        "center": norms.center,
        "threads": threads,
        "allow_fd": norms.allow_fd,
    }
    measurement = ErrorMeasurement(
        result.degree,
        sup_error_norm(rescaled, limit, **options),
        sup_error_norm(rescaled, fitted.reference, **options),
    )
    _logger.info(
        f"Lambda {result.degree}: C^{norms.order} error "
        f"{measurement.to_limit.aggregate:.4e} to the limit, "
        f"{measurement.to_reference.aggregate:.4e} to the reference"
    )
    return measurement


@dataclass(frozen=True)
class RateSweep:
    """
    Errors at every degree of a sweep, measured against one atom fit.

    Attributes:
        manifold: "s3" or "t3"
        measurements: one per degree, in sweep order
        builds: the build report of every degree
    """

    manifold: str
    measurements: tuple[ErrorMeasurement, ...]
    builds: tuple[dict[str, Any], ...] = ()

    @property
    def table(self) -> RateTable:
        return rate_table(
            {m.degree: m.to_limit.aggregate for m in self.measurements}
        )

    @property
    def reference_table(self) -> RateTable:
        return rate_table(
            {m.degree: m.to_reference.aggregate for m in self.measurements}
        )

    def header(self) -> list[str]:
        return self.table.header() + ["reference_error"]

    def rows(self) -> list[list[float]]:
        reference = {
            m.degree: m.to_reference.aggregate for m in self.measurements
        }
        return [row + [reference[row[0]]] for row in self.table.rows()]

    def as_dict(self) -> dict[str, Any]:
        return {
            "manifold": self.manifold,
            "rates": self.table.as_dict(),
            "reference_rates": self.reference_table.as_dict(),
            "within": self.table.within(),
            "measurements": [m.as_dict() for m in self.measurements],
            "builds": list(self.builds),
        }


def measure_rates(
    config: PipelineConfig, fitted: Optional[Fitted] = None
) -> RateSweep:
    """
    Fit the reference once, build the field at every configured degree and
    measure its error.

    Raises:
        PreconditionError: tagged with the stage that refused its input
        FitFailure: if the atom fit misses the configured tolerance
        InvariantViolation: if a build fails its eigen-identity check
    """
    fitted = fitted or fit(config)
    measurements, builds = [], []
    for degree in config.degree:
        result = build(config, degree, fitted)
        measurements.append(
            measure_errors(result, fitted, config.norms, config.threads)
        )
        builds.append(result.report)

    sweep = RateSweep(config.manifold, tuple(measurements), tuple(builds))
    _logger.info(
        f"Rates over {list(config.degree)}: ratios {sweep.table.ratios}, "
        f"slope {sweep.table.slope:.3f}"
    )
    return sweep
