"""
Field-line tracing, Poincaré sections and the persistence witness driven by
a run configuration.
"""

import logging
from dataclasses import dataclass
from typing import Any, Callable, Optional

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import brentq

from beltrami.config.pipeline_config import PipelineConfig
from beltrami.lib.dynamics.persistence import (
    PersistenceReport,
    persistence_witness,
)
from beltrami.lib.dynamics.section import (
    ClosedOrbit,
    PoincareSection,
    SectionPlane,
    detect_closed_orbits,
    poincare_section,
)
from beltrami.lib.dynamics.trajectory import (
    Trajectory,
    trace_field_lines,
    velocity_field,
)
from beltrami.lib.r3_fields.fields import R3Field
from beltrami.lib.s3.beltrami_field import RescaledPushforward
from beltrami.pipeline.build import BuildResult

_logger = logging.getLogger(__name__)

RING_BRACKET = (2.0, 3.5)
WITNESS_SEEDS = 9
# a turn around the ring of the unit-scale reference takes about 160
RING_TIME_PER_RETURN = 400.0
# returns followed by each round of the centre refinement
REFINE_RETURNS = 12


def run_seeds(
    field: Callable[[NDArray], NDArray], config: PipelineConfig
) -> NDArray:
    """
    The configured seeds in the field's ambient coordinates: the first chart
    base point on S^3 and the origin elsewhere when none are configured.
    """
    velocity = velocity_field(field)
    seeds = config.dynamics.seeds
    if not seeds:
        if velocity.manifold == "sphere":
            seeds = config.chart.base_points[:1]
        else:
            seeds = ((0.0, 0.0, 0.0),)
    return velocity.seeds(seeds)


def _max_step(config: PipelineConfig) -> float:
    max_step = config.dynamics.max_step
    return np.inf if max_step is None else max_step


def trace_run(
    field: Callable[[NDArray], NDArray], config: PipelineConfig
) -> list[Trajectory]:
    """
    Trace the field line through every configured seed.

    Raises:
        PreconditionError: for a bad tolerance, duration or seed
    """
    return trace_field_lines(
        field,
        run_seeds(field, config),
        config.dynamics.duration,
        tol=config.dynamics.tol,
        max_step=_max_step(config),
    )


@dataclass(frozen=True)
class SectionRun:
    """
    Attributes:
        plane: the section
        section: the recorded returns
        closed_orbits: seeds whose returns stay put
        witness: the persistence report when an annulus was seeded
    """

    plane: SectionPlane
    section: PoincareSection
    closed_orbits: tuple[ClosedOrbit, ...]
    witness: Optional[PersistenceReport] = None

    def as_dict(self) -> dict[str, Any]:
        return {
            "plane": self.plane.as_dict(),
            "crossings": len(self.section),
            "height_residual": self.section.height_residual(),
            "closed_orbits": [orbit.as_dict() for orbit in self.closed_orbits],
            "witness": self.witness.as_dict() if self.witness else None,
        }


def section_plane(
    field: Callable[[NDArray], NDArray], config: PipelineConfig
) -> SectionPlane:
    """
    The configured section, through the first seed and transversal to the
    field there unless a point or normal is given.

    Raises:
        PreconditionError: for a degenerate normal
    """
    options = config.section
    manifold = velocity_field(field).manifold
    point = (
        np.array(options.point)
        if options.point is not None
        else run_seeds(field, config)[0]
    )
    if options.normal is None:
        return SectionPlane.transversal(field, point, manifold)
    return SectionPlane.through(point, options.normal, manifold)


def section_run(
    field: Callable[[NDArray], NDArray], config: PipelineConfig
) -> SectionRun:
    """
    Record the returns of the configured seeds to the configured section,
    or seed an annulus around the section point when the configuration sets
    an annulus radius.

    Raises:
        PreconditionError: for invalid section parameters
        TransversalityError: if a first crossing is nearly tangential
        OrbitEscapeError: if an orbit leaves the region or runs out of time
    """
    options = config.section
    plane = section_plane(field, config)
    crossing_options = {
        "tol": config.dynamics.tol,
        "max_time": options.max_time,
        "region_radius": options.region_radius,
        "min_transversality": options.min_transversality,
        "max_step": _max_step(config),
    }

    witness = None
    if options.annulus_radius is None:
        section = poincare_section(
            field,
            plane,
            run_seeds(field, config),
            options.n_returns,
            **crossing_options,
        )
    else:
        witness, section = persistence_witness(
            field,
            plane,
            plane.point,
            options.annulus_radius,
            n_seeds=WITNESS_SEEDS,
            n_returns=options.n_returns,
            **crossing_options,
        )

    orbits = detect_closed_orbits(section, options.closed_threshold)
    return SectionRun(plane, section, tuple(orbits), witness)


def ring_radius() -> float:
    """
    Radius of the circular vortex line of the axisymmetric
    Chandrasekhar-Kendall field: the zero of the poloidal component
    (ρ² - 1) sin ρ + ρ cos ρ in the plane x_3 = 0.

    >>> round(ring_radius(), 3)
    2.744
    """
    return float(
        brentq(
            lambda r: (r * r - 1.0) * np.sin(r) + r * np.cos(r),
            *RING_BRACKET,
            xtol=1e-15,
        )
    )


def ring_witness(
    field: R3Field,
    annulus_radius: float = 0.05,
    n_returns: int = 100,
    **section_options: Any,
) -> tuple[PersistenceReport, PoincareSection]:
    """
    Seed an annulus around the circular vortex line through (ρ, 0, 0) and
    follow its returns to the section transversal there.

    Arguments:
        field: the reference or a rescaled pipeline field near it
        annulus_radius: ring radius in section coordinates
        n_returns: returns per seed
        section_options: passed on to poincare_section

    Returns:
        the persistence report and its section
    """
    turns = max(n_returns, REFINE_RETURNS) + 1
    section_options.setdefault("max_time", RING_TIME_PER_RETURN * turns)
    centre = np.array([ring_radius(), 0.0, 0.0])
    plane = SectionPlane.transversal(field, centre, "euclidean")
    return persistence_witness(
        field,
        plane,
        centre,
        annulus_radius,
        n_seeds=WITNESS_SEEDS,
        n_returns=n_returns,
        **section_options,
    )


def rescaled_ring_witness(
    result: BuildResult, annulus_radius: float = 0.05, **options: Any
) -> tuple[PersistenceReport, PoincareSection]:
    """
    The ring witness on the rescaled S^3 field, whose closed line lies near
    the reference's circle when the fit is good.
    """
    reach = 2.0 * ring_radius()
    rescaled = RescaledPushforward(
        result.field, result.chart, result.degree, reach
    )
    return ring_witness(
        rescaled, annulus_radius, region_radius=reach / 2, **options
    )
