"""
Empirical persistence of a closed vortex line: seed an annulus around an
elliptic fixed point of the return map and check that its returns stay in a
tube about the point.
"""

import logging
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray

from beltrami.errors.beltrami_errors import PreconditionError
from beltrami.lib.dynamics.section import (
    PoincareSection,
    SectionPlane,
    poincare_section,
    refine_elliptic_seed,
    rotation_sense,
)

_logger = logging.getLogger(__name__)

TUBE_FACTOR = 1.5
CLOSURE_TOLERANCE = 1e-4


@dataclass(frozen=True)
class PersistenceReport:
    """
    Attributes:
        centre: section coordinates of the refined fixed point
        annulus_radius: distance of the ring seeds from the centre
        tube_radius: largest distance of a ring return from the centre
        closure: smallest distance between a later return of some seed and
            its first return
        rotation_senses: per ring seed, the sense its returns turn in
        returns: returns per seed
        tube_factor: allowed ratio of tube to annulus radius
        closure_tolerance: allowed closure
    """

    centre: NDArray
    annulus_radius: float
    tube_radius: float
    closure: float
    rotation_senses: tuple[int, ...]
    returns: int
    tube_factor: float = TUBE_FACTOR
    closure_tolerance: float = CLOSURE_TOLERANCE

    @property
    def tube_ratio(self) -> float:
        return self.tube_radius / self.annulus_radius

    @property
    def rotation_consistent(self) -> bool:
        senses = set(self.rotation_senses)
        return len(senses) == 1 and 0 not in senses

    @property
    def passed(self) -> bool:
        return (
            self.tube_ratio <= self.tube_factor
            and self.closure <= self.closure_tolerance
        )

    def as_dict(self) -> dict[str, Any]:
        return {
            "centre": self.centre.tolist(),
            "annulus_radius": self.annulus_radius,
            "tube_radius": self.tube_radius,
            "tube_ratio": self.tube_ratio,
            "closure": self.closure,
            "rotation_consistent": self.rotation_consistent,
            "returns": self.returns,
            "passed": self.passed,
        }


def annulus_seeds(
    plane: SectionPlane, centre: ArrayLike, radius: float, count: int
) -> NDArray:
    """
    The centre followed by count - 1 points evenly spaced on the circle of
    the given radius about it, lifted from section coordinates.
    """
    centre = np.asarray(centre, dtype=float)
    angles = 2 * np.pi * np.arange(count - 1) / (count - 1)
    ring = centre + radius * np.stack([np.cos(angles), np.sin(angles)], -1)
    return plane.lift(np.vstack([centre, ring]))


def _closure(coordinates: NDArray) -> float:
    if len(coordinates) < 2:
        return np.inf
    distances = np.linalg.norm(coordinates[1:] - coordinates[0], axis=-1)
    return float(np.min(distances))


def persistence_witness(
    vector_field: Callable[[NDArray], NDArray],
    plane: SectionPlane,
    centre_seed: ArrayLike,
    annulus_radius: float,
    n_seeds: int = 9,
    n_returns: int = 100,
    refine: bool = True,
    tube_factor: float = TUBE_FACTOR,
    closure_tolerance: float = CLOSURE_TOLERANCE,
    **section_options: Any,
) -> tuple[PersistenceReport, PoincareSection]:
    """
    Seed the refined fixed point and a ring around it, and follow every seed
    through n_returns returns.

    Arguments:
        vector_field: the field whose lines are followed
        plane: a section transversal to the closed line
        centre_seed: a point near where the closed line pierces the section
        annulus_radius: ring radius in section coordinates
        n_seeds: the centre plus n_seeds - 1 ring points
        n_returns: returns per seed
        refine: move the centre to the return-map fixed point first
        tube_factor: allowed tube to annulus radius ratio
        closure_tolerance: allowed closure of the best seed
        section_options: passed on to poincare_section

    Returns:
        the report and the section it was measured on

    Raises:
        PreconditionError: for fewer than two seeds or a nonpositive radius
    """
    if n_seeds < 2 or annulus_radius <= 0:
        raise PreconditionError(
            f"need n_seeds >= 2 and a positive radius, got {n_seeds}, "
            f"{annulus_radius}",
            stage="section",
        )

    if refine:
        centre = refine_elliptic_seed(
            vector_field, plane, centre_seed, **section_options
        ).coordinates
    else:
        centre = plane.coordinates(centre_seed)[0]

    seeds = annulus_seeds(plane, centre, annulus_radius, n_seeds)
    section = poincare_section(
        vector_field, plane, seeds, n_returns, **section_options
    )

    ring = section.coordinates[1:]
    tube_radius = max(
        float(np.max(np.linalg.norm(c - centre, axis=-1))) for c in ring
    )
    report = PersistenceReport(
        centre=centre,
        annulus_radius=float(annulus_radius),
        tube_radius=tube_radius,
        closure=min(_closure(c) for c in section.coordinates),
        rotation_senses=tuple(rotation_sense(centre, c) for c in ring),
        returns=n_returns,
        tube_factor=tube_factor,
        closure_tolerance=closure_tolerance,
    )
    _logger.info(
        f"Persistence witness: tube ratio {report.tube_ratio:.3f}, closure "
        f"{report.closure:.3e}, passed {report.passed}"
    )
    return report, section
