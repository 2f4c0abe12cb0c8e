"""
Poincaré sections of field lines and detection of closed orbits from
their return maps.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import null_space
from scipy.optimize import brentq

from beltrami import TORUS_PERIOD
from beltrami.errors.beltrami_errors import (
    OrbitEscapeError,
    PreconditionError,
    TransversalityError,
)
from beltrami.lib.dynamics.integrator import (
    DormandPrince54,
    StepBatch,
    check_tolerance,
    hermite,
)
from beltrami.lib.dynamics.trajectory import VelocityField, velocity_field

_logger = logging.getLogger(__name__)

# crossings closer to the start are the seed itself
MIN_CROSSING_TIME = 1e-8
DEFAULT_TRANSVERSALITY = 1e-3
DEFAULT_MAX_TIME = 1e3
# a torus step must not span a period of the section
TORUS_MAX_STEP = 0.5


@dataclass(frozen=True)
class SectionPlane:
    """
    The section {y : (y - point)·normal = 0}, crossed from the negative to
    the positive side. On S^3 it is a great 2-sphere through point whose
    normal is tangent at point, and the section coordinates are those of
    the tangent plane.

    Attributes:
        point: a point of the section
        normal: unit normal
        basis: orthonormal rows spanning the section coordinates, (2, d)
        manifold: "euclidean", "sphere" or "torus"
    """

    point: NDArray
    normal: NDArray
    basis: NDArray
    manifold: str = "euclidean"

    @classmethod
    def through(
        cls, point: ArrayLike, normal: ArrayLike, manifold: str = "euclidean"
    ) -> "SectionPlane":
        """
        Raises:
            PreconditionError: for a degenerate normal
        """
        point = np.asarray(point, dtype=float).reshape(-1)
        normal = np.asarray(normal, dtype=float).reshape(-1)
        if point.shape != normal.shape:
            raise PreconditionError(
                f"point {point.shape} and normal {normal.shape} disagree",
                stage="section",
            )
        constraints = [normal]
        if manifold == "sphere":
            point = point / np.linalg.norm(point)
            normal = normal - (normal @ point) * point
            constraints = [normal, point]
        size = np.linalg.norm(normal)
        if size < 1e-12:
            raise PreconditionError(
                "section normal vanishes on the tangent space", stage="section"
            )
        normal = normal / size
        constraints[0] = normal
        basis = null_space(np.stack(constraints)).T
        if len(basis) != 2:
            raise PreconditionError(
                f"a section needs two coordinates, got {len(basis)}",
                stage="section",
            )
        return cls(point, normal, basis, manifold)

    @classmethod
    def transversal(
        cls,
        vector_field: Callable[[NDArray], NDArray],
        point: ArrayLike,
        manifold: str | None = None,
    ) -> "SectionPlane":
        """
        The section through point whose normal is the field there.
        """
        velocity = velocity_field(vector_field, manifold)
        point = velocity.seeds(point)
        return cls.through(
            point[0], velocity.rhs(point)[0], velocity.manifold
        )

    def _offsets(self, y: NDArray) -> NDArray:
        offsets = y - self.point
        if self.manifold == "torus":
            offsets = offsets - TORUS_PERIOD * np.rint(offsets / TORUS_PERIOD)
        return offsets

    def height(self, y: ArrayLike) -> NDArray:
        return self._offsets(np.atleast_2d(y)) @ self.normal

    def coordinates(self, y: ArrayLike) -> NDArray:
        return self._offsets(np.atleast_2d(y)) @ self.basis.T

    def lift(self, coordinates: ArrayLike) -> NDArray:
        """
        The points of the section with the given coordinates, shape (P, d).

        Raises:
            PreconditionError: for coordinates outside the unit disc on S^3
        """
        coordinates = np.atleast_2d(np.asarray(coordinates, dtype=float))
        planar = coordinates @ self.basis
        if self.manifold != "sphere":
            return self.point + planar
        radius_squared = np.sum(coordinates**2, axis=-1, keepdims=True)
        if np.any(radius_squared >= 1.0):
            raise PreconditionError(
                "section coordinates must lie in the unit disc on S^3",
                stage="section",
            )
        return np.sqrt(1.0 - radius_squared) * self.point + planar

    def as_dict(self) -> dict[str, Any]:
        return {
            "manifold": self.manifold,
            "point": self.point.tolist(),
            "normal": self.normal.tolist(),
            "basis": self.basis.tolist(),
        }


@dataclass
class PoincareSection:
    """
    Oriented crossings of field lines through a section, grouped by seed.

    Attributes:
        plane: the section
        seeds: initial points, shape (B, d)
        times: per seed, the crossing times
        points: per seed, the crossing points, shape (n, d)
        coordinates: per seed, section coordinates, shape (n, 2)
    """

    plane: SectionPlane
    seeds: NDArray
    times: list[NDArray] = field(default_factory=list)
    points: list[NDArray] = field(default_factory=list)
    coordinates: list[NDArray] = field(default_factory=list)

    def __len__(self) -> int:
        return sum(len(c) for c in self.coordinates)

    def returns(self, seed_id: int) -> NDArray:
        return self.coordinates[seed_id]

    def height_residual(self) -> float:
        """
        Largest |section equation| over all stored crossings.
        """
        stacked = [p for p in self.points if len(p)]
        if not stacked:
            return 0.0
        heights = self.plane.height(np.concatenate(stacked))
        return float(np.max(np.abs(heights)))

    def header(self) -> list[str]:
        return ["seed_id", "return_idx", "s1", "s2"]

    def rows(self) -> list[list[float]]:
        return [
            [seed_id, index, float(c[0]), float(c[1])]
            for seed_id, coordinates in enumerate(self.coordinates)
            for index, c in enumerate(coordinates)
        ]


def _crossing(
    plane: SectionPlane,
    velocity: VelocityField,
    batch: StepBatch,
    i: int,
) -> tuple[float, NDArray, NDArray]:
    t0, t1 = float(batch.t0[i]), float(batch.t1[i])
    step = (t0, batch.y0[i], batch.f0[i], t1, batch.y1[i], batch.f1[i])

    def interpolant(t: float) -> NDArray:
        point = hermite(*step, t)
        if velocity.project is not None:
            point = velocity.project(point[None])[0]
        return point

    def height(t: float) -> float:
        return float(plane.height(interpolant(t))[0])

    if height(t1) == 0.0:
        t_star = t1
    else:
        t_star = brentq(height, t0, t1, xtol=1e-14)
    s = (t_star - t0) / (t1 - t0)
    slope = (1.0 - s) * batch.f0[i] + s * batch.f1[i]
    return t_star, interpolant(t_star), slope


def poincare_section(
    vector_field: Callable[[NDArray], NDArray],
    plane: SectionPlane,
    seeds: ArrayLike,
    n_returns: int,
    tol: float = 1e-10,
    max_time: float = DEFAULT_MAX_TIME,
    region_radius: float | None = None,
    min_transversality: float = DEFAULT_TRANSVERSALITY,
    max_step: float = np.inf,
) -> PoincareSection:
    """
    Record the first n_returns oriented crossings of every seed's field
    line, each polished by root finding on the cubic Hermite interpolant of
    the step that brackets it.

    Arguments:
        vector_field: the velocity field
        plane: the section; its manifold selects the integration variant
        seeds: initial points
        n_returns: crossings per seed
        tol: integrator tolerance
        max_time: integration time allowed per seed
        region_radius: when set, crossings farther from the section point
            (in section coordinates) count as escapes
        min_transversality: lower bound on |u·n| / |u| at the first
            crossing
        max_step: largest integrator step

    Returns:
        the section, empty when n_returns is 0

    Raises:
        TransversalityError: if a first crossing is nearly tangential
        OrbitEscapeError: if a seed leaves the region or runs out of time
    """
    if n_returns < 0:
        raise PreconditionError(
            f"n_returns must be nonnegative, got {n_returns}", stage="section"
        )
    check_tolerance(tol)
    velocity = velocity_field(vector_field, plane.manifold)
    y0 = velocity.seeds(seeds)
    section = PoincareSection(
        plane,
        y0,
        [np.zeros(0) for _ in y0],
        [np.zeros((0, velocity.dimension)) for _ in y0],
        [np.zeros((0, 2)) for _ in y0],
    )
    if n_returns == 0 or len(y0) == 0:
        return section

    if plane.manifold == "torus":
        max_step = min(max_step, TORUS_MAX_STEP)
    stepper = DormandPrince54(
        velocity.rhs,
        y0,
        max_time,
        tol=tol,
        max_step=max_step,
        project=velocity.project,
    )
    crossings: list[list[tuple[float, NDArray, NDArray]]] = [[] for _ in y0]
    while not stepper.done:
        batch = stepper.advance()
        if len(batch.rows) == 0:
            continue
        g0 = plane.height(batch.y0)
        g1 = plane.height(batch.y1)
        # a real crossing cannot move the height further than the state
        jump = np.linalg.norm(batch.y1 - batch.y0, axis=-1)
        hits = (
            (g0 < 0.0)
            & (g1 >= 0.0)
            & (batch.t1 > MIN_CROSSING_TIME)
            & (g1 - g0 <= jump * (1 + 1e-9))
        )
        for i in np.flatnonzero(hits):
            row = int(batch.rows[i])
            t_star, point, slope = _crossing(plane, velocity, batch, i)
            if not crossings[row]:
                speed = np.linalg.norm(slope)
                ratio = abs(slope @ plane.normal) / speed if speed else 0.0
                if ratio < min_transversality:
                    raise TransversalityError(
                        f"seed {row} crosses the section at |u·n|/|u| = "
                        f"{ratio:.2e} below {min_transversality:.0e}"
                    )
            coordinates = plane.coordinates(point)[0]
            if (
                region_radius is not None
                and np.linalg.norm(coordinates) > region_radius
            ):
                raise OrbitEscapeError(
                    f"seed {row} return {len(crossings[row])} lies "
                    f"{np.linalg.norm(coordinates):.3e} from the section "
                    f"point, beyond {region_radius}"
                )
            crossings[row].append((t_star, point, coordinates))
            if len(crossings[row]) == n_returns:
                stepper.stop([row])

    for row, found in enumerate(crossings):
        if len(found) < n_returns:
            reason = stepper.diagnostics[row] or f"time {max_time} exhausted"
            raise OrbitEscapeError(
                f"seed {row} returned {len(found)} of {n_returns} times: "
                f"{reason}"
            )
        section.times[row] = np.array([c[0] for c in found])
        section.points[row] = np.array([c[1] for c in found])
        section.coordinates[row] = np.array([c[2] for c in found])

    _logger.debug(
        f"Section with {len(section)} crossings from {len(y0)} seeds"
    )
    return section


@dataclass(frozen=True)
class ClosedOrbit:
    """
    A seed whose returns stay within threshold of its first return.

    Attributes:
        seed_id: index of the seed in the section
        coordinates: mean of the returns in section coordinates
        spread: largest distance of a return from the first one
        returns: number of returns examined
    """

    seed_id: int
    coordinates: NDArray
    spread: float
    returns: int

    def as_dict(self) -> dict[str, Any]:
        return {
            "seed_id": self.seed_id,
            "coordinates": self.coordinates.tolist(),
            "spread": self.spread,
            "returns": self.returns,
        }


def detect_closed_orbits(
    section: PoincareSection, threshold: float = 1e-6, min_returns: int = 3
) -> list[ClosedOrbit]:
    """
    Seeds whose return map fixes their first return up to threshold, over
    at least min_returns returns.
    """
    orbits = []
    for seed_id, coordinates in enumerate(section.coordinates):
        if len(coordinates) < min_returns:
            continue
        spread = float(
            np.max(np.linalg.norm(coordinates - coordinates[0], axis=-1))
        )
        if spread <= threshold:
            orbits.append(
                ClosedOrbit(
                    seed_id, coordinates.mean(axis=0), spread, len(coordinates)
                )
            )
    _logger.info(
        f"{len(orbits)} closed orbits among {len(section.coordinates)} seeds"
    )
    return orbits


@dataclass(frozen=True)
class RefinedSeed:
    """
    Attributes:
        point: the refined seed on the section
        coordinates: its section coordinates
        spread: largest distance of its returns from the mean
        iterations: refinement rounds taken
    """

    point: NDArray
    coordinates: NDArray
    spread: float
    iterations: int


def refine_elliptic_seed(
    vector_field: Callable[[NDArray], NDArray],
    plane: SectionPlane,
    seed: ArrayLike,
    n_returns: int = 12,
    iterations: int = 8,
    tolerance: float = 1e-9,
    **section_options: Any,
) -> RefinedSeed:
    """
    Move a seed near an elliptic fixed point of the return map towards it by
    replacing the seed with the mean of its returns. Returns around an
    elliptic point rotate about it, so their mean lies closer to it than
    the seed did.
    """
    coordinates = plane.coordinates(seed)[0]
    spread = np.inf
    iteration = 0
    for iteration in range(1, iterations + 1):
        point = plane.lift(coordinates)
        returns = poincare_section(
            vector_field, plane, point, n_returns, **section_options
        ).returns(0)
        centre = returns.mean(axis=0)
        spread = float(np.max(np.linalg.norm(returns - centre, axis=-1)))
        moved = float(np.linalg.norm(centre - coordinates))
        coordinates = centre
        _logger.debug(
            f"Refinement {iteration}: spread {spread:.3e}, moved {moved:.3e}"
        )
        if spread <= tolerance or moved <= tolerance:
            break
    return RefinedSeed(
        plane.lift(coordinates)[0], coordinates, spread, iteration
    )


def rotation_sense(centre: ArrayLike, coordinates: ArrayLike) -> int:
    """
    The sign of the mean angular increment of consecutive returns about
    centre: +1 counterclockwise, -1 clockwise, 0 without motion.
    """
    offsets = np.atleast_2d(coordinates) - np.asarray(centre)
    angles = np.arctan2(offsets[:, 1], offsets[:, 0])
    if len(angles) < 2:
        return 0
    increments = np.angle(np.exp(1j * np.diff(angles)))
    return int(np.sign(np.mean(increments)))
