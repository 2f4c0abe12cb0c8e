"""
Quadrature rules and partitions of the unit sphere S^2 and of balls.
"""

import functools
import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

_logger = logging.getLogger(__name__)


class SphereQuadrature:
    """
    Product rule on S^2: Gauss-Legendre in cos θ times the uniform rule in
    φ. Exact for polynomials of degree < 2 * n_theta in cos θ and azimuthal
    frequency < n_phi.

    Attributes:
        n_theta: number of Gauss-Legendre nodes in cos θ
        n_phi: number of azimuthal nodes
    """

    def __init__(self, n_theta: int, n_phi: int) -> None:
        if n_theta < 1 or n_phi < 1:
            raise ValueError(
                f"quadrature needs positive sizes, got {n_theta}x{n_phi}"
            )
        self.n_theta = n_theta
        self.n_phi = n_phi

    @classmethod
    def for_degree(cls, degree: int) -> "SphereQuadrature":
        """
        A rule integrating products of harmonics up to `degree` exactly.
        """
        return cls(degree + 2, 2 * degree + 4)

    @property
    def size(self) -> int:
        return self.n_theta * self.n_phi

    @functools.cached_property
    def _rule(self) -> tuple[NDArray, NDArray]:
        cos_theta, theta_weights = np.polynomial.legendre.leggauss(
            self.n_theta
        )
        phi = 2.0 * np.pi * np.arange(self.n_phi) / self.n_phi
        sin_theta = np.sqrt(1.0 - cos_theta**2)
        nodes = np.stack(
            [
                np.outer(sin_theta, np.cos(phi)),
                np.outer(sin_theta, np.sin(phi)),
                np.outer(cos_theta, np.ones_like(phi)),
            ],
            axis=-1,
        ).reshape(-1, 3)
        weights = np.outer(
            theta_weights, np.full(self.n_phi, 2.0 * np.pi / self.n_phi)
        ).reshape(-1)
        return nodes, weights

    @property
    def nodes(self) -> NDArray:
        return self._rule[0]

    @property
    def weights(self) -> NDArray:
        return self._rule[1]


def ball_quadrature(
    radius: float, n_radial: int, sphere: SphereQuadrature
) -> tuple[NDArray, NDArray]:
    """
    Product rule on the ball of the given radius: Gauss-Legendre in r with
    the r^2 Jacobian, times a sphere rule.

    Returns:
        points of shape (n_radial * sphere.size, 3) and their weights
    """
    nodes, weights = np.polynomial.legendre.leggauss(n_radial)
    r = 0.5 * radius * (nodes + 1.0)
    radial_weights = 0.5 * radius * weights * r**2
    points = (r[:, None, None] * sphere.nodes[None]).reshape(-1, 3)
    point_weights = np.outer(radial_weights, sphere.weights).reshape(-1)
    return points, point_weights


def ball_grid(radius: float, grid_n: int) -> NDArray:
    """
    The points of a grid_n^3 lattice on [-radius, radius]^3 inside the
    closed ball.
    """
    axis = np.linspace(-radius, radius, grid_n)
    points = np.stack(np.meshgrid(axis, axis, axis, indexing="ij"), -1)
    points = points.reshape(-1, 3)
    return points[np.linalg.norm(points, axis=-1) <= radius * (1 + 1e-12)]


@dataclass(frozen=True)
class EqualAreaPartition:
    """
    A partition of S^2 into regions of equal area.

    Attributes:
        centres: unit vectors, one per region
        area: the common area 4π / N
        diameters: angular diameter of each region
        collars: number of regions in each collar, caps included
    """

    centres: NDArray
    area: float
    diameters: NDArray
    collars: tuple[int, ...]

    @property
    def max_diameter(self) -> float:
        return float(np.max(self.diameters))


def _polar_point(theta: float, phi: float) -> NDArray:
    return np.array(
        [
            math.sin(theta) * math.cos(phi),
            math.sin(theta) * math.sin(phi),
            math.cos(theta),
        ]
    )


def _region_diameter(
    theta_top: float, theta_bottom: float, phi_start: float, phi_end: float
) -> float:
    corners = [
        _polar_point(theta, phi)
        for theta in (
            theta_top, 0.5 * (theta_top + theta_bottom), theta_bottom
        )
        for phi in (phi_start, 0.5 * (phi_start + phi_end), phi_end)
    ]
    chord = max(
        np.linalg.norm(a - b) for a in corners for b in corners
    )
    return 2.0 * math.asin(min(1.0, chord / 2.0))


def _cap_colatitude(area: float) -> float:
    return math.acos(max(-1.0, 1.0 - area / (2.0 * math.pi)))


def equal_area_partition(n: int) -> EqualAreaPartition:
    """
    Recursive zonal equal-area partition of S^2 into n regions: two polar
    caps and collars of regions whose count follows the rounded ideal
    counts with carried remainders.

    Arguments:
        n: number of regions, at least 1

    Returns:
        the partition with region centres and diameters

    Raises:
        ValueError: if n < 1
    """
    if n < 1:
        raise ValueError(f"partition needs at least one region, got {n}")

    area = 4.0 * math.pi / n
    if n == 1:
        return EqualAreaPartition(
            np.array([[0.0, 0.0, 1.0]]), area, np.array([math.pi]), (1,)
        )

    if n == 2:
        return EqualAreaPartition(
            np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]]),
            area,
            np.array([math.pi, math.pi]),
            (1, 1),
        )

    cap = _cap_colatitude(area)
    ideal_angle = math.sqrt(area)
    n_collars = max(1, round((math.pi - 2.0 * cap) / ideal_angle))
    fitting_angle = (math.pi - 2.0 * cap) / n_collars

    counts = []
    carry = 0.0
    for i in range(n_collars):
        top = cap + i * fitting_angle
        bottom = cap + (i + 1) * fitting_angle
        ideal = 2.0 * math.pi * (math.cos(top) - math.cos(bottom)) / area
        count = round(ideal + carry)
        carry += ideal - count
        counts.append(count)

    centres = [np.array([0.0, 0.0, 1.0])]
    diameters = [2.0 * cap]
    regions_above = 1
    theta_top = cap
    for i, count in enumerate(counts):
        regions_above += count
        theta_bottom = _cap_colatitude(regions_above * area)
        if i == len(counts) - 1:
            theta_bottom = math.pi - cap
        if count == 0:
            theta_top = theta_bottom
            continue

        width = 2.0 * math.pi / count
        offset = 0.5 * width * (i % 2)
        mean_cos = 0.5 * (math.cos(theta_top) + math.cos(theta_bottom))
        theta_centre = math.acos(mean_cos)
        diameter = _region_diameter(theta_top, theta_bottom, 0.0, width)
        for j in range(count):
            phi = offset + (j + 0.5) * width
            centres.append(_polar_point(theta_centre, phi))
            diameters.append(diameter)
        theta_top = theta_bottom

    centres.append(np.array([0.0, 0.0, -1.0]))
    diameters.append(2.0 * cap)

    partition = EqualAreaPartition(
        np.array(centres),
        area,
        np.array(diameters),
        (1, *counts, 1),
    )
    _logger.debug(
        f"Equal-area partition of S^2 into {n} regions, "
        f"collars {partition.collars}, max diameter {partition.max_diameter}"
    )
    return partition
