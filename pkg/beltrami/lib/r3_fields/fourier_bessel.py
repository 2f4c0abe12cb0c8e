"""
Fourier-Bessel expansion of Helmholtz fields in a ball.
"""

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from beltrami.errors.beltrami_errors import PreconditionError
from beltrami.lib.r3_fields.fields import R3Field
from beltrami.lib.r3_fields.harmonics import (
    complex_harmonics,
    harmonic_indices,
)
from beltrami.lib.r3_fields.quadrature import SphereQuadrature, ball_quadrature
from beltrami.lib.specfun.bessel import spherical_bessel_table

_logger = logging.getLogger(__name__)

MAX_EXPANSION_DEGREE = 32
EXPANSION_RADIUS = 2.0


@dataclass(frozen=True, eq=False)
class FourierBesselSeries(R3Field):
    """
    The truncated series Σ b_lm j_l(r) Y_lm(x/r) with vector coefficients.

    Attributes:
        l_max: the cutoff degree l0
        coefficients: complex array of shape (n_coefficients, 3), ordered
            as harmonic_indices(l_max)
    """

    l_max: int
    coefficients: NDArray

    max_order = 0
    helmholtz = True

    @property
    def indices(self) -> list[tuple[int, int]]:
        return harmonic_indices(self.l_max)

    def degree_norms(self) -> NDArray:
        """
        The Euclidean norm of the coefficients of each degree l.
        """
        norms = np.zeros(self.l_max + 1)
        for (l, _), coefficient in zip(self.indices, self.coefficients):
            norms[l] += np.sum(np.abs(coefficient) ** 2)
        return np.sqrt(norms)

    def _jets(self, points: NDArray, order: int) -> list[NDArray]:
        radius = np.linalg.norm(points, axis=-1)
        bessel = spherical_bessel_table(self.l_max, radius)
        harmonics = complex_harmonics(self.l_max, points)
        degrees = np.array([l for l, _ in self.indices])
        basis = bessel[degrees] * harmonics
        return [np.einsum("cp,ci->pi", basis, self.coefficients).real]


def _symmetrize(l_max: int, coefficients: NDArray) -> NDArray:
    """
    Impose b_{l,-m} = (-1)^m conj(b_lm), the condition for a real series.
    """
    position = {
        index: row for row, index in enumerate(harmonic_indices(l_max))
    }
    symmetric = np.empty_like(coefficients)
    for (l, m), row in position.items():
        mirror = coefficients[position[(l, -m)]]
        symmetric[row] = 0.5 * (
            coefficients[row] + (-1) ** m * np.conj(mirror)
        )
    return symmetric


def fourier_bessel_expand(
    field: R3Field,
    l_max: int,
    grid: SphereQuadrature | None = None,
    radius: float = EXPANSION_RADIUS,
    n_radial: int | None = None,
) -> FourierBesselSeries:
    """
    The L^2(B_radius) projection of a Helmholtz field onto the span of
    j_l(r) Y_lm(x/r), l <= l_max.

    Arguments:
        field: the field to expand, assumed to satisfy Δv + v = 0
        l_max: the cutoff degree l0, at most 32
        grid: the sphere quadrature; defaults to one exact for degree
            l_max + 8
        radius: the ball radius
        n_radial: Gauss-Legendre nodes in r, default l_max + 16

    Returns:
        the series with symmetrized coefficients

    Raises:
        PreconditionError: if l_max is out of range or the grid is too
            coarse for l_max
    """
    if not 0 <= l_max <= MAX_EXPANSION_DEGREE:
        raise PreconditionError(
            f"cutoff degree {l_max} not in 0..{MAX_EXPANSION_DEGREE}",
            stage="expand",
        )

    grid = grid or SphereQuadrature.for_degree(l_max + 8)
    if grid.size < 2 * (l_max + 1) ** 2:
        raise PreconditionError(
            f"{grid.size} sphere nodes alias degree {l_max}; at least "
            f"{2 * (l_max + 1) ** 2} are required",
            stage="expand",
        )

    n_radial = n_radial or l_max + 16
    nodes, weights = np.polynomial.legendre.leggauss(n_radial)
    r = 0.5 * radius * (nodes + 1.0)
    radial_weights = 0.5 * radius * weights * r**2

    points = (r[:, None, None] * grid.nodes[None]).reshape(-1, 3)
    values = field(points).reshape(n_radial, grid.size, 3)
    harmonics = complex_harmonics(l_max, grid.nodes)
    # v_lm(r) = ∫ v(rω) conj(Y_lm(ω)) dω
    shells = np.einsum(
        "cq,q,rqi->rci", np.conj(harmonics), grid.weights, values
    )

    bessel = spherical_bessel_table(l_max, r)
    degrees = np.array([l for l, _ in harmonic_indices(l_max)])
    numerator = np.einsum(
        "r,cr,rci->ci", radial_weights, bessel[degrees], shells
    )
    gram = np.einsum("r,lr->l", radial_weights, bessel**2)
    coefficients = numerator / gram[degrees][:, None]

    series = FourierBesselSeries(l_max, _symmetrize(l_max, coefficients))
    _logger.info(
        f"Fourier-Bessel expansion to degree {l_max} on "
        f"{n_radial}x{grid.size} nodes"
    )
    return series


def l2_residual(
    series: R3Field,
    field: R3Field,
    radius: float = EXPANSION_RADIUS,
    n_radial: int = 24,
    grid: SphereQuadrature | None = None,
) -> float:
    """
    ‖series - field‖ in L^2 of the ball of the given radius.
    """
    grid = grid or SphereQuadrature.for_degree(24)
    points, weights = ball_quadrature(radius, n_radial, grid)
    difference = series(points) - field(points)
    squared = np.sum(np.abs(difference) ** 2, axis=-1)
    return float(np.sqrt(np.sum(weights * squared)))
