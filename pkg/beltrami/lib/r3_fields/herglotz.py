"""
Band-limited Herglotz densities on the unit sphere of frequency space.

A density f represents the Helmholtz field
v(x) = ∫_{S^2} f(ξ) e^{i x·ξ} dσ(ξ).
By the plane-wave expansion, the harmonic coefficients F_lm of f and the
Fourier-Bessel coefficients b_lm of v are related by b_lm = 4π i^l F_lm.
"""

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray

from beltrami.lib.r3_fields.fourier_bessel import FourierBesselSeries
from beltrami.lib.r3_fields.harmonics import (
    complex_harmonics,
    harmonic_indices,
)
from beltrami.lib.r3_fields.quadrature import SphereQuadrature
from beltrami.lib.specfun.bessel import spherical_bessel_table

_logger = logging.getLogger(__name__)

ZERO_DENSITY = 1e-14
_I_POWERS = np.array([1.0, 1j, -1.0, -1j])


@dataclass(frozen=True, eq=False)
class HerglotzDensity:
    """
    f(ξ) = Σ F_lm Y_lm(ξ) with vector coefficients F_lm ∈ C^3.

    Attributes:
        l_max: the band limit
        coefficients: complex array of shape (n_coefficients, 3)
    """

    l_max: int
    coefficients: NDArray

    @classmethod
    def from_function(
        cls,
        fn: Callable[[NDArray], NDArray],
        l_max: int,
        quadrature: SphereQuadrature | None = None,
    ) -> "HerglotzDensity":
        """
        Project a smooth density onto the harmonics of degree <= l_max.

        Arguments:
            fn: maps unit vectors (Q, 3) to values (Q, 3)
            l_max: the band limit
            quadrature: the sphere rule, exact for degree 2 * l_max + 8
                by default

        Returns:
            the projected density
        """
        quadrature = quadrature or SphereQuadrature.for_degree(2 * l_max + 8)
        harmonics = complex_harmonics(l_max, quadrature.nodes)
        values = np.asarray(fn(quadrature.nodes), dtype=complex)
        coefficients = np.einsum(
            "cq,q,qi->ci", np.conj(harmonics), quadrature.weights, values
        )
        return cls(l_max, coefficients)

    def __call__(self, xi: ArrayLike) -> NDArray:
        xi = np.asarray(xi, dtype=float).reshape(-1, 3)
        return np.einsum(
            "cq,ci->qi", complex_harmonics(self.l_max, xi), self.coefficients
        )

    def sup_norm(self, quadrature: SphereQuadrature | None = None) -> float:
        """
        The maximum of |f| over the nodes of a sphere rule.
        """
        quadrature = quadrature or SphereQuadrature.for_degree(self.l_max + 4)
        values = self(quadrature.nodes)
        return float(np.max(np.linalg.norm(values, axis=-1)))

    def is_zero(self) -> bool:
        largest = np.max(np.abs(self.coefficients), initial=0.0)
        return float(largest) < ZERO_DENSITY

    def field(self, x: ArrayLike) -> NDArray:
        """
        The represented field ∫ f(ξ) e^{i x·ξ} dσ(ξ) in closed form.

        Arguments:
            x: points of shape (P, 3)

        Returns:
            complex values of shape (P, 3)
        """
        x = np.asarray(x, dtype=float).reshape(-1, 3)
        indices = harmonic_indices(self.l_max)
        degrees = np.array([l for l, _ in indices])
        bessel = spherical_bessel_table(self.l_max, np.linalg.norm(x, axis=-1))
        basis = (
            4.0
            * np.pi
            * _I_POWERS[degrees % 4][:, None]
            * bessel[degrees]
            * complex_harmonics(self.l_max, x)
        )
        return np.einsum("cp,ci->pi", basis, self.coefficients)

    def integrate(self, x: ArrayLike, quadrature: SphereQuadrature) -> NDArray:
        """
        ∫ f(ξ) e^{i x·ξ} dσ(ξ) by direct sphere quadrature.
        """
        x = np.asarray(x, dtype=float).reshape(-1, 3)
        phases = np.exp(1j * x @ quadrature.nodes.T)
        return np.einsum(
            "pq,q,qi->pi", phases, quadrature.weights, self(quadrature.nodes)
        )


def herglotz_density(series: FourierBesselSeries) -> HerglotzDensity:
    """
    The density f = (1/4π) Σ b_lm (-i)^l Y_lm whose Herglotz field is the
    series.

    Arguments:
        series: a finite Fourier-Bessel series

    Returns:
        the band-limited density
    """
    degrees = np.array([l for l, _ in harmonic_indices(series.l_max)])
    phases = np.conj(_I_POWERS[degrees % 4])[:, None]
    coefficients = series.coefficients * phases / (4.0 * np.pi)
    _logger.debug(f"Herglotz density of band limit {series.l_max}")
    return HerglotzDensity(series.l_max, coefficients)
