"""
Geodesic normal coordinates on S^3.
"""

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from beltrami import DEFAULT_BASE_POINT
from beltrami.lib.s3.hopf import as_s3_points, hopf_frame

_logger = logging.getLogger(__name__)


def _sin_ratio(r: NDArray) -> NDArray:
    # np.sinc(x) = sin(pi x) / (pi x)
    return np.sinc(r / np.pi)


@dataclass(frozen=True, eq=False)
class NormalChart:
    """
    Normal coordinates x ∈ R^3 around a base point, with
    Ψ^-1(x) = cos|x| p0 + sin|x| Σ x_i f_i / |x| and f_i = h_i(p0).

    Attributes:
        base_point: p0, a unit vector of R^4
        frame: the rows f_1, f_2, f_3, shape (3, 4)
    """

    base_point: NDArray
    frame: NDArray

    def to_sphere(self, x: ArrayLike) -> NDArray:
        """
        The exponential map Ψ^-1.

        Arguments:
            x: coordinates of shape (P, 3) or (3,)

        Returns:
            unit vectors of shape (P, 4) or (4,)
        """
        x = np.asarray(x, dtype=float)
        points = x.reshape(-1, 3)
        r = np.linalg.norm(points, axis=-1)[:, None]
        image = np.cos(r) * self.base_point + _sin_ratio(r) * (
            points @ self.frame
        )
        return image.reshape(x.shape[:-1] + (4,))

    def from_sphere(self, p: ArrayLike) -> NDArray:
        """
        The chart Ψ, valid away from the antipode of p0.

        Arguments:
            p: points of shape (P, 4) or (4,)

        Returns:
            coordinates with |x| = dist(p0, p)
        """
        p = np.asarray(p, dtype=float)
        points = p.reshape(-1, 4)
        transverse = points @ self.frame.T
        sine = np.linalg.norm(transverse, axis=-1)
        r = np.arctan2(sine, points @ self.base_point)
        scale = np.where(sine > 0, r / np.where(sine > 0, sine, 1.0), 1.0)
        return (scale[:, None] * transverse).reshape(p.shape[:-1] + (3,))

    def differential(self, x: ArrayLike, vectors: ArrayLike) -> NDArray:
        """
        Coordinate components of tangent vectors at Ψ^-1(x), i.e. the
        pushforward by Ψ.

        With ω = x/|x| and τ = -sin r p0 + cos r Σ ω_i f_i the radial unit
        vector, the components are (u·τ) ω plus the transverse part of
        F u scaled by r / sin r.

        Arguments:
            x: coordinates of shape (P, 3)
            vectors: tangent vectors of shape (P, 4) at Ψ^-1(x)

        Returns:
            components of shape (P, 3)
        """
        x = np.asarray(x, dtype=float).reshape(-1, 3)
        vectors = np.asarray(vectors, dtype=float).reshape(-1, 4)
        r = np.linalg.norm(x, axis=-1)
        safe = np.where(r > 0, r, 1.0)
        omega = np.where(r[:, None] > 0, x / safe[:, None], [1.0, 0.0, 0.0])

        tangent = (
            -np.sin(r)[:, None] * self.base_point
            + np.cos(r)[:, None] * (omega @ self.frame)
        )
        radial = np.einsum("pk,pk->p", vectors, tangent)
        projected = vectors @ self.frame.T
        along = np.einsum("pi,pi->p", omega, projected)
        transverse = projected - along[:, None] * omega
        return radial[:, None] * omega + transverse / _sin_ratio(r)[:, None]


def exp_chart(base_point: ArrayLike = DEFAULT_BASE_POINT) -> NormalChart:
    """
    The normal chart at p0 with frame f_i = h_i(p0), so that Ψ_* h_i(p0)
    is the i-th coordinate vector.

    Arguments:
        base_point: p0, renormalized to unit length

    Returns:
        the chart
    """
    base = as_s3_points(base_point)
    frame = hopf_frame(base)[:, 0, :]
    _logger.debug(f"Normal chart at {base[0]}")
    return NormalChart(base[0], frame)
