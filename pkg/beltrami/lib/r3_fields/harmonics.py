"""
Spherical harmonics on S^2 and real solid harmonics on R^3.
"""

import functools
import math

import numpy as np
from numpy.polynomial import polynomial as P
from numpy.typing import ArrayLike, NDArray
from scipy.signal import convolve
from scipy.special import sph_harm_y


def harmonic_indices(l_max: int) -> list[tuple[int, int]]:
    """
    The (l, m) pairs with 0 <= l <= l_max, ordered by l then m.

    >>> harmonic_indices(1)
    [(0, 0), (1, -1), (1, 0), (1, 1)]
    """
    return [(l, m) for l in range(l_max + 1) for m in range(-l, l + 1)]


def spherical_angles(directions: ArrayLike) -> tuple[NDArray, NDArray]:
    """
    Polar and azimuthal angles of (not necessarily unit) directions.
    """
    directions = np.asarray(directions, dtype=float)
    radius = np.linalg.norm(directions, axis=-1)
    safe = np.where(radius > 0, radius, 1.0)
    polar = np.arccos(np.clip(directions[..., 2] / safe, -1.0, 1.0))
    azimuth = np.arctan2(directions[..., 1], directions[..., 0])
    return polar, azimuth


def complex_harmonics(l_max: int, directions: ArrayLike) -> NDArray:
    """
    Orthonormal complex Y_lm (Condon-Shortley phase) at each direction.

    Zero vectors are treated as the north pole.

    Arguments:
        l_max: highest degree
        directions: array of shape (Q, 3)

    Returns:
        array of shape (len(harmonic_indices(l_max)), Q)
    """
    polar, azimuth = spherical_angles(directions)
    return np.stack(
        [
            sph_harm_y(l, m, polar, azimuth)
            for l, m in harmonic_indices(l_max)
        ]
    )


def _monomial(powers: tuple[int, int, int], size: int) -> NDArray:
    coefficients = np.zeros((size,) * 3)
    coefficients[powers] = 1.0
    return coefficients


def _product(a: NDArray, b: NDArray, size: int) -> NDArray:
    return convolve(a, b)[:size, :size, :size]


@functools.lru_cache(maxsize=None)
def solid_harmonic_coefficients(l: int, m: int) -> NDArray:
    """
    Coefficients c[i, j, k] of x^i y^j z^k for the real solid harmonic
    r^l Y_lm (cosine type for m > 0, sine type for m < 0).

    Arguments:
        l: degree
        m: order, |m| <= l

    Returns:
        array of shape (l + 1, l + 1, l + 1)

    Raises:
        ValueError: if |m| > l
    """
    if abs(m) > l:
        raise ValueError(f"order {m} exceeds degree {l}")

    size = l + 1
    order = abs(m)

    # (x + iy)^|m| split into real and imaginary parts
    real_part = np.zeros((size,) * 3)
    imaginary_part = np.zeros((size,) * 3)
    for j in range(order + 1):
        term = math.comb(order, j) * _monomial((order - j, j, 0), size)
        phase = j % 4
        if phase == 0:
            real_part += term
        elif phase == 1:
            imaginary_part += term
        elif phase == 2:
            real_part -= term
        else:
            imaginary_part -= term

    r_squared = (
        _monomial((2, 0, 0), size)
        + _monomial((0, 2, 0), size)
        + _monomial((0, 0, 2), size)
    )
    # r^(l-|m|) d^|m| P_l(cos θ) as a polynomial in z and r^2
    axial = np.zeros((size,) * 3)
    r_power = _monomial((0, 0, 0), size)
    for k in range((l - order) // 2 + 1):
        power = l - 2 * k - order
        weight = (
            (-1) ** k
            * math.comb(l, k)
            * math.comb(2 * l - 2 * k, l)
            * math.factorial(l - 2 * k)
            / math.factorial(power)
            / 2**l
        )
        axial += weight * _product(
            r_power, _monomial((0, 0, power), size), size
        )
        r_power = _product(r_power, r_squared, size)

    normalization = math.sqrt(
        (2 * l + 1)
        / (4 * math.pi)
        * math.factorial(l - order)
        / math.factorial(l + order)
    )
    if m == 0:
        return normalization * axial

    azimuthal = real_part if m > 0 else imaginary_part
    return math.sqrt(2.0) * normalization * _product(azimuthal, axial, size)


class SolidHarmonic:
    """
    The real solid harmonic R_lm(x) = r^l Y_lm(x / r) with exact polynomial
    partial derivatives.
    """

    def __init__(self, l: int, m: int) -> None:
        self.l = l
        self.m = m
        self.coefficients = solid_harmonic_coefficients(l, m)

    @functools.lru_cache(maxsize=None)
    def _derivative_coefficients(
        self, counts: tuple[int, int, int]
    ) -> NDArray:
        coefficients = self.coefficients
        for axis, count in enumerate(counts):
            if count:
                coefficients = P.polyder(coefficients, count, axis=axis)
        return coefficients

    def partial(self, x: NDArray, index: tuple[int, ...]) -> NDArray:
        """
        The partial derivative along the given axes at points x of shape
        (P, 3).
        """
        counts = tuple(index.count(axis) for axis in range(3))
        if sum(counts) > self.l:
            return np.zeros(x.shape[:-1])

        return P.polyval3d(
            x[..., 0],
            x[..., 1],
            x[..., 2],
            self._derivative_coefficients(counts),
        )

    def __call__(self, x: NDArray) -> NDArray:
        return self.partial(np.asarray(x, dtype=float), ())
