"""
Spherical Bessel functions of the first kind.
"""

import logging

import numpy as np
from numpy.typing import ArrayLike, NDArray

from beltrami.errors.beltrami_errors import UnsupportedDegreeError

_logger = logging.getLogger(__name__)

MAX_BESSEL_DEGREE = 64
_TAYLOR_RADIUS = 1.0
_TAYLOR_TERMS = 25
_MILLER_PADDING = 40
_RESCALE_THRESHOLD = 1e150


def _check_degree(l_max: int) -> None:
    if l_max < 0:
        raise UnsupportedDegreeError(f"negative degree {l_max}")

    if l_max > MAX_BESSEL_DEGREE:
        raise UnsupportedDegreeError(
            f"degree {l_max} above the supported cap {MAX_BESSEL_DEGREE}"
        )


def _taylor_table(l_max: int, t: NDArray) -> NDArray:
    """
    Power series of j_0..j_l_max, used where |t| < 1.
    """
    table = np.empty((l_max + 1,) + t.shape)
    half_square = -0.5 * t * t
    prefactor = np.ones_like(t)
    for degree in range(l_max + 1):
        if degree > 0:
            prefactor = prefactor * t / (2 * degree + 1)

        term = np.ones_like(t)
        total = np.ones_like(t)
        for m in range(1, _TAYLOR_TERMS):
            term = term * half_square / (m * (2 * degree + 2 * m + 1))
            total = total + term

        table[degree] = prefactor * total

    return table


def _upward_table(l_max: int, t: NDArray) -> NDArray:
    """
    Upward recurrence from the closed forms of j_0 and j_1, stable for
    |t| >= l_max.
    """
    table = np.empty((l_max + 1,) + t.shape)
    table[0] = np.sin(t) / t
    if l_max == 0:
        return table

    table[1] = np.sin(t) / t**2 - np.cos(t) / t
    for degree in range(1, l_max):
        table[degree + 1] = (2 * degree + 1) / t * table[degree] - table[
            degree - 1
        ]

    return table


def _miller_table(l_max: int, t: NDArray) -> NDArray:
    """
    Downward (Miller) recurrence seeded above l_max and normalized against
    the closed forms of j_0 or j_1, whichever is larger in magnitude.
    """
    start = l_max + _MILLER_PADDING
    table = np.zeros((l_max + 1,) + t.shape)
    upper = np.zeros_like(t)
    current = np.full_like(t, 1e-30)
    for degree in range(start, 0, -1):
        lower = (2 * degree + 1) / t * current - upper
        upper, current = current, lower
        if degree - 1 <= l_max:
            table[degree - 1] = current

        overflow = np.abs(current) > _RESCALE_THRESHOLD
        if np.any(overflow):
            upper = np.where(overflow, upper / _RESCALE_THRESHOLD, upper)
            current = np.where(
                overflow, current / _RESCALE_THRESHOLD, current
            )
            table[:, overflow] /= _RESCALE_THRESHOLD

    # current holds the unnormalized j_0 and upper the unnormalized j_1
    j0 = np.sin(t) / t
    j1 = np.sin(t) / t**2 - np.cos(t) / t
    scale = np.where(np.abs(j0) >= np.abs(j1), j0 / current, j1 / upper)
    return table * scale


def spherical_bessel_table(l_max: int, t: ArrayLike) -> NDArray:
    """
    Evaluate j_0, ..., j_l_max at every argument in one sweep.

    Small arguments use the power series, arguments below the degree use
    Miller's downward recurrence and the rest the upward recurrence.

    Arguments:
        l_max: highest degree, at most MAX_BESSEL_DEGREE
        t: real arguments of any shape

    Returns:
        array of shape (l_max + 1,) + shape(t)

    Raises:
        UnsupportedDegreeError: if l_max is negative or above the cap
    """
    _check_degree(l_max)
    t = np.asarray(t, dtype=float)
    magnitude = np.abs(t)
    table = np.empty((l_max + 1,) + t.shape)

    small = magnitude < _TAYLOR_RADIUS
    large = magnitude >= max(l_max, _TAYLOR_RADIUS)
    middle = ~(small | large)

    if np.any(small):
        table[:, small] = _taylor_table(l_max, magnitude[small])
    if np.any(large):
        table[:, large] = _upward_table(l_max, magnitude[large])
    if np.any(middle):
        table[:, middle] = _miller_table(l_max, magnitude[middle])

    # j_l(-t) = (-1)^l j_l(t)
    odd = (np.arange(l_max + 1) % 2 == 1).reshape((-1,) + (1,) * t.ndim)
    return np.where(odd & (t < 0), -table, table)


def spherical_bessel(l: int, t: ArrayLike) -> NDArray | float:
    """
    Spherical Bessel function j_l(t).

    >>> float(spherical_bessel(0, 0.0))
    1.0

    Arguments:
        l: degree, 0 <= l <= 64
        t: real argument or array of arguments

    Returns:
        j_l(t), a float for scalar input
    """
    values = spherical_bessel_table(l, t)[l]
    return float(values) if values.ndim == 0 else values
