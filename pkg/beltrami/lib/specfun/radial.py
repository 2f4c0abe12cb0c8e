"""
Radial kernels and Cartesian derivative tensors of radial Helmholtz
solutions.

With s = r^2 / 2 and φ(s) = j_0(r), every derivative d/ds is (1/r) d/dr, so
φ^(k)(s) = (-1)^k j_k(r) / r^k. The Cartesian partials of φ^(k0)(|y|^2 / 2)
follow from pairing the derivative indices: each index either stays single
(contributing y_a) or pairs with another (contributing δ_ab), and a term with
b blocks carries φ^(k0 + b).
"""

import functools
import itertools

import numpy as np
from numpy.typing import ArrayLike, NDArray

from beltrami.lib.specfun.bessel import (
    MAX_BESSEL_DEGREE,
    spherical_bessel_table,
)

_SERIES_RADIUS = 1.0
_SERIES_TERMS = 22


def _double_factorial_odd(n: int) -> float:
    # (2n + 1)!!
    return float(np.prod(np.arange(1, 2 * n + 2, 2, dtype=float)))


def radial_kernels(k_max: int, r: ArrayLike) -> NDArray:
    """
    φ^(k)(r^2 / 2) for k = 0..k_max.

    Arguments:
        k_max: highest kernel order
        r: nonnegative radii

    Returns:
        array of shape (k_max + 1,) + shape(r)
    """
    r = np.abs(np.asarray(r, dtype=float))
    kernels = np.empty((k_max + 1,) + r.shape)
    small = r < _SERIES_RADIUS

    if np.any(small):
        half_square = -0.5 * r[small] ** 2
        for k in range(k_max + 1):
            # j_k(r) / r^k = sum_m (-r^2/2)^m / (m! (2k + 2m + 1)!!)
            term = np.full_like(half_square, 1.0 / _double_factorial_odd(k))
            total = term.copy()
            for m in range(1, _SERIES_TERMS):
                term = term * half_square / (m * (2 * k + 2 * m + 1))
                total = total + term

            kernels[k, small] = (-1) ** k * total

    if np.any(~small):
        large_r = r[~small]
        table = spherical_bessel_table(k_max, large_r)
        for k in range(k_max + 1):
            kernels[k, ~small] = (-1) ** k * table[k] / large_r**k

    return kernels


def radial_kernel(k: int, r: ArrayLike) -> NDArray | float:
    """
    ((1/r) d/dr)^k j_0(r), finite at r = 0.

    >>> round(radial_kernel(1, 0.0), 12)
    -0.333333333333

    Arguments:
        k: kernel order, at most 64
        r: radius or radii

    Returns:
        the kernel value(s)
    """
    values = radial_kernels(k, r)[k]
    return float(values) if values.ndim == 0 else values


@functools.lru_cache(maxsize=None)
def _matchings(n: int) -> tuple:
    """
    Every partial matching of positions 0..n-1 as (pairs, singles).
    """

    def extend(remaining: tuple[int, ...]):
        if not remaining:
            yield (), ()
            return

        head, rest = remaining[0], remaining[1:]
        for pairs, singles in extend(rest):
            yield pairs, (head,) + singles

        for index, partner in enumerate(rest):
            others = rest[:index] + rest[index + 1 :]
            for pairs, singles in extend(others):
                yield ((head, partner),) + pairs, singles

    return tuple(extend(tuple(range(n))))


def symmetric_tensor(
    values: dict[tuple[int, ...], NDArray], order: int, lead_shape: tuple
) -> NDArray:
    """
    Expand values keyed by sorted index tuples into a full symmetric tensor.

    Arguments:
        values: one array of shape lead_shape per sorted index tuple
        order: tensor order
        lead_shape: shape of each entry

    Returns:
        array of shape lead_shape + (3,) * order
    """
    if order == 0:
        return np.asarray(values[()]).reshape(lead_shape)

    entries = [
        values[tuple(sorted(index))]
        for index in itertools.product(range(3), repeat=order)
    ]
    stacked = np.stack(entries, axis=-1)
    return stacked.reshape(lead_shape + (3,) * order)


def radial_derivative_tensor(
    k0: int, y: ArrayLike, order: int, kernels: NDArray | None = None
) -> NDArray:
    """
    All Cartesian partials of order `order` of φ^(k0)(|y|^2 / 2).

    Arguments:
        k0: base kernel order
        y: points of shape (..., 3)
        order: derivative order
        kernels: precomputed radial_kernels(k0 + order, |y|), optional

    Returns:
        array of shape y.shape[:-1] + (3,) * order

    Raises:
        ValueError: if the required kernel order exceeds the Bessel cap
    """
    y = np.asarray(y, dtype=float)
    if k0 + order > MAX_BESSEL_DEGREE:
        raise ValueError(f"kernel order {k0 + order} above the Bessel cap")

    if kernels is None:
        kernels = radial_kernels(k0 + order, np.linalg.norm(y, axis=-1))

    lead_shape = y.shape[:-1]
    values = {}
    for index in itertools.combinations_with_replacement(range(3), order):
        total = np.zeros(lead_shape)
        for pairs, singles in _matchings(order):
            if any(index[a] != index[b] for a, b in pairs):
                continue

            term = kernels[k0 + len(pairs) + len(singles)]
            for position in singles:
                term = term * y[..., index[position]]
            total = total + term

        values[index] = total

    return symmetric_tensor(values, order, lead_shape)
