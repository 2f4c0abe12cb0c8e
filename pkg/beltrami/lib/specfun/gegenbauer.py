"""
Ultraspherical polynomials of dimension 4, normalized to C_Λ(1) = 1.

C_Λ is the zonal generator of the degree-Λ spherical harmonics on S^3 and
equals U_Λ / (Λ + 1), where U_Λ is the Chebyshev polynomial of the second
kind. Values and derivatives are produced by three-term recurrences on the
derivative sequences, so no Gamma-function prefactor is ever formed.
"""

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from beltrami.errors.beltrami_errors import DomainError, UnsupportedDegreeError

_logger = logging.getLogger(__name__)

MAX_DERIVATIVE_ORDER = 3
DOMAIN_SLACK = 1e-12


@dataclass(frozen=True)
class GegenbauerEvaluator:
    """
    Evaluator of C_Λ and its first derivatives on [-1, 1].

    Attributes:
        degree: the degree Λ
    """

    degree: int

    def __post_init__(self) -> None:
        if self.degree < 0:
            raise UnsupportedDegreeError(f"negative degree {self.degree}")

    def jets(self, t: ArrayLike, max_order: int = 0) -> NDArray:
        """
        Evaluate C_Λ and its derivatives up to max_order at every argument.

        Arguments:
            t: arguments in [-1, 1]
            max_order: highest derivative order, at most 3

        Returns:
            array of shape (max_order + 1,) + shape(t); entry k holds the
            k-th derivative

        Raises:
            UnsupportedDegreeError: if max_order is outside 0..3
            DomainError: if an argument lies outside [-1, 1]
        """
        if not 0 <= max_order <= MAX_DERIVATIVE_ORDER:
            raise UnsupportedDegreeError(
                f"derivative order {max_order} not in "
                f"0..{MAX_DERIVATIVE_ORDER}"
            )

        t = np.asarray(t, dtype=float)
        if np.any(np.abs(t) > 1.0 + DOMAIN_SLACK):
            raise DomainError(
                f"argument {float(np.max(np.abs(t)))} outside [-1, 1]"
            )

        t = np.clip(t, -1.0, 1.0)
        # previous[k] is U^(k)_{n-1}, current[k] is U^(k)_n
        previous = np.zeros((max_order + 1,) + t.shape)
        current = np.zeros((max_order + 1,) + t.shape)
        current[0] = 1.0
        for n in range(self.degree):
            following = np.empty_like(current)
            following[0] = 2.0 * t * current[0] - previous[0]
            for k in range(1, max_order + 1):
                following[k] = (
                    2.0 * t * current[k]
                    + 2.0 * k * current[k - 1]
                    - previous[k]
                )
            previous, current = current, following

        return current / (self.degree + 1)

    def __call__(self, t: ArrayLike, order: int = 0) -> NDArray:
        return self.jets(t, order)[order]


def gegenbauer4(degree: int, t: ArrayLike, order: int = 0) -> NDArray | float:
    """
    The order-th derivative of C_Λ at t.

    >>> gegenbauer4(5, 1.0)
    1.0

    Arguments:
        degree: the degree Λ >= 0
        t: argument(s) in [-1, 1]
        order: derivative order 0..3

    Returns:
        the derivative value, a float for scalar input
    """
    values = GegenbauerEvaluator(degree)(t, order)
    return float(values) if values.ndim == 0 else values


def chebyshev_closed_form(degree: int, theta: ArrayLike) -> NDArray:
    """
    The trigonometric form sin((Λ+1)θ) / ((Λ+1) sin θ) for θ in (0, π).
    """
    theta = np.asarray(theta, dtype=float)
    return np.sin((degree + 1) * theta) / ((degree + 1) * np.sin(theta))


def darboux_residual(
    degree: int, radius: float, samples: int = 1000
) -> float:
    """
    Sup over t in [0, 2R] of |C_Λ(cos(t/Λ)) - j_0(t)|.

    Arguments:
        degree: Λ, required to exceed radius
        radius: R > 0
        samples: number of grid points in [0, 2R]

    Returns:
        the sampled sup-norm residual, O(1/Λ)

    Raises:
        DomainError: if R <= 0 or Λ <= R
    """
    if radius <= 0 or degree <= radius:
        raise DomainError(
            f"darboux residual needs Λ > R > 0, got Λ={degree}, R={radius}"
        )

    t = np.linspace(0.0, 2.0 * radius, samples)
    lifted = GegenbauerEvaluator(degree)(np.cos(t / degree))
    # np.sinc(x) = sin(pi x) / (pi x)
    residual = float(np.max(np.abs(lifted - np.sinc(t / np.pi))))
    _logger.debug(f"Darboux residual at Λ={degree}, R={radius}: {residual}")
    return residual
