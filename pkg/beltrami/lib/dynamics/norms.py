"""
C^m distances between fields on a ball, measured on a grid, and the rate
tables built from them.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

import numpy as np
from numpy.typing import ArrayLike, NDArray

from beltrami.errors.beltrami_errors import (
    DerivativeUnavailableError,
    PreconditionError,
)
from beltrami.lib.parallel import chunked_map
from beltrami.lib.r3_fields.fields import R3Field
from beltrami.lib.r3_fields.quadrature import ball_grid

_logger = logging.getLogger(__name__)

MAX_NORM_ORDER = 4
DEFAULT_GRID_N = 33
FD_STEP = 1e-3

_STENCIL = ((-2, 1 / 12), (-1, -8 / 12), (1, 8 / 12), (2, -1 / 12))

Partial = Callable[[NDArray], NDArray]


def _analytic_order(evaluator: Any) -> int:
    if isinstance(evaluator, R3Field):
        return evaluator.max_order
    return 0


def _evaluate(evaluator: Any, order: int) -> Partial:
    if isinstance(evaluator, R3Field):
        return lambda points: evaluator.derivative(points, order)
    return lambda points: np.asarray(evaluator(points))


def fd_gradient(fn: Partial, step: float = FD_STEP) -> Partial:
    """
    The fourth-order central difference gradient of fn, appending one axis
    of length 3.
    """

    def gradient(points: NDArray) -> NDArray:
        columns = []
        for axis in range(3):
            shift = np.zeros(3)
            shift[axis] = step
            columns.append(
                sum(w * fn(points + k * shift) for k, w in _STENCIL) / step
            )
        return np.stack(columns, axis=-1)

    return gradient


def partials(
    evaluator: Any, order: int, allow_fd: bool = True
) -> tuple[list[Partial], bool]:
    """
    Callables for the partials of orders 0..order, analytic up to the
    evaluator's max_order and finite differences of the highest analytic
    one beyond.

    Returns:
        the callables and whether any of them uses finite differences

    Raises:
        DerivativeUnavailableError: if differences are needed but not allowed
    """
    analytic = _analytic_order(evaluator)
    if order > analytic and not allow_fd:
        raise DerivativeUnavailableError(
            f"{type(evaluator).__name__} provides analytic derivatives up to "
            f"order {analytic}, {order} requested"
        )
    fns = [_evaluate(evaluator, n) for n in range(min(order, analytic) + 1)]
    while len(fns) <= order:
        fns.append(fd_gradient(fns[-1]))
    return fns, order > analytic


@dataclass(frozen=True)
class ErrorReport:
    """
    Sup-norms of the difference of two fields and its partials on a ball.

    Attributes:
        center: center of the ball
        radius: radius of the ball
        order: highest derivative order m
        grid_n: points per axis of the grid cut down to the ball
        norms: per order n ≤ m, the max over points and components of
            |∂^n(a-b)|
        finite_difference: whether each of the two fields needed differences
        points: number of grid points inside the ball
    """

    center: tuple[float, float, float]
    radius: float
    order: int
    grid_n: int
    norms: tuple[float, ...]
    finite_difference: tuple[bool, bool] = (False, False)
    points: int = field(default=0)

    @property
    def aggregate(self) -> float:
        """
        The C^m norm, max over orders.
        """
        return max(self.norms)

    def as_dict(self) -> dict[str, Any]:
        return {
            "region": {"center": list(self.center), "radius": self.radius},
            "order": self.order,
            "grid_n": self.grid_n,
            "points": self.points,
            "norms": list(self.norms),
            "aggregate": self.aggregate,
            "finite_difference": list(self.finite_difference),
        }


def sup_error_norm(
    field_a: Any,
    field_b: Any,
    radius: float = 1.0,
    order: int = 0,
    grid_n: int = DEFAULT_GRID_N,
    center: ArrayLike = (0.0, 0.0, 0.0),
    threads: int = 1,
    allow_fd: bool = True,
) -> ErrorReport:
    """
    ‖a - b‖ in C^m of the ball, on the points of a grid_n^3 lattice
    inside it.

    Arguments:
        field_a: an R3Field or a plain callable on points of shape (P, 3)
        field_b: likewise
        radius: ball radius
        order: m in 0..4
        grid_n: lattice points per axis
        center: ball center
        threads: worker threads for the grid sweep
        allow_fd: fall back to finite differences for missing orders

    Raises:
        PreconditionError: for an order outside 0..4 or a bad grid
        DerivativeUnavailableError: if an order is unavailable and
            differences are not allowed
    """
    if not 0 <= order <= MAX_NORM_ORDER:
        raise PreconditionError(
            f"order {order} outside 0..{MAX_NORM_ORDER}", stage="norms"
        )
    if grid_n < 2 or radius <= 0:
        raise PreconditionError(
            f"need grid_n >= 2 and a positive radius, got {grid_n}, {radius}",
            stage="norms",
        )

    fns_a, fd_a = partials(field_a, order, allow_fd)
    fns_b, fd_b = partials(field_b, order, allow_fd)
    center = np.asarray(center, dtype=float).reshape(3)
    points = center + ball_grid(radius, grid_n)

    def chunk(block: NDArray) -> NDArray:
        columns = []
        for fn_a, fn_b in zip(fns_a, fns_b):
            difference = np.abs(fn_a(block) - fn_b(block))
            columns.append(difference.reshape(len(block), -1).max(axis=-1))
        return np.stack(columns, axis=-1)

    norms = chunked_map(chunk, points, threads=threads).max(axis=0)
    report = ErrorReport(
        tuple(center.tolist()),
        float(radius),
        order,
        grid_n,
        tuple(float(v) for v in norms),
        (fd_a, fd_b),
        len(points),
    )
    _logger.debug(f"C^{order} error on {len(points)} points: {report.norms}")
    return report


@dataclass(frozen=True)
class RateTable:
    """
    Errors against degree, with the ratio of each error to the next and
    the fitted log-log slope.
    """

    degrees: tuple[int, ...]
    errors: tuple[float, ...]

    @property
    def ratios(self) -> tuple[float, ...]:
        return tuple(
            a / b if b > 0 else np.inf
            for a, b in zip(self.errors, self.errors[1:])
        )

    @property
    def slope(self) -> float:
        if len(self.degrees) < 2 or min(self.errors) <= 0:
            return float("nan")
        fit = np.polyfit(np.log(self.degrees), np.log(self.errors), 1)
        return float(fit[0])

    def within(self, low: float = 1.4, high: float = 2.8) -> bool:
        return all(low <= ratio <= high for ratio in self.ratios)

    def header(self) -> list[str]:
        return ["Lambda", "error", "ratio"]

    def rows(self) -> list[list[float]]:
        ratios = (float("nan"),) + self.ratios
        return [
            [degree, error, ratio]
            for degree, error, ratio in zip(self.degrees, self.errors, ratios)
        ]

    def as_dict(self) -> dict[str, Any]:
        return {
            "degrees": list(self.degrees),
            "errors": list(self.errors),
            "ratios": list(self.ratios),
            "slope": self.slope,
        }


def rate_table(errors_by_degree: Mapping[int, float]) -> RateTable:
    """
    >>> rate_table({100: 0.02, 200: 0.01}).ratios
    (2.0,)
    """
    degrees = tuple(sorted(errors_by_degree))
    return RateTable(
        degrees, tuple(float(errors_by_degree[d]) for d in degrees)
    )
