"""
Dormand-Prince 5(4) integration of autonomous systems ẏ = f(y), advanced
for a batch of initial conditions at once with one step size per row.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray

from beltrami.errors.beltrami_errors import PreconditionError

_logger = logging.getLogger(__name__)

MIN_TOLERANCE = 1e-12
MAX_TOLERANCE = 1e-3
SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0
# step sizes below this fraction of the end time count as underflow
UNDERFLOW_RATIO = 1e-14

# Butcher table of the pair, rows of stages 2..7
_A = (
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B = np.array(_A[-1] + (0.0,))
# fifth minus fourth order weights
_E = np.array(
    [
        71 / 57600,
        0.0,
        -71 / 16695,
        71 / 1920,
        -17253 / 339200,
        22 / 525,
        -1 / 40,
    ]
)

Rhs = Callable[[NDArray], NDArray]


def check_tolerance(tol: float) -> float:
    if not MIN_TOLERANCE <= tol <= MAX_TOLERANCE:
        raise PreconditionError(
            f"tolerance {tol} outside [{MIN_TOLERANCE}, {MAX_TOLERANCE}]",
            stage="trace",
        )
    return float(tol)


@dataclass
class IntegratorStats:
    """
    Attributes:
        steps: accepted steps
        rejected: rejected steps
        max_error: largest accepted local error estimate, in units of tol
        evaluations: right-hand side evaluations per row
    """

    steps: int = 0
    rejected: int = 0
    max_error: float = 0.0
    evaluations: int = 1

    def as_dict(self) -> dict:
        return {
            "steps": self.steps,
            "rejected": self.rejected,
            "max_error": self.max_error,
            "evaluations": self.evaluations,
        }


@dataclass
class StepBatch:
    """
    The accepted steps of one advance: rows, and the states and slopes at
    both ends of each step.
    """

    rows: NDArray
    t0: NDArray
    y0: NDArray
    f0: NDArray
    t1: NDArray
    y1: NDArray
    f1: NDArray


@dataclass
class DormandPrince54:
    """
    Adaptive embedded Runge-Kutta stepper with first-same-as-last reuse.

    Every row integrates from t = 0 to its own end time with its own step
    size; rows leave the batch when they finish, are stopped by the caller,
    or their step size underflows.

    Attributes:
        rhs: batched vector field, shape (B, d) to (B, d)
        y0: initial states, shape (B, d)
        t_end: end time per row, or one for all
        tol: relative and absolute tolerance
        max_step: largest step size
        fixed_step: when set, take steps of exactly this size without
            error control
        project: applied to every accepted state, e.g. a renormalization
    """

    rhs: Rhs
    y0: ArrayLike
    t_end: ArrayLike
    tol: float = 1e-9
    max_step: float = np.inf
    fixed_step: float | None = None
    project: Callable[[NDArray], NDArray] | None = None
    stats: list[IntegratorStats] = field(init=False)
    diagnostics: list[str | None] = field(init=False)

    def __post_init__(self) -> None:
        if self.fixed_step is None:
            check_tolerance(self.tol)
        self.y = np.array(self.y0, dtype=float, ndmin=2)
        rows = len(self.y)
        self.t = np.zeros(rows)
        self.t_end = np.broadcast_to(
            np.asarray(self.t_end, dtype=float), (rows,)
        ).copy()
        self.active = self.t_end > 0
        self.f = self.rhs(self.y) if rows else np.zeros_like(self.y)
        self.h = self._initial_step()
        self.stats = [IntegratorStats() for _ in range(rows)]
        self.diagnostics = [None] * rows

    def _scale(self, y: NDArray, other: NDArray | None = None) -> NDArray:
        size = np.abs(y)
        if other is not None:
            size = np.maximum(size, np.abs(other))
        return self.tol * (1.0 + size)

    def _initial_step(self) -> NDArray:
        if self.fixed_step is not None:
            return np.full(len(self.y), float(self.fixed_step))

        scale = self._scale(self.y)
        d0 = np.sqrt(np.mean((self.y / scale) ** 2, axis=-1))
        d1 = np.sqrt(np.mean((self.f / scale) ** 2, axis=-1))
        usable = (d0 > 1e-5) & (d1 > 1e-5)
        h = np.where(usable, 0.01 * d0 / np.where(usable, d1, 1.0), 1e-6)
        return np.minimum(h, self.max_step)

    @property
    def done(self) -> bool:
        return not np.any(self.active)

    def stop(self, rows: ArrayLike, reason: str | None = None) -> None:
        rows = np.asarray(rows, dtype=int)
        self.active[rows] = False
        if reason is not None:
            for row in rows:
                self.diagnostics[row] = reason

    def _stages(self, y: NDArray, f: NDArray, h: NDArray) -> list[NDArray]:
        stages = [f]
        for coefficients in _A:
            increment = sum(
                a * k for a, k in zip(coefficients, stages) if a != 0.0
            )
            stages.append(self.rhs(y + h[:, None] * increment))
        return stages

    def advance(self) -> StepBatch:
        """
        Attempt one step on every active row.

        Returns:
            the accepted steps, possibly none
        """
        rows = np.flatnonzero(self.active)
        if len(rows) == 0:
            return StepBatch(rows, *(np.zeros((0,)),) * 6)

        t, y, f = self.t[rows], self.y[rows], self.f[rows]
        remaining = self.t_end[rows] - t
        h = np.minimum(self.h[rows], remaining)

        stages = self._stages(y, f, h)
        y_new = y + h[:, None] * np.einsum("s,spd->pd", _B, np.stack(stages))
        f_new = stages[-1]

        if self.fixed_step is None:
            error = h[:, None] * np.einsum("s,spd->pd", _E, np.stack(stages))
            norm = np.sqrt(
                np.mean((error / self._scale(y, y_new)) ** 2, axis=-1)
            )
            accepted = norm <= 1.0
            with np.errstate(divide="ignore"):
                factor = SAFETY * np.where(norm > 0, norm, 1e-10) ** -0.2
            factor = np.clip(factor, MIN_FACTOR, MAX_FACTOR)
            self.h[rows] = np.minimum(h * factor, self.max_step)
        else:
            norm = np.zeros(len(rows))
            accepted = np.ones(len(rows), dtype=bool)

        for row, ok, value in zip(rows, accepted, norm):
            stats = self.stats[row]
            stats.evaluations += 6
            if ok:
                stats.steps += 1
                stats.max_error = max(stats.max_error, float(value))
            else:
                stats.rejected += 1

        t_new = np.where(h >= remaining, self.t_end[rows], t + h)
        keep = rows[accepted]
        if self.project is not None and len(keep):
            y_new[accepted] = self.project(y_new[accepted])

        batch = StepBatch(
            keep,
            t[accepted],
            y[accepted],
            f[accepted],
            t_new[accepted],
            y_new[accepted],
            f_new[accepted],
        )
        self.t[keep] = batch.t1
        self.y[keep] = batch.y1
        self.f[keep] = batch.f1

        finished = rows[self.t[rows] >= self.t_end[rows]]
        self.active[finished] = False
        floor = UNDERFLOW_RATIO * np.maximum(self.t_end[rows], 1.0)
        underflow = rows[self.active[rows] & (self.h[rows] < floor)]
        if len(underflow):
            _logger.warning(
                f"Step size underflow on {len(underflow)} rows, stopping them"
            )
            self.stop(
                underflow,
                "step size underflow, the field may vanish near the orbit",
            )
        return batch


def hermite(
    t0: float,
    y0: NDArray,
    f0: NDArray,
    t1: float,
    y1: NDArray,
    f1: NDArray,
    t: float,
) -> NDArray:
    """
    Cubic Hermite interpolation of a step from its end states and slopes.
    """
    h = t1 - t0
    s = (t - t0) / h
    h00 = 2 * s**3 - 3 * s**2 + 1
    h10 = s**3 - 2 * s**2 + s
    h01 = -2 * s**3 + 3 * s**2
    h11 = s**3 - s**2
    return h00 * y0 + h10 * h * f0 + h01 * y1 + h11 * h * f1
