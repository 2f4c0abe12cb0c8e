"""
Integral curves of Beltrami fields on R^3, S^3 and the flat torus.
"""

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray

from beltrami import TORUS_PERIOD
from beltrami.errors.beltrami_errors import PreconditionError
from beltrami.lib.dynamics.integrator import (
    DormandPrince54,
    IntegratorStats,
    Rhs,
    check_tolerance,
    hermite,
)
from beltrami.lib.r3_fields.fields import R3Field
from beltrami.lib.s3.beltrami_field import S3VectorField
from beltrami.lib.s3.hopf import as_s3_points
from beltrami.lib.t3.torus_field import TorusBeltramiField

_logger = logging.getLogger(__name__)

MANIFOLDS = ("euclidean", "sphere", "torus")


@dataclass(frozen=True)
class VelocityField:
    """
    The right-hand side of ẋ = u(x) in ambient coordinates.

    Attributes:
        manifold: one of "euclidean", "sphere", "torus"
        rhs: batched field evaluation
        project: applied to every accepted state, None outside the sphere
    """

    manifold: str
    rhs: Rhs
    project: Callable[[NDArray], NDArray] | None = None

    @property
    def dimension(self) -> int:
        return 4 if self.manifold == "sphere" else 3

    def seeds(self, x0: ArrayLike) -> NDArray:
        if self.manifold == "sphere":
            return as_s3_points(x0)
        return np.asarray(x0, dtype=float).reshape(-1, 3)


def velocity_field(
    field: Callable[[NDArray], NDArray], manifold: str | None = None
) -> VelocityField:
    """
    Wrap a field for integration, inferring the manifold from its type.

    Torus fields are integrated in unwrapped coordinates; they are
    periodic, so only the output is wrapped.

    Raises:
        PreconditionError: for an unknown manifold
    """
    if manifold is None:
        if isinstance(field, S3VectorField):
            manifold = "sphere"
        elif isinstance(field, TorusBeltramiField):
            manifold = "torus"
        elif isinstance(field, R3Field):
            manifold = "euclidean"
        else:
            raise PreconditionError(
                f"cannot infer the manifold of {type(field).__name__}",
                stage="trace",
            )
    if manifold not in MANIFOLDS:
        raise PreconditionError(
            f"unknown manifold {manifold!r}, expected one of {MANIFOLDS}",
            stage="trace",
        )

    if manifold == "sphere":
        return VelocityField(manifold, field, as_s3_points)
    return VelocityField(manifold, field)


def wrap_torus(positions: NDArray) -> tuple[NDArray, NDArray]:
    """
    Split unwrapped torus coordinates into a point of [0, 2π)^3 and
    integer winding counts.

    >>> wrap_torus(np.array([[-1.0, 7.0, 0.0]]))[1].tolist()
    [[-1, 1, 0]]
    """
    windings = np.floor(positions / TORUS_PERIOD)
    wrapped = positions - TORUS_PERIOD * windings
    # rounding can land exactly on the upper edge
    edge = wrapped >= TORUS_PERIOD
    wrapped[edge] -= TORUS_PERIOD
    windings[edge] += 1
    return wrapped, windings.astype(np.int64)


@dataclass(frozen=True)
class Trajectory:
    """
    Samples of one integral curve at the accepted steps.

    Attributes:
        manifold: "euclidean", "sphere" or "torus"
        times: strictly increasing sample times starting at 0
        positions: states, wrapped into [0, 2π)^3 on the torus
        velocities: u at the states
        windings: integer winding counts per axis on the torus, else None
        stats: integrator statistics
        diagnostic: why integration stopped early, if it did
    """

    manifold: str
    times: NDArray
    positions: NDArray
    velocities: NDArray
    windings: NDArray | None
    stats: IntegratorStats
    diagnostic: str | None = None

    def __len__(self) -> int:
        return len(self.times)

    @property
    def duration(self) -> float:
        return float(self.times[-1])

    @property
    def completed(self) -> bool:
        return self.diagnostic is None

    def unwrapped(self) -> NDArray:
        if self.windings is None:
            return self.positions
        return self.positions + TORUS_PERIOD * self.windings

    def at(self, t: float) -> NDArray:
        """
        The dense-output position at time t, from the cubic Hermite
        interpolant of the enclosing step.

        Raises:
            PreconditionError: if t lies outside the sampled interval
        """
        if not self.times[0] <= t <= self.times[-1]:
            raise PreconditionError(
                f"time {t} outside [0, {self.duration}]", stage="trace"
            )
        states = self.unwrapped()
        i = int(np.searchsorted(self.times, t, side="right")) - 1
        if i >= len(self.times) - 1:
            return states[-1].copy()
        point = hermite(
            self.times[i],
            states[i],
            self.velocities[i],
            self.times[i + 1],
            states[i + 1],
            self.velocities[i + 1],
            t,
        )
        if self.manifold == "sphere":
            return point / np.linalg.norm(point)
        if self.manifold == "torus":
            return wrap_torus(point[None])[0][0]
        return point

    def closure(self) -> float:
        """
        Ambient distance between the last and the first sample, in unwrapped
        coordinates.
        """
        states = self.unwrapped()
        return float(np.linalg.norm(states[-1] - states[0]))

    def header(self) -> list[str]:
        columns = ["t"] + [
            f"x{i + 1}" for i in range(self.positions.shape[-1])
        ]
        if self.windings is not None:
            columns += ["w1", "w2", "w3"]
        return columns

    def rows(self) -> list[list[float]]:
        columns = [self.times[:, None], self.positions]
        if self.windings is not None:
            columns.append(self.windings)
        return np.concatenate(columns, axis=-1).tolist()


def _trajectory(
    velocity: VelocityField,
    times: list[float],
    states: list[NDArray],
    slopes: list[NDArray],
    stats: IntegratorStats,
    diagnostic: str | None,
) -> Trajectory:
    positions = np.array(states)
    windings = None
    if velocity.manifold == "torus":
        positions, windings = wrap_torus(positions)
    return Trajectory(
        velocity.manifold,
        np.array(times),
        positions,
        np.array(slopes),
        windings,
        stats,
        diagnostic,
    )


def trace_field_lines(
    field: Callable[[NDArray], NDArray],
    seeds: ArrayLike,
    duration: float,
    tol: float = 1e-9,
    manifold: str | None = None,
    max_step: float = np.inf,
    fixed_step: float | None = None,
) -> list[Trajectory]:
    """
    Integrate ẋ = u(x) from every seed for the given duration, advancing
    all seeds as one batch.

    Arguments:
        field: the velocity field
        seeds: initial points, shape (B, 3) or (B, 4) on the sphere
        duration: integration time T ≥ 0
        tol: local error tolerance in [1e-12, 1e-3]
        manifold: overrides the manifold inferred from the field type
        max_step: largest step size
        fixed_step: integrate with this step and no error control

    Returns:
        one trajectory per seed; a trajectory whose step size underflowed
        ends early and carries a diagnostic

    Raises:
        PreconditionError: for a tolerance out of range or negative duration
    """
    if fixed_step is None:
        check_tolerance(tol)
    if duration < 0:
        raise PreconditionError(
            f"duration must be nonnegative, got {duration}", stage="trace"
        )

    velocity = velocity_field(field, manifold)
    y0 = velocity.seeds(seeds)
    stepper = DormandPrince54(
        velocity.rhs,
        y0,
        duration,
        tol=tol,
        max_step=max_step,
        fixed_step=fixed_step,
        project=velocity.project,
    )
    times = [[0.0] for _ in y0]
    states = [[y] for y in stepper.y.copy()]
    slopes = [[f] for f in stepper.f.copy()]
    while not stepper.done:
        batch = stepper.advance()
        for i, row in enumerate(batch.rows):
            times[row].append(float(batch.t1[i]))
            states[row].append(batch.y1[i])
            slopes[row].append(batch.f1[i])

    trajectories = [
        _trajectory(
            velocity,
            times[row],
            states[row],
            slopes[row],
            stepper.stats[row],
            stepper.diagnostics[row],
        )
        for row in range(len(y0))
    ]
    _logger.debug(
        f"Traced {len(trajectories)} {velocity.manifold} field lines for "
        f"T = {duration}"
    )
    return trajectories


def trace_field_line(
    field: Callable[[NDArray], NDArray],
    x0: ArrayLike,
    duration: float,
    tol: float = 1e-9,
    manifold: str | None = None,
    max_step: float = np.inf,
) -> Trajectory:
    """
    Integrate one field line; see trace_field_lines.
    """
    return trace_field_lines(
        field, np.atleast_2d(x0), duration, tol, manifold, max_step
    )[0]
