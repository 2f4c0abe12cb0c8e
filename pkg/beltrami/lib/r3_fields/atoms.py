"""
Discretization of Herglotz densities into shifted-Bessel and plane-wave
atoms.

Conventions: ĝ(x) = (2π)^-3 ∫ g(ξ) e^{i x·ξ} dξ, so that
g(ξ) = ∫ ĝ(x) e^{-i x·ξ} dx. With g(ξ) = χ(|ξ|) f(ξ/|ξ|) and the
Riemann sum of the second integral over cells U_n, the Bessel atoms are
w(x) = Σ c_n j_0(|x - x_n|) with c_n = 4π Re ĝ(x_n) |U_n|, using
∫_{S^2} e^{i y·ξ} dσ(ξ) = 4π j_0(|y|).
"""

import logging
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.sparse.linalg import LinearOperator, lsqr

from beltrami.errors.beltrami_errors import FitFailure, PreconditionError
from beltrami.lib.parallel import chunked_map
from beltrami.lib.r3_fields.fields import R3Field
from beltrami.lib.r3_fields.harmonics import (
    complex_harmonics,
    harmonic_indices,
)
from beltrami.lib.r3_fields.herglotz import HerglotzDensity
from beltrami.lib.r3_fields.quadrature import (
    SphereQuadrature,
    ball_grid,
    equal_area_partition,
)
from beltrami.lib.specfun.bessel import spherical_bessel_table
from beltrami.lib.specfun.radial import (
    radial_derivative_tensor,
    radial_kernels,
)

_logger = logging.getLogger(__name__)

MAX_EVAL_ORDER = 4
MIN_CELLS_PER_AXIS = 8
MIN_PLANE_WAVE_CELLS = 12
DEFAULT_RADIUS = 6.0
SUBSAMPLES = 5
CUTOFF_NODES = 96
_PAIR_BUDGET = 200_000
_I_POWERS = np.array([1.0, 1j, -1.0, -1j])


@dataclass(frozen=True)
class AtomFitReport:
    """
    Summary of an atom fit.

    Attributes:
        atom_count: number of atoms kept
        sphere_error: achieved sup-error over S^2 (Bessel atoms) or over the
            unit ball (plane waves)
        radius: radius R of the atom ball, zero for plane waves
        cell_size: edge length of the cubic cells, or the maximal angular
            diameter of the sphere regions
        refined: whether the least-squares post-pass was kept
        pruned: number of atoms dropped by pruning
    """

    atom_count: int
    sphere_error: float
    radius: float = 0.0
    cell_size: float = 0.0
    refined: bool = False
    pruned: int = 0

    def as_dict(self) -> dict[str, Any]:
        return {
            "atom_count": self.atom_count,
            "sphere_error": self.sphere_error,
            "radius": self.radius,
            "cell_size": self.cell_size,
            "refined": self.refined,
            "pruned": self.pruned,
        }


def _point_chunks(n_points: int, n_atoms: int) -> int:
    return max(1, _PAIR_BUDGET // max(1, n_atoms))


@dataclass(frozen=True, eq=False)
class BesselAtomField(R3Field):
    """
    w(x) = Σ c_n j_0(|x - x_n|), an exact Helmholtz solution.

    Attributes:
        centers: atom positions x_n, shape (N, 3)
        weights: atom weights c_n ∈ R^3, shape (N, 3)
        radius: the radius R with |x_n| <= R
        report: the fit report, when produced by a fit
    """

    centers: NDArray
    weights: NDArray
    radius: float = DEFAULT_RADIUS
    report: AtomFitReport | None = field(default=None, compare=False)

    max_order = MAX_EVAL_ORDER
    helmholtz = True

    def __post_init__(self) -> None:
        centers = np.asarray(self.centers, dtype=float).reshape(-1, 3)
        weights = np.asarray(self.weights, dtype=float).reshape(-1, 3)
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "weights", weights)
        if len(self.centers) != len(self.weights):
            raise PreconditionError(
                "atom centers and weights differ in length", stage="atoms"
            )

    def __len__(self) -> int:
        return len(self.centers)

    def component(self, i: int) -> tuple[NDArray, NDArray]:
        """
        The centers and scalar weights of the i-th component.
        """
        return self.centers, self.weights[:, i]

    def _jets_chunk(self, points: NDArray, order: int) -> list[NDArray]:
        offsets = points[:, None, :] - self.centers[None, :, :]
        if order == 0:
            # np.sinc(x) = sin(pi x) / (pi x)
            kernel = np.sinc(np.linalg.norm(offsets, axis=-1) / np.pi)
            return [kernel @ self.weights]

        kernels = radial_kernels(order, np.linalg.norm(offsets, axis=-1))
        return [
            np.einsum(
                "pn...,ni->pi...",
                radial_derivative_tensor(0, offsets, n, kernels),
                self.weights,
            )
            for n in range(order + 1)
        ]

    def _jets(self, points: NDArray, order: int) -> list[NDArray]:
        if len(self) == 0:
            return [
                np.zeros((len(points), 3) + (3,) * n) for n in range(order + 1)
            ]

        step = _point_chunks(len(points), len(self))
        pieces = [
            self._jets_chunk(points[start : start + step], order)
            for start in range(0, len(points), step)
        ]
        return [
            np.concatenate([piece[n] for piece in pieces])
            for n in range(order + 1)
        ]

    def descriptor(self) -> dict[str, Any]:
        return {
            "type": "bessel_atoms",
            "R": self.radius,
            "atoms": [
                {"x": center.tolist(), "c": weight.tolist()}
                for center, weight in zip(self.centers, self.weights)
            ],
        }

    def prune(self, threshold: float) -> "BesselAtomField":
        """
        Drop atoms whose weight norm is below threshold times the largest.
        """
        if threshold <= 0 or len(self) == 0:
            return self

        norms = np.linalg.norm(self.weights, axis=-1)
        keep = norms >= threshold * np.max(norms)
        _logger.info(f"Pruned {int(np.sum(~keep))} of {len(self)} atoms")
        return BesselAtomField(
            self.centers[keep], self.weights[keep], self.radius, self.report
        )


@dataclass(frozen=True, eq=False)
class PlaneWaveAtomField(R3Field):
    """
    w(x) = Σ c_n e^{i ξ_n·x} with unit directions ξ_n and complex weights.

    Attributes:
        directions: unit vectors ξ_n, shape (N, 3)
        weights: complex weights c_n, shape (N, 3)
        report: the fit report, when produced by a fit
    """

    directions: NDArray
    weights: NDArray
    report: AtomFitReport | None = field(default=None, compare=False)

    max_order = MAX_EVAL_ORDER
    helmholtz = True

    def __post_init__(self) -> None:
        directions = np.asarray(self.directions, dtype=float).reshape(-1, 3)
        norms = np.linalg.norm(directions, axis=-1)
        if np.any(np.abs(norms - 1.0) > 1e-8):
            raise PreconditionError(
                "plane-wave directions must be unit vectors", stage="atoms"
            )
        object.__setattr__(self, "directions", directions / norms[:, None])
        object.__setattr__(
            self,
            "weights",
            np.asarray(self.weights, dtype=complex).reshape(-1, 3),
        )

    def __len__(self) -> int:
        return len(self.directions)

    def _jets(self, points: NDArray, order: int) -> list[NDArray]:
        phases = np.exp(1j * points @ self.directions.T)
        jets = []
        # (i ξ)^{⊗n} per atom
        power = np.ones((len(self), 1), dtype=complex)
        for n in range(order + 1):
            shaped = power.reshape((len(self),) + (3,) * n)
            jets.append(
                np.einsum("pn,ni,n...->pi...", phases, self.weights, shaped)
            )
            power = (
                power[:, :, None] * (1j * self.directions)[:, None, :]
            ).reshape(len(self), -1)
        return jets

    def real_part(self) -> "PlaneWaveAtomField":
        """
        The plane-wave field equal to Re w.
        """
        return PlaneWaveAtomField(
            np.concatenate([self.directions, -self.directions]),
            np.concatenate([self.weights, np.conj(self.weights)]) / 2,
            self.report,
        )

    def descriptor(self) -> dict[str, Any]:
        return {
            "type": "plane_waves",
            "atoms": [
                {
                    "xi": direction.tolist(),
                    "c_re": weight.real.tolist(),
                    "c_im": weight.imag.tolist(),
                }
                for direction, weight in zip(self.directions, self.weights)
            ],
        }


def eval_with_derivatives(field: R3Field, x: ArrayLike, order: int) -> NDArray:
    """
    The tensor of order-th partials of an atom field at x.

    Arguments:
        field: a Bessel or plane-wave atom field
        x: point(s) with trailing dimension 3
        order: 0..4

    Returns:
        array of shape (P, 3) + (3,) * order
    """
    return field.derivative(x, order)


def smooth_step(t: ArrayLike) -> NDArray:
    """
    C^∞ step from 0 (t <= 0) to 1 (t >= 1) built from exp(-1/t).
    """
    t = np.asarray(t, dtype=float)

    def bump(u: NDArray) -> NDArray:
        return np.where(u > 0, np.exp(-1.0 / np.where(u > 0, u, 1.0)), 0.0)

    rising = bump(t)
    return rising / (rising + bump(1.0 - t))


def smooth_cutoff(s: ArrayLike) -> NDArray:
    """
    χ(s): 1 for |s - 1| <= 1/4, 0 for |s - 1| >= 1/2, smooth in between.
    """
    distance = np.abs(np.asarray(s, dtype=float) - 1.0)
    return smooth_step((0.5 - distance) / 0.25)


@dataclass(frozen=True)
class _CellPartition:
    positions: NDArray
    volumes: NDArray
    cell_size: float


def _ball_cells(radius: float, cells: int) -> _CellPartition:
    """
    Cubes of a cells^3 grid on [-R, R]^3 clipped to the ball. Interior cubes
    keep their centre and full volume; boundary cubes are sub-sampled.
    """
    size = 2.0 * radius / cells
    axis = -radius + (np.arange(cells) + 0.5) * size
    centres = np.stack(np.meshgrid(axis, axis, axis, indexing="ij"), -1)
    centres = centres.reshape(-1, 3)
    distance = np.linalg.norm(centres, axis=-1)
    half_diagonal = 0.5 * np.sqrt(3.0) * size

    interior = distance + half_diagonal <= radius
    boundary = ~interior & (distance - half_diagonal <= radius)

    offsets = ((np.arange(SUBSAMPLES) + 0.5) / SUBSAMPLES - 0.5) * size
    sub = np.stack(np.meshgrid(offsets, offsets, offsets, indexing="ij"), -1)
    sub = sub.reshape(-1, 3)
    samples = centres[boundary][:, None, :] + sub[None]
    inside = np.linalg.norm(samples, axis=-1) <= radius
    counts = inside.sum(axis=1)
    keep = counts > 0
    boundary_positions = (
        np.einsum("nsk,ns->nk", samples, inside)[keep] / counts[keep, None]
    )
    boundary_volumes = size**3 * counts[keep] / SUBSAMPLES**3

    positions = np.concatenate([centres[interior], boundary_positions])
    volumes = np.concatenate(
        [np.full(int(interior.sum()), size**3), boundary_volumes]
    )
    return _CellPartition(positions, volumes, size)


def cutoff_transform(
    density: HerglotzDensity, x: NDArray, nodes: int = CUTOFF_NODES
) -> NDArray:
    """
    ĝ(x) for g(ξ) = χ(|ξ|) f(ξ/|ξ|):
    (2π)^-3 4π Σ F_lm i^l Y_lm(x/|x|) ∫ χ(s) s^2 j_l(s|x|) ds.

    Arguments:
        density: the density f
        x: points of shape (P, 3)
        nodes: Gauss-Legendre nodes on the support [1/2, 3/2] of χ

    Returns:
        complex values of shape (P, 3)
    """
    abscissae, weights = np.polynomial.legendre.leggauss(nodes)
    s = 1.0 + 0.5 * abscissae
    radial_weights = 0.5 * weights * smooth_cutoff(s) * s**2

    radius = np.linalg.norm(x, axis=-1)
    bessel = spherical_bessel_table(density.l_max, np.outer(radius, s))
    kernel = np.einsum("lps,s->lp", bessel, radial_weights)

    degrees = np.array([l for l, _ in harmonic_indices(density.l_max)])
    basis = (
        _I_POWERS[degrees % 4][:, None]
        * kernel[degrees]
        * complex_harmonics(density.l_max, x)
    )
    transform = np.einsum("cp,ci->pi", basis, density.coefficients)
    return transform * 4.0 * np.pi / (2.0 * np.pi) ** 3


def _sphere_residual(
    density_values: NDArray,
    centers: NDArray,
    weights: NDArray,
    nodes: NDArray,
    threads: int,
) -> NDArray:
    """
    Σ c_n e^{-i x_n·ξ} / 4π - f(ξ) at each sphere node.
    """

    def evaluate(chunk: NDArray) -> NDArray:
        phases = np.exp(-1j * chunk @ centers.T)
        return phases @ weights / (4.0 * np.pi)

    synthesized = chunked_map(
        evaluate, nodes, threads, _point_chunks(len(nodes), len(centers))
    )
    return synthesized - density_values


def _refine_weights(
    density_values: NDArray,
    centers: NDArray,
    weights: NDArray,
    quadrature: SphereQuadrature,
    iterations: int,
) -> NDArray:
    """
    Least-squares correction of the weights on the S^2 residual with the
    positions fixed, starting from the Riemann-sum weights.
    """
    nodes = quadrature.nodes
    root_weights = np.sqrt(quadrature.weights)
    n_nodes, n_atoms = len(nodes), len(centers)

    def matvec(c: NDArray) -> NDArray:
        phases = np.exp(-1j * nodes @ centers.T) / (4.0 * np.pi)
        values = root_weights * (phases @ c.ravel())
        return np.concatenate([values.real, values.imag])

    def rmatvec(r: NDArray) -> NDArray:
        r = r.ravel()
        residual = root_weights * (r[:n_nodes] + 1j * r[n_nodes:])
        phases = np.exp(-1j * nodes @ centers.T) / (4.0 * np.pi)
        return (np.conj(phases).T @ residual).real

    operator = LinearOperator(
        (2 * n_nodes, n_atoms), matvec=matvec, rmatvec=rmatvec, dtype=float
    )
    refined = np.empty_like(weights)
    for i in range(3):
        target = root_weights * density_values[:, i]
        rhs = np.concatenate([target.real, target.imag])
        refined[:, i] = lsqr(
            operator, rhs, x0=weights[:, i], iter_lim=iterations
        )[0]
    return refined


def fit_bessel_atoms(
    density: HerglotzDensity,
    radius: float = DEFAULT_RADIUS,
    cells: int = 32,
    tolerance: float | None = None,
    refine: bool = False,
    refine_iterations: int = 50,
    prune: float = 0.0,
    threads: int = 1,
) -> BesselAtomField:
    """
    Discretize a density into shifted-Bessel atoms on a ball of radius R.

    The density is extended radially by the cutoff χ, transformed to
    physical space and sampled at the cells of a cubic partition of the
    ball. The achieved sup-error over S^2 between Σ c_n e^{-i x_n·ξ} / 4π
    and f is reported.

    Arguments:
        density: the Herglotz density
        radius: R >= 4
        cells: cells per axis, at least 8 (cell count >= 8^3)
        tolerance: if given, the largest acceptable sup-error
        refine: run the least-squares weight refinement, kept only when it
            does not increase the sup-error
        refine_iterations: iteration limit of the refinement
        prune: relative weight threshold below which atoms are dropped
        threads: worker threads for the transform and error evaluation

    Returns:
        the atom field with its report

    Raises:
        PreconditionError: if R < 4 or cells < 8
        FitFailure: if the achieved sup-error exceeds the tolerance
    """
    if radius < 4.0 or cells < MIN_CELLS_PER_AXIS:
        raise PreconditionError(
            f"atom fit needs R >= 4 and at least {MIN_CELLS_PER_AXIS}^3 "
            f"cells, got R={radius}, {cells}^3",
            stage="atoms",
        )

    if density.is_zero():
        _logger.info("Zero density, returning the empty atom field")
        return BesselAtomField(
            np.zeros((0, 3)),
            np.zeros((0, 3)),
            radius,
            AtomFitReport(0, 0.0, radius),
        )

    partition = _ball_cells(radius, cells)
    transform = chunked_map(
        lambda chunk: cutoff_transform(density, chunk),
        partition.positions,
        threads,
    )
    weights = 4.0 * np.pi * transform.real * partition.volumes[:, None]
    _logger.info(
        f"Fitted {len(weights)} Bessel atoms on B_{radius} with "
        f"{cells}^3 cells"
    )

    quadrature = SphereQuadrature.for_degree(density.l_max + 8)
    density_values = density(quadrature.nodes)
    error = float(
        np.max(
            np.linalg.norm(
                _sphere_residual(
                    density_values,
                    partition.positions,
                    weights,
                    quadrature.nodes,
                    threads,
                ),
                axis=-1,
            )
        )
    )

    refined = False
    if refine:
        candidate = _refine_weights(
            density_values,
            partition.positions,
            weights,
            quadrature,
            refine_iterations,
        )
        candidate_error = float(
            np.max(
                np.linalg.norm(
                    _sphere_residual(
                        density_values,
                        partition.positions,
                        candidate,
                        quadrature.nodes,
                        threads,
                    ),
                    axis=-1,
                )
            )
        )
        _logger.info(
            f"Least-squares refinement: sup-error {error:.3e} -> "
            f"{candidate_error:.3e}"
        )
        if candidate_error <= error:
            weights, error, refined = candidate, candidate_error, True

    fitted = BesselAtomField(partition.positions, weights, radius)
    pruned = fitted.prune(prune)
    if len(pruned) != len(fitted):
        error = float(
            np.max(
                np.linalg.norm(
                    _sphere_residual(
                        density_values,
                        pruned.centers,
                        pruned.weights,
                        quadrature.nodes,
                        threads,
                    ),
                    axis=-1,
                )
            )
        )

    report = AtomFitReport(
        atom_count=len(pruned),
        sphere_error=error,
        radius=radius,
        cell_size=partition.cell_size,
        refined=refined,
        pruned=len(fitted) - len(pruned),
    )
    _logger.info(f"Bessel atom fit sup-error over S^2: {error:.3e}")
    if tolerance is not None and error > tolerance:
        raise FitFailure(error, tolerance)

    return BesselAtomField(pruned.centers, pruned.weights, radius, report)


def fit_planewave_atoms(
    density: HerglotzDensity,
    cell_count: int,
    check_radius: float = 1.0,
    check_grid: int = 9,
) -> PlaneWaveAtomField:
    """
    Discretize a density into plane waves at the centres of an equal-area
    partition of S^2, with c_n = f(ξ_n) |U_n|.

    Arguments:
        density: the Herglotz density
        cell_count: number of sphere regions, at least 12
        check_radius: radius of the ball on which the error is reported
        check_grid: lattice size of the error grid

    Returns:
        the plane-wave field with its report

    Raises:
        PreconditionError: if cell_count < 12
    """
    if cell_count < MIN_PLANE_WAVE_CELLS:
        raise PreconditionError(
            f"plane-wave fit needs at least {MIN_PLANE_WAVE_CELLS} cells, "
            f"got {cell_count}",
            stage="atoms",
        )

    partition = equal_area_partition(cell_count)
    weights = density(partition.centres) * partition.area
    fitted = PlaneWaveAtomField(partition.centres, weights)

    points = ball_grid(check_radius, check_grid)
    difference = fitted(points) - density.field(points)
    error = float(np.max(np.linalg.norm(difference, axis=-1)))
    report = AtomFitReport(
        atom_count=cell_count,
        sphere_error=error,
        cell_size=partition.max_diameter,
    )
    _logger.info(
        f"Plane-wave fit with {cell_count} atoms, max region diameter "
        f"{partition.max_diameter:.3f}, sup-error over B {error:.3e}"
    )
    return PlaneWaveAtomField(partition.centres, weights, report)
