"""
The construction pipelines: reference → atoms → lift → assemble on S^3
and reference → plane atoms → snap → project on T^3.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, NamedTuple, Optional

import numpy as np
from numpy.typing import NDArray

from beltrami.config.pipeline_config import PipelineConfig
from beltrami.errors.beltrami_errors import InvariantViolation
from beltrami.lib.dynamics.helicity import uniform_sphere_points
from beltrami.lib.dynamics.norms import fd_gradient, sup_error_norm
from beltrami.lib.r3_fields.atoms import (
    BesselAtomField,
    PlaneWaveAtomField,
    fit_bessel_atoms,
    fit_planewave_atoms,
)
from beltrami.lib.r3_fields.fields import (
    R3Field,
    beltrami_projection,
    curl_jets,
    reference_beltrami,
)
from beltrami.lib.r3_fields.fourier_bessel import fourier_bessel_expand
from beltrami.lib.r3_fields.herglotz import HerglotzDensity, herglotz_density
from beltrami.lib.s3.beltrami_field import (
    RescaledPushforward,
    S3BeltramiField,
    assemble_beltrami,
)
from beltrami.lib.s3.chart import NormalChart, exp_chart
from beltrami.lib.s3.harmonics import lift_atoms
from beltrami.lib.s3.multi_center import multi_center_field
from beltrami.lib.t3.lattice import enumerate_sphere_lattice
from beltrami.lib.t3.torus_field import (
    TorusBeltramiField,
    build_torus_beltrami,
    snap_atoms,
)

_logger = logging.getLogger(__name__)

EIGEN_TOLERANCE = 1e-9
EIGEN_SAMPLES = 200
FD_CURL_TOLERANCE = 1e-6
FIT_CHECK_GRID = 17


@dataclass
class BuildResult:
    """
    A constructed field with what it was built from.

    Attributes:
        manifold: "s3" or "t3"
        degree: Λ
        field: the Beltrami field on S^3 or T^3
        atoms: the atom field the construction started from; the snapped
            plane waves on T^3
        reference: the R^3 field being approximated
        base_points: chart base points on S^3, empty on T^3
        report: stage measurements, JSON-serializable
    """

    manifold: str
    degree: int
    field: S3BeltramiField | TorusBeltramiField
    atoms: BesselAtomField | PlaneWaveAtomField
    reference: R3Field
    base_points: tuple[tuple[float, ...], ...] = ()
    report: dict[str, Any] = field(default_factory=dict)

    @property
    def chart(self) -> NormalChart:
        return exp_chart(self.base_points[0])

    def rescaled(self, max_radius: float = 1.0) -> R3Field:
        """
        The field seen at the wavelength scale: the pushforward of u under
        x ↦ chart(x / Λ) on S^3, x ↦ u(x / λ) on T^3.
        """
        if self.manifold == "t3":
            return self.field.rescaled()
        return RescaledPushforward(
            self.field, self.chart, self.degree, max_radius
        )

    def limit(self) -> R3Field:
        """
        The Λ → ∞ limit of rescaled(): the Beltrami projection of the atom
        field.
        """
        if self.manifold == "t3":
            return RealPart(beltrami_projection(self.atoms.real_part()))
        return beltrami_projection(self.atoms)


class RealPart(R3Field):
    """
    Re w of a complex field such as a plane-wave sum.
    """

    def __init__(self, source: R3Field) -> None:
        self.source = source
        self.max_order = source.max_order

    def _jets(self, points: NDArray, order: int) -> list[NDArray]:
        return [jet.real for jet in self.source.jets(points, order)]


def reference_density(
    config: PipelineConfig,
) -> tuple[R3Field, HerglotzDensity]:
    """
    The configured reference field and the Herglotz density of its
    Fourier-Bessel expansion.
    """
    reference = reference_beltrami(
        config.reference.kind, **config.reference.params
    )
    series = fourier_bessel_expand(reference, config.reference.l_max)
    return reference, herglotz_density(series)


class Fitted(NamedTuple):
    reference: R3Field
    atoms: BesselAtomField | PlaneWaveAtomField


def fit_s3(config: PipelineConfig) -> Fitted:
    """
    The reference and its Bessel atom fit on the ball of radius R.

    Raises:
        PreconditionError: for an invalid reference or fit size
        FitFailure: if the fit misses the configured tolerance
    """
    reference, density = reference_density(config)
    options = config.fit
    atoms = fit_bessel_atoms(
        density,
        radius=options.radius,
        cells=options.cells,
        tolerance=options.tolerance,
        refine=options.refine,
        prune=options.prune,
        threads=config.threads,
    )
    return Fitted(reference, atoms)


def fit_t3(config: PipelineConfig) -> Fitted:
    """
    The reference and its plane-wave fit on an equal-area partition of
    S^2.
    """
    reference, density = reference_density(config)
    return Fitted(
        reference, fit_planewave_atoms(density, config.fit.plane_wave_cells)
    )


def assemble_s3(
    atoms: BesselAtomField,
    degree: int,
    base_points: tuple[tuple[float, ...], ...],
) -> S3BeltramiField:
    """
    Lift the atoms to degree Λ at every base point and assemble one field.

    Raises:
        PreconditionError: if Λ does not exceed the atom radius, or two base
            points coincide or are antipodal
    """
    if len(base_points) == 1:
        harmonics = lift_atoms(atoms, degree, exp_chart(base_points[0]))
        return assemble_beltrami(*harmonics, degree)
    return multi_center_field(
        [(point, atoms) for point in base_points], degree
    )


def _fit_errors(
    reference: R3Field, atoms: R3Field, threads: int
) -> dict[str, float]:
    fit_error = sup_error_norm(
        reference, atoms, grid_n=FIT_CHECK_GRID, threads=threads
    )
    size = sup_error_norm(
        reference,
        lambda x: np.zeros_like(x),
        grid_n=FIT_CHECK_GRID,
        threads=threads,
    )
    return {
        "c0_error": fit_error.aggregate,
        "c0_reference": size.aggregate,
    }


def check_eigen_residual(
    residual: float, tolerance: float, what: str
) -> float:
    """
    Raises:
        InvariantViolation: if residual exceeds tolerance
    """
    if not residual <= tolerance:
        raise InvariantViolation(
            f"{what} {residual:.3e} exceeds {tolerance:.1e}"
        )
    return residual


def build_s3(
    config: PipelineConfig,
    degree: Optional[int] = None,
    fitted: Optional[Fitted] = None,
) -> BuildResult:
    """
    Fit Bessel atoms to the reference, lift them to degree Λ and assemble
    the Beltrami field, checking curl u = (Λ + 2) u at random points.

    Arguments:
        config: the run configuration
        degree: Λ, the first configured degree if None
        fitted: a reference and atom fit to reuse across degrees

    Returns:
        the field with its build report

    Raises:
        PreconditionError: tagged with the stage that refused its input
        FitFailure: if the atom fit misses the configured tolerance
        InvariantViolation: if the eigen-identity fails
    """
    degree = degree or config.primary_degree
    reference, atoms = fitted or fit_s3(config)
    field = assemble_s3(atoms, degree, config.chart.base_points)

    points = uniform_sphere_points(EIGEN_SAMPLES, seed=config.seed)
    near = exp_chart(config.chart.base_points[0]).to_sphere(
        atoms.centers[: EIGEN_SAMPLES // 2] / degree
    )
    residual = check_eigen_residual(
        field.eigen_residual(np.concatenate([points, near])),
        EIGEN_TOLERANCE,
        "relative eigen residual",
    )

    report = {
        "manifold": "s3",
        "Lambda": degree,
        "eigenvalue": field.eigenvalue,
        "eigen_residual": residual,
        "atoms": atoms.report.as_dict() if atoms.report else {},
        "fit": _fit_errors(reference, atoms, config.threads),
        "centers": len(field.centers),
    }
    _logger.info(
        f"Built S^3 field of degree {degree}: eigen residual "
        f"{residual:.3e}, {len(field.centers)} centers"
    )
    return BuildResult(
        "s3", degree, field, atoms, reference, config.chart.base_points, report
    )


def fd_curl_residual(
    field: TorusBeltramiField, points: NDArray, step: float
) -> float:
    """
    max |curl_h u - λ u| / max |λ u| with a differenced curl.
    """
    gradient = fd_gradient(field, step)(points)
    curl = curl_jets([field(points), gradient])[0]
    scaled = field.eigenvalue * field(points)
    size = np.max(np.linalg.norm(scaled, axis=-1))
    residual = np.max(np.linalg.norm(curl - scaled, axis=-1))
    return float(residual / size) if size > 0 else float(residual)


def build_t3(
    config: PipelineConfig,
    degree: Optional[int] = None,
    fitted: Optional[Fitted] = None,
) -> BuildResult:
    """
    Fit plane waves to the reference, snap their directions to the lattice
    sphere |k|^2 = n and project every mode onto curl = λ.

    Arguments:
        config: the run configuration
        degree: Λ, the first configured degree if None; ignored when the
            configuration sets norm_squared
        fitted: a reference and plane-wave fit to reuse across degrees

    Returns:
        the field with its build report

    Raises:
        PreconditionError: tagged with the stage that refused its input
        InvariantViolation: if a mode or the differenced curl fails
    """
    degree = degree or config.primary_degree
    lattice_size = (
        {"norm_squared": config.norm_squared}
        if config.norm_squared is not None
        else {"degree": degree}
    )
    reference, atoms = fitted or fit_t3(config)
    lattice = enumerate_sphere_lattice(threads=config.threads, **lattice_size)
    snapped, assignment = snap_atoms(atoms, lattice)
    field = build_torus_beltrami(snapped, **lattice_size)

    rng = np.random.default_rng(config.seed)
    points = rng.uniform(0.0, 2.0 * np.pi, (EIGEN_SAMPLES, 3))
    fd_residual = check_eigen_residual(
        fd_curl_residual(field, points, 0.02 / field.eigenvalue),
        FD_CURL_TOLERANCE,
        "differenced curl residual",
    )

    report = {
        "manifold": "t3",
        "Lambda": field.degree,
        "norm_squared": field.norm_squared,
        "eigenvalue": field.eigenvalue,
        "lattice_points": len(lattice),
        "modes": len(field),
        "snap_displacement": assignment.max_displacement,
        "mode_residuals": field.mode_residuals(),
        "fd_curl_residual": fd_residual,
        "atoms": atoms.report.as_dict() if atoms.report else {},
        "fit": _fit_errors(
            reference, RealPart(atoms.real_part()), config.threads
        ),
    }
    _logger.info(
        f"Built T^3 field with {len(field)} modes at |k|^2 = "
        f"{field.norm_squared}, snap displacement "
        f"{assignment.max_displacement:.3e}"
    )
    return BuildResult(
        "t3", field.degree, field, snapped, reference, (), report
    )


def build(
    config: PipelineConfig,
    degree: Optional[int] = None,
    fitted: Optional[Fitted] = None,
) -> BuildResult:
    if config.manifold == "t3":
        return build_t3(config, degree, fitted)
    return build_s3(config, degree, fitted)


def fit(config: PipelineConfig) -> Fitted:
    if config.manifold == "t3":
        return fit_t3(config)
    return fit_s3(config)
