"""
Helicity ratios and divergence residuals of Beltrami fields.
"""

import logging
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray

from beltrami.errors.beltrami_errors import PreconditionError, ZeroFieldError
from beltrami.lib.parallel import chunked_map
from beltrami.lib.r3_fields.fields import R3Field, divergence
from beltrami.lib.s3.beltrami_field import S3VectorField
from beltrami.lib.s3.diagnostics import DEFAULT_STEP, fd_divergence
from beltrami.lib.t3.torus_field import TorusBeltramiField

_logger = logging.getLogger(__name__)

MIN_QUADRATURE_N = 10_000


def uniform_sphere_points(n: int, seed: int = 0) -> NDArray:
    """
    n points uniformly distributed on S^3, from normalized Gaussians.
    """
    points = np.random.default_rng(seed).normal(size=(n, 4))
    return points / np.linalg.norm(points, axis=-1, keepdims=True)


def s3_helicity_ratio(
    field: S3VectorField,
    quadrature_n: int = 1_000_000,
    seed: int = 0,
    threads: int = 1,
) -> float:
    """
    Monte Carlo estimate of ∫ u·curl u / ∫ |u|^2 over S^3 with the closed
    form curl. Both integrals share the nodes, so a Beltrami field gives
    its eigenvalue up to roundoff.

    Raises:
        PreconditionError: for fewer than 10^4 nodes
        ZeroFieldError: if u vanishes at every node
    """
    if quadrature_n < MIN_QUADRATURE_N:
        raise PreconditionError(
            f"quadrature_n must be at least {MIN_QUADRATURE_N}, got "
            f"{quadrature_n}",
            stage="helicity",
        )

    def integrands(points: NDArray) -> NDArray:
        u = field(points)
        return np.stack(
            [
                np.einsum("pa,pa->p", u, field.curl(points)),
                np.einsum("pa,pa->p", u, u),
            ],
            axis=-1,
        )

    points = uniform_sphere_points(quadrature_n, seed)
    helicity, energy = chunked_map(integrands, points, threads=threads).sum(0)
    if energy == 0.0:
        raise ZeroFieldError("helicity ratio of the zero field")
    ratio = float(helicity / energy)
    _logger.info(f"S^3 helicity ratio {ratio:.6f} from {quadrature_n} nodes")
    return ratio


def helicity_ratio(field: Any, **options: Any) -> float:
    """
    The helicity ratio of a sphere or torus field, by Monte Carlo on S^3
    and by Parseval on T^3.
    """
    if isinstance(field, TorusBeltramiField):
        return field.helicity_ratio()
    if isinstance(field, S3VectorField):
        return s3_helicity_ratio(field, **options)
    raise PreconditionError(
        f"no helicity ratio for {type(field).__name__}", stage="helicity"
    )


def divergence_residual(
    field: Any, samples: ArrayLike, step: float = DEFAULT_STEP
) -> float:
    """
    max |div u| over the samples: analytic for fields on R^3 and T^3,
    fourth-order differences along the Hopf flows on S^3.
    """
    if isinstance(field, S3VectorField):
        values = fd_divergence(field, samples, step)
    elif isinstance(field, R3Field) and field.max_order >= 1:
        values = divergence(field.jets(samples, 1))
    else:
        raise PreconditionError(
            f"no divergence for {type(field).__name__}", stage="norms"
        )
    if np.size(values) == 0:
        return 0.0
    return float(np.max(np.abs(values)))
