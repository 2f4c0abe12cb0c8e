"""
Beltrami fields on S^3 carrying several localized structures, isometry
pushforwards, and sums equivariant under the cyclic groups defining lens
spaces L(p, q).
"""

import itertools
import logging
import math

import numpy as np
from numpy.typing import ArrayLike, NDArray

from beltrami.errors.beltrami_errors import (
    AntipodalCentersError,
    NonOrthogonalError,
    PreconditionError,
)
from beltrami.lib.r3_fields.atoms import BesselAtomField
from beltrami.lib.s3.beltrami_field import (
    FieldSum,
    HarmonicFrameField,
    IsometryPushforward,
    S3BeltramiField,
    S3VectorField,
)
from beltrami.lib.s3.chart import exp_chart
from beltrami.lib.s3.harmonics import lift_atoms
from beltrami.lib.s3.hopf import as_s3_points, geodesic_distance

_logger = logging.getLogger(__name__)

ORTHOGONALITY_TOLERANCE = 1e-12
GROUP_TOLERANCE = 1e-10
COINCIDENCE_TOLERANCE = 1e-12


def chart_radius(atoms: list[BesselAtomField], degree: int) -> float:
    """
    ρ = (R + 1) / Λ, the geodesic radius holding every lifted center and
    the rescaled unit ball.
    """
    radius = max((field.radius for field in atoms), default=0.0)
    return (radius + 1.0) / degree


def multi_center_field(
    inputs: list[tuple[ArrayLike, BesselAtomField]], degree: int
) -> S3BeltramiField:
    """
    One Beltrami field whose rescaled pushforward at each chart(P_j)
    approximates the j-th atom field.

    Arguments:
        inputs: pairs of a base point P_j and an atom field
        degree: Λ

    Returns:
        the summed field, exact eigenfield of eigenvalue Λ + 2

    Raises:
        AntipodalCentersError: for equal, antipodal or too close base points
    """
    if not inputs:
        raise PreconditionError("no centers given", stage="multi_center")

    bases = as_s3_points([base for base, _ in inputs])
    rho = chart_radius([atoms for _, atoms in inputs], degree)
    for (i, p), (j, q) in itertools.combinations(enumerate(bases), 2):
        cosine = float(p @ q)
        if abs(abs(cosine) - 1.0) <= COINCIDENCE_TOLERANCE:
            kind = "coincide" if cosine > 0 else "are antipodal"
            raise AntipodalCentersError(f"centers {i} and {j} {kind}")

        distance = float(geodesic_distance(p, q))
        if not 2.0 * rho <= distance <= math.pi - 2.0 * rho:
            raise AntipodalCentersError(
                f"centers {i} and {j} at distance {distance:.4f}, outside "
                f"[{2 * rho:.4f}, {math.pi - 2 * rho:.4f}]"
            )

    centers = []
    weights = []
    for base, (_, atoms) in zip(bases, inputs):
        harmonics = lift_atoms(atoms, degree, exp_chart(base))
        centers.append(harmonics[0].centers)
        weights.append(np.stack([h.weights for h in harmonics], axis=-1))

    _logger.info(f"Multi-center field with {len(inputs)} centers")
    return S3BeltramiField(
        HarmonicFrameField(
            degree, np.concatenate(centers), np.concatenate(weights)
        )
    )


def _validate_rotation(matrix: NDArray) -> NDArray:
    matrix = np.asarray(matrix, dtype=float)
    if matrix.shape != (4, 4):
        raise NonOrthogonalError(f"expected a 4x4 matrix, got {matrix.shape}")

    defect = np.max(np.abs(matrix.T @ matrix - np.eye(4)))
    if defect > ORTHOGONALITY_TOLERANCE:
        raise NonOrthogonalError(f"g^T g deviates from I by {defect:.3e}")

    determinant = np.linalg.det(matrix)
    if abs(determinant - 1.0) > ORTHOGONALITY_TOLERANCE:
        raise NonOrthogonalError(f"det g = {determinant:.6f}, expected 1")
    return matrix


def isometry_pushforward(
    u: S3VectorField, matrix: ArrayLike
) -> IsometryPushforward:
    """
    The field p ↦ g u(g^-1 p) for g ∈ SO(4).

    Raises:
        NonOrthogonalError: if g^T g != I or det g != 1
    """
    return IsometryPushforward(u, _validate_rotation(matrix))


def lens_generator(p: int, q: int) -> NDArray:
    """
    The generator of the Z_p action defining L(p, q): rotation by 2π/p in
    the (x1, x2) plane and by 2πq/p in the (x3, x4) plane.

    Raises:
        PreconditionError: if p < 1
    """
    if p < 1:
        raise PreconditionError(f"group order {p} must be positive")

    generator = np.zeros((4, 4))
    for offset, angle in ((0, 2 * math.pi / p), (2, 2 * math.pi * q / p)):
        cosine, sine = math.cos(angle), math.sin(angle)
        generator[offset : offset + 2, offset : offset + 2] = [
            [cosine, -sine],
            [sine, cosine],
        ]
    return generator


def equivariant_sum(
    u: S3VectorField, generator: ArrayLike, p: int
) -> S3VectorField:
    """
    Σ_{j < p'} (g^j)_* u, equivariant under the group generated by g.

    For even p the group contains g^(p/2) = -I, and an eigenfield of even
    eigenvalue is odd, hence already invariant under -I; the sum then runs
    over p' = p/2 terms.

    Arguments:
        u: the field
        generator: g with g^p = I
        p: the group order

    Returns:
        the equivariant field; u itself when p = 1

    Raises:
        PreconditionError: if g^p != I, or p is even and either
            g^(p/2) != -I or the eigenvalue is odd
    """
    g = _validate_rotation(generator)
    if p < 1:
        raise PreconditionError(
            f"group order {p} must be positive", stage="equivariant"
        )
    power = np.linalg.matrix_power(g, p)
    if np.max(np.abs(power - np.eye(4))) > GROUP_TOLERANCE:
        raise PreconditionError(
            f"generator does not satisfy g^{p} = I", stage="equivariant"
        )
    if p == 1:
        return u

    terms = p
    if p % 2 == 0:
        half = np.linalg.matrix_power(g, p // 2)
        if np.max(np.abs(half + np.eye(4))) > GROUP_TOLERANCE:
            raise PreconditionError(
                f"g^{p // 2} is not -I", stage="equivariant"
            )
        if u.eigenvalue is None or int(u.eigenvalue) % 2 != 0:
            raise PreconditionError(
                f"even group order {p} needs an even eigenvalue, got "
                f"{u.eigenvalue}",
                stage="equivariant",
            )
        terms = p // 2

    pushforwards = [
        IsometryPushforward(u, np.linalg.matrix_power(g, j))
        for j in range(terms)
    ]
    _logger.info(f"Equivariant sum over {terms} group elements")
    return FieldSum(pushforwards)
