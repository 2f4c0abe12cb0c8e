"""
The Hopf frame of S^3: three orthonormal linear vector fields h_i(p) = H_i p
with constant antisymmetric matrices satisfying the quaternion relations
H_i H_j = -δ_ij I + ε_ijl H_l, hence [h_i, h_j] = -2 ε_ijl h_l and
curl h_i = 2 h_i.
"""

import numpy as np
from numpy.typing import ArrayLike, NDArray

from beltrami.errors.beltrami_errors import PreconditionError

NORM_SLACK = 1e-14

_H1 = np.array(
    [
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
    ]
)
_H2 = np.array(
    [
        [0.0, 0.0, -1.0, 0.0],
        [0.0, 0.0, 0.0, -1.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
    ]
)
_H3 = _H1 @ _H2
HOPF_MATRICES = np.stack([_H1, _H2, _H3])
HOPF_MATRICES.flags.writeable = False


def hopf_matrices() -> NDArray:
    """
    The matrices H_1, H_2, H_3 stacked into shape (3, 4, 4).
    """
    return HOPF_MATRICES.copy()


def as_s3_points(p: ArrayLike) -> NDArray:
    """
    Coerce point(s) to shape (P, 4) and renormalize onto the unit sphere.

    Raises:
        PreconditionError: for the zero vector
    """
    points = np.asarray(p, dtype=float).reshape(-1, 4)
    norms = np.linalg.norm(points, axis=-1, keepdims=True)
    if np.any(norms == 0.0):
        raise PreconditionError("the zero vector is not a point of S^3")
    return points / norms


def hopf_field(i: int, p: ArrayLike) -> NDArray:
    """
    h_i(p) = H_i p.

    >>> hopf_field(1, [0.0, 0.0, 0.0, 1.0])
    array([-1.,  0.,  0.,  0.])

    Arguments:
        i: 1, 2 or 3
        p: point(s) with trailing dimension 4

    Returns:
        tangent vector(s) of the same shape as p

    Raises:
        PreconditionError: if i is not 1, 2 or 3
    """
    if i not in (1, 2, 3):
        raise PreconditionError(f"Hopf field index {i} not in 1..3")
    p = np.asarray(p, dtype=float)
    return p @ HOPF_MATRICES[i - 1].T


def hopf_frame(points: NDArray) -> NDArray:
    """
    All three Hopf fields at points of shape (P, 4), as shape (3, P, 4).
    """
    return np.einsum("iab,pb->ipa", HOPF_MATRICES, points)


def hopf_flow(i: int, p: ArrayLike, t: ArrayLike) -> NDArray:
    """
    The exact flow of h_i: cos t p + sin t H_i p (H_i^2 = -I).
    """
    p = np.asarray(p, dtype=float)
    t = np.asarray(t, dtype=float)[..., None]
    return np.cos(t) * p + np.sin(t) * hopf_field(i, p)


def geodesic_distance(p: ArrayLike, q: ArrayLike) -> NDArray:
    """
    The great-circle distance 2 arcsin(|p - q| / 2) between unit vectors.
    """
    chord = np.linalg.norm(np.asarray(p) - np.asarray(q), axis=-1)
    return 2.0 * np.arcsin(np.clip(0.5 * chord, 0.0, 1.0))
