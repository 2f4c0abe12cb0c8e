"""
Independent numerical checks of fields on S^3: finite differences along
the exact Hopf flows, a curl computed in stereographic coordinates, and the
closed-form residual of the Hodge-Laplacian identity
curl curl F - grad div F = Λ(Λ+2) F + 2 curl F for degree-Λ frame fields.
"""

from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray

from beltrami.lib.r3_fields.fields import LEVI_CIVITA
from beltrami.lib.s3.beltrami_field import (
    HarmonicFrameField,
    S3VectorField,
    curl_frame_jets,
)
from beltrami.lib.s3.harmonics import S3HarmonicSum
from beltrami.lib.s3.hopf import as_s3_points, hopf_flow, hopf_frame

DEFAULT_STEP = 1e-3

# fourth-order central stencils
_FIRST = ((-2, 1 / 12), (-1, -8 / 12), (1, 8 / 12), (2, -1 / 12))
_SECOND = (
    (-2, -1 / 12),
    (-1, 16 / 12),
    (0, -30 / 12),
    (1, 16 / 12),
    (2, -1 / 12),
)


def directional_derivative(
    fn: Callable[[NDArray], NDArray],
    i: int,
    points: NDArray,
    step: float = DEFAULT_STEP,
) -> NDArray:
    """
    h_i(fn) at points by a fourth-order stencil along the orbits of h_i.
    """
    return (
        sum(
            weight * fn(hopf_flow(i, points, shift * step))
            for shift, weight in _FIRST
        )
        / step
    )


def fd_laplacian(
    fn: Callable[[NDArray], NDArray], p: ArrayLike, step: float = 1e-2
) -> NDArray:
    """
    Δfn = Σ_a h_a h_a fn by fourth-order second differences.
    """
    points = as_s3_points(p)
    return sum(
        weight * fn(hopf_flow(i, points, shift * step))
        for i in (1, 2, 3)
        for shift, weight in _SECOND
    ) / step**2


def _frame_components(field: S3VectorField) -> Callable[[NDArray], NDArray]:
    def components(points: NDArray) -> NDArray:
        return np.einsum("pa,ipa->pi", field(points), hopf_frame(points))

    return components


def fd_frame_curl(
    field: S3VectorField, p: ArrayLike, step: float = DEFAULT_STEP
) -> NDArray:
    """
    curl u from differences of the frame components F_i = u·h_i, as
    ambient vectors of shape (P, 4).
    """
    points = as_s3_points(p)
    components = _frame_components(field)
    derivatives = np.stack(
        [
            directional_derivative(components, j, points, step)
            for j in (1, 2, 3)
        ]
    )
    curl = np.einsum(
        "jil,jpi->pl", LEVI_CIVITA, derivatives
    ) + 2.0 * components(points)
    return np.einsum("pl,lpa->pa", curl, hopf_frame(points))


def fd_divergence(
    field: S3VectorField, p: ArrayLike, step: float = DEFAULT_STEP
) -> NDArray:
    """
    div u = Σ_a h_a(u·h_a); the Hopf fields are divergence free.
    """
    points = as_s3_points(p)
    components = _frame_components(field)
    return sum(
        directional_derivative(components, a, points, step)[:, a - 1]
        for a in (1, 2, 3)
    )


def _stereographic(points: NDArray) -> NDArray:
    return points[:, :3] / (1.0 + points[:, 3:])


def _inverse_stereographic(y: NDArray) -> NDArray:
    square = np.sum(y**2, axis=-1, keepdims=True)
    return np.concatenate([2.0 * y, 1.0 - square], axis=-1) / (1.0 + square)


def _stereographic_pushforward(points: NDArray, vectors: NDArray) -> NDArray:
    denominator = 1.0 + points[:, 3:]
    return (
        vectors[:, :3] * denominator - points[:, :3] * vectors[:, 3:]
    ) / denominator**2


def _stereographic_pullback(y: NDArray, components: NDArray) -> NDArray:
    square = np.sum(y**2, axis=-1, keepdims=True)
    scale = 1.0 + square
    radial = np.sum(y * components, axis=-1, keepdims=True)
    spatial = 2.0 * components / scale - 4.0 * y * radial / scale**2
    last = -4.0 * radial / scale**2
    return np.concatenate([spatial, last], axis=-1)


def stereographic_curl(
    field: S3VectorField, p: ArrayLike, step: float = DEFAULT_STEP
) -> NDArray:
    """
    curl u computed in stereographic coordinates y = x_{1..3} / (1 + x_4),
    where the metric is Ω^2 δ with Ω = 2 / (1 + |y|^2) and
    (curl U)^i = s Ω^-3 ε_ijk ∂_j(Ω^2 U^k). The sign s orients the
    coordinates like the Hopf frame. Points must avoid x_4 = -1.

    Returns:
        ambient vectors of shape (P, 4)
    """
    points = as_s3_points(p)
    y = _stereographic(points)
    frame = hopf_frame(points)
    images = np.stack(
        [_stereographic_pushforward(points, frame[i]) for i in range(3)],
        axis=1,
    )
    orientation = np.sign(np.linalg.det(images))

    def lowered(coordinates: NDArray) -> NDArray:
        sphere = _inverse_stereographic(coordinates)
        omega = 2.0 / (1.0 + np.sum(coordinates**2, axis=-1, keepdims=True))
        return omega**2 * _stereographic_pushforward(sphere, field(sphere))

    gradient = np.zeros((len(points), 3, 3))
    for j in range(3):
        shift = np.zeros(3)
        shift[j] = step
        gradient[:, :, j] = sum(
            weight * lowered(y + offset * shift) for offset, weight in _FIRST
        ) / step

    omega = 2.0 / (1.0 + np.sum(y**2, axis=-1))
    curl = np.einsum("ijk,pkj->pi", LEVI_CIVITA, gradient)
    curl = (orientation / omega**3)[:, None] * curl
    return _stereographic_pullback(y, curl)


def lemma_residual(
    harmonics: tuple[S3HarmonicSum, S3HarmonicSum, S3HarmonicSum],
    p: ArrayLike,
) -> float:
    """
    max |curl curl F - grad div F - Λ(Λ+2) F - 2 curl F| / (Λ(Λ+2) max |F|)
    for F = Σ Y_i h_i, all terms in closed form.
    """
    field = HarmonicFrameField.from_harmonics(harmonics)
    degree = field.degree
    jets = field.frame_jets(p, 2)
    single = curl_frame_jets(jets)
    double = curl_frame_jets(single)[0]
    grad_div = np.einsum("piji->pj", jets[2])
    residual = (
        double
        - grad_div
        - degree * (degree + 2) * jets[0]
        - 2.0 * single[0]
    )
    size = degree * (degree + 2) * np.max(np.abs(jets[0]))
    worst = float(np.max(np.abs(residual)))
    return worst / size if size > 0 else worst
