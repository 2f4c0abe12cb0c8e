"""
Vector fields on S^3 in the Hopf frame, the frame curl, and the assembly
u = (curl curl F + Λ curl F) / (2Λ^2) of a Beltrami field with
curl u = (Λ+2) u from three degree-Λ harmonics F = Σ Y_i h_i.

Frame jets follow the convention of beltrami.lib.s3.harmonics: entry
[p, i, a1, ..., ak] of D_k is h_a1 ... h_ak F_i(p). In that layout the
frame curl G_l = Σ ε_jil h_j(F_i) + 2 F_l has the jets
G_k[l, α] = ε_jil D_{k+1}[i, α, j] + 2 D_k[l, α].
"""

import abc
import logging
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray

from beltrami.errors.beltrami_errors import (
    DegreeMismatchError,
    DerivativeUnavailableError,
    PreconditionError,
)
from beltrami.lib.r3_fields.fields import LEVI_CIVITA, R3Field
from beltrami.lib.s3.chart import NormalChart
from beltrami.lib.s3.harmonics import S3HarmonicSum, zonal_jets
from beltrami.lib.s3.hopf import as_s3_points, hopf_frame

_logger = logging.getLogger(__name__)


def _shaped(values: NDArray, p: ArrayLike) -> NDArray:
    return values.reshape(4) if np.ndim(p) == 1 else values


class S3VectorField(abc.ABC):
    """
    Abstract base class for tangent vector fields on S^3 embedded in R^4.

    Attributes:
        eigenvalue: λ when curl u = λ u is known to hold
    """

    eigenvalue: float | None = None

    @abc.abstractmethod
    def _evaluate(self, points: NDArray) -> NDArray:
        """
        This method should return the ambient vectors, shape (P, 4), at unit
        points of shape (P, 4).
        """

    @abc.abstractmethod
    def _curl(self, points: NDArray) -> NDArray:
        """
        This method should return the curl in closed form, shape (P, 4).
        """

    def __call__(self, p: ArrayLike) -> NDArray:
        return _shaped(self._evaluate(as_s3_points(p)), p)

    def curl(self, p: ArrayLike) -> NDArray:
        return _shaped(self._curl(as_s3_points(p)), p)

    def eigen_residual(self, p: ArrayLike) -> float:
        """
        max |curl u - λ u| / max |λ u| over the given points.

        Raises:
            PreconditionError: if the field carries no eigenvalue
        """
        if self.eigenvalue is None:
            raise PreconditionError(
                f"{type(self).__name__} has no eigenvalue", stage="assemble"
            )
        points = as_s3_points(p)
        scaled = self.eigenvalue * self._evaluate(points)
        residual = np.max(np.linalg.norm(self._curl(points) - scaled, axis=-1))
        size = np.max(np.linalg.norm(scaled, axis=-1))
        return float(residual / size) if size > 0 else float(residual)

    def descriptor(self) -> dict[str, Any]:
        raise NotImplementedError(
            f"{type(self).__name__} has no descriptor form"
        )


def curl_frame_jets(jets: list[NDArray]) -> list[NDArray]:
    """
    The frame jets of the frame curl, one order shorter.
    """
    return [
        np.einsum("jil,pi...j->pl...", LEVI_CIVITA, jets[k + 1])
        + 2.0 * jets[k]
        for k in range(len(jets) - 1)
    ]


class HopfFrameField(S3VectorField):
    """
    A field Σ F_i h_i given by the frame jets of its components.

    Attributes:
        max_order: highest available frame derivative order
    """

    max_order: int = 0

    @abc.abstractmethod
    def _frame_jets(self, points: NDArray, order: int) -> list[NDArray]:
        """
        This method should return [D_0, ..., D_order] at unit points.
        """

    def frame_jets(self, p: ArrayLike, order: int) -> list[NDArray]:
        """
        Frame jets up to `order`.

        Raises:
            DerivativeUnavailableError: if order exceeds max_order
        """
        if order < 0 or order > self.max_order:
            raise DerivativeUnavailableError(
                f"{type(self).__name__} provides frame derivatives up to "
                f"order {self.max_order}, {order} requested",
                stage="curl",
            )
        return self._frame_jets(as_s3_points(p), order)

    def components(self, p: ArrayLike) -> NDArray:
        """
        The frame components F_i(p), shape (P, 3).
        """
        return self.frame_jets(p, 0)[0]

    def _evaluate(self, points: NDArray) -> NDArray:
        components = self._frame_jets(points, 0)[0]
        return np.einsum("pi,ipa->pa", components, hopf_frame(points))

    def _curl(self, points: NDArray) -> NDArray:
        return hopf_frame_curl(self)._evaluate(points)


class ConstantFrameField(HopfFrameField):
    """
    Σ a_i h_i with constant coefficients; curl = 2 Σ a_i h_i.
    """

    max_order = 8
    eigenvalue = 2.0

    def __init__(self, coefficients: ArrayLike) -> None:
        self.coefficients = np.asarray(coefficients, dtype=float).reshape(3)

    def _frame_jets(self, points: NDArray, order: int) -> list[NDArray]:
        jets = [np.tile(self.coefficients, (len(points), 1))]
        jets.extend(
            np.zeros((len(points), 3) + (3,) * k) for k in range(1, order + 1)
        )
        return jets


class CurlFrameField(HopfFrameField):
    """
    The frame curl of another frame field.
    """

    def __init__(self, source: HopfFrameField) -> None:
        self.source = source
        self.max_order = source.max_order - 1
        if source.eigenvalue is not None:
            self.eigenvalue = source.eigenvalue

    def _frame_jets(self, points: NDArray, order: int) -> list[NDArray]:
        return curl_frame_jets(self.source._frame_jets(points, order + 1))


def hopf_frame_curl(field: HopfFrameField) -> CurlFrameField:
    """
    curl(Σ F_i h_i) as the frame field with components
    G_l = Σ ε_jil h_j(F_i) + 2 F_l.

    Arguments:
        field: a frame field with first derivatives

    Returns:
        the curl field

    Raises:
        DerivativeUnavailableError: if the field has no derivative closure
    """
    if field.max_order < 1:
        raise DerivativeUnavailableError(
            f"{type(field).__name__} has no frame derivatives", stage="curl"
        )
    return CurlFrameField(field)


class HarmonicFrameField(HopfFrameField):
    """
    F = Σ Y_i h_i for three zonal harmonic sums of a common degree, stored
    as shared centers with one weight column per component.

    Attributes:
        degree: Λ
        centers: unit vectors, shape (N, 4)
        weights: shape (N, 3)
    """

    max_order = 3

    def __init__(
        self, degree: int, centers: NDArray, weights: NDArray
    ) -> None:
        self.degree = degree
        self.centers = np.asarray(centers, dtype=float).reshape(-1, 4)
        self.weights = np.asarray(weights, dtype=float).reshape(-1, 3)

    @classmethod
    def from_harmonics(
        cls, harmonics: tuple[S3HarmonicSum, S3HarmonicSum, S3HarmonicSum]
    ) -> "HarmonicFrameField":
        """
        Merge three harmonic sums, sharing centers when all three agree.

        Raises:
            DegreeMismatchError: if the degrees differ
        """
        degrees = {harmonic.degree for harmonic in harmonics}
        if len(degrees) != 1:
            raise DegreeMismatchError(
                f"components have degrees {sorted(degrees)}"
            )

        first = harmonics[0].centers
        if all(
            h.centers.shape == first.shape and np.array_equal(h.centers, first)
            for h in harmonics
        ):
            weights = np.stack([h.weights for h in harmonics], axis=-1)
            return cls(degrees.pop(), first, weights)

        centers = np.concatenate([h.centers for h in harmonics])
        weights = np.zeros((len(centers), 3))
        offset = 0
        for component, harmonic in enumerate(harmonics):
            rows = slice(offset, offset + len(harmonic))
            weights[rows, component] = harmonic.weights
            offset += len(harmonic)
        return cls(degrees.pop(), centers, weights)

    def _frame_jets(self, points: NDArray, order: int) -> list[NDArray]:
        return zonal_jets(
            self.degree, points, self.centers, self.weights, order
        )


class AssembledFrameField(HopfFrameField):
    """
    u = (curl curl F + Λ curl F) / (2Λ^2) for a frame field F.
    """

    def __init__(self, source: HopfFrameField, degree: int) -> None:
        if degree <= 0:
            raise PreconditionError(
                f"assembly needs a positive degree, got {degree}",
                stage="assemble",
            )
        self.source = source
        self.degree = degree
        self.max_order = source.max_order - 2

    def _frame_jets(self, points: NDArray, order: int) -> list[NDArray]:
        single = curl_frame_jets(self.source._frame_jets(points, order + 2))
        double = curl_frame_jets(single)
        scale = 1.0 / (2.0 * self.degree**2)
        return [
            scale * (double[k] + self.degree * single[k])
            for k in range(order + 1)
        ]


class S3BeltramiField(AssembledFrameField):
    """
    The Beltrami field assembled from three degree-Λ harmonics, with
    eigenvalue λ = Λ + 2 and parity u(-p) = (-1)^(λ+1) u(p).
    """

    def __init__(self, harmonics: HarmonicFrameField) -> None:
        super().__init__(harmonics, harmonics.degree)
        self.harmonics = harmonics
        self.eigenvalue = float(harmonics.degree + 2)

    @property
    def centers(self) -> NDArray:
        return self.harmonics.centers

    @property
    def weights(self) -> NDArray:
        return self.harmonics.weights

    def components_harmonics(self) -> tuple[S3HarmonicSum, ...]:
        """
        The three component harmonics Y_1, Y_2, Y_3.
        """
        return tuple(
            S3HarmonicSum(self.degree, self.centers, self.weights[:, i])
            for i in range(3)
        )

    def descriptor(self) -> dict[str, Any]:
        return {
            "type": "s3_beltrami",
            "Lambda": self.degree,
            "centers": self.centers.tolist(),
            "weights": self.weights.tolist(),
        }


def assemble_beltrami(
    y1: S3HarmonicSum, y2: S3HarmonicSum, y3: S3HarmonicSum, degree: int
) -> S3BeltramiField:
    """
    u = 1/(2Λ^2) curl (curl + Λ)(Y_1 h_1 + Y_2 h_2 + Y_3 h_3).

    Arguments:
        y1: the harmonic multiplying h_1
        y2: the harmonic multiplying h_2
        y3: the harmonic multiplying h_3
        degree: Λ, the common degree

    Returns:
        the Beltrami field with curl u = (Λ + 2) u

    Raises:
        DegreeMismatchError: if a harmonic has a degree other than Λ
    """
    for harmonic in (y1, y2, y3):
        if harmonic.degree != degree:
            raise DegreeMismatchError(
                f"harmonic of degree {harmonic.degree} in an assembly of "
                f"degree {degree}"
            )

    field = S3BeltramiField(HarmonicFrameField.from_harmonics((y1, y2, y3)))
    _logger.info(
        f"Assembled Beltrami field of degree {degree} from "
        f"{len(field.centers)} centers"
    )
    return field


class RescaledPushforward(R3Field):
    """
    x ↦ Ψ_* u(Ψ^-1(x / Λ)) on the ball of radius max_radius.
    """

    max_order = 0

    def __init__(
        self,
        field: S3VectorField,
        chart: NormalChart,
        degree: int,
        max_radius: float = 1.0,
    ) -> None:
        self.field = field
        self.chart = chart
        self.degree = degree
        self.max_radius = max_radius

    def _jets(self, points: NDArray, order: int) -> list[NDArray]:
        if np.any(np.linalg.norm(points, axis=-1) > self.max_radius):
            raise PreconditionError(
                f"point outside the chart ball of radius {self.max_radius}",
                stage="pushforward",
            )
        scaled = points / self.degree
        vectors = self.field(self.chart.to_sphere(scaled))
        return [self.chart.differential(scaled, vectors)]


def pushforward_rescale(
    u: S3VectorField,
    chart: NormalChart,
    degree: int,
    x: ArrayLike,
    max_radius: float = 1.0,
) -> NDArray:
    """
    Coordinate components of u at Ψ^-1(x / Λ) in the normal chart.

    Arguments:
        u: the field on S^3
        chart: the normal chart
        degree: Λ
        x: point(s) of R^3 with |x| < max_radius
        max_radius: radius of the admissible ball

    Returns:
        components of the same leading shape as x

    Raises:
        PreconditionError: for a point outside the ball
    """
    return RescaledPushforward(u, chart, degree, max_radius)(x)


class IsometryPushforward(S3VectorField):
    """
    p ↦ g u(g^T p) for g in SO(4); isometries preserve the curl.
    """

    def __init__(self, source: S3VectorField, matrix: NDArray) -> None:
        self.source = source
        self.matrix = matrix
        self.eigenvalue = source.eigenvalue

    def _evaluate(self, points: NDArray) -> NDArray:
        return self.source._evaluate(points @ self.matrix) @ self.matrix.T

    def _curl(self, points: NDArray) -> NDArray:
        return self.source._curl(points @ self.matrix) @ self.matrix.T


class FieldSum(S3VectorField):
    """
    The sum of fields sharing an eigenvalue.
    """

    def __init__(self, terms: list[S3VectorField]) -> None:
        self.terms = terms
        eigenvalues = {term.eigenvalue for term in terms}
        self.eigenvalue = eigenvalues.pop() if len(eigenvalues) == 1 else None

    def _evaluate(self, points: NDArray) -> NDArray:
        return sum(term._evaluate(points) for term in self.terms)

    def _curl(self, points: NDArray) -> NDArray:
        return sum(term._curl(points) for term in self.terms)


def antipodal_image(field: S3VectorField) -> IsometryPushforward:
    """
    The pushforward of a field by p ↦ -p, equal to (-1)^λ u for an
    eigenfield of eigenvalue λ.
    """
    return IsometryPushforward(field, -np.eye(4))
