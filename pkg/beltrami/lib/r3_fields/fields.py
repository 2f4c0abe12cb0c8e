"""
Vector fields on R^3 with analytic partial derivatives, and the closed-form
Beltrami fields used as reference inputs.

A jet of order n is the list [D_0, ..., D_n] where D_k has shape
(P, 3) + (3,) * k and D_k[p, i, a1, ..., ak] is the partial derivative
of the i-th component along a1, ..., ak at the p-th point.
"""

import abc
import itertools
import logging
import math
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray

from beltrami.errors.beltrami_errors import (
    DerivativeUnavailableError,
    PreconditionError,
)
from beltrami.lib.r3_fields.harmonics import SolidHarmonic
from beltrami.lib.specfun.radial import (
    radial_derivative_tensor,
    radial_kernels,
    symmetric_tensor,
)

_logger = logging.getLogger(__name__)

DEFAULT_MAX_ORDER = 4
LEVI_CIVITA = np.zeros((3, 3, 3))
for _i, _j, _k in itertools.permutations(range(3)):
    LEVI_CIVITA[_i, _j, _k] = np.linalg.det(np.eye(3)[[_i, _j, _k]])


def as_points(x: ArrayLike) -> NDArray:
    """
    Coerce a point or an array of points to shape (P, 3).
    """
    points = np.asarray(x, dtype=float)
    return points.reshape(-1, 3)


def curl_jets(jets: list[NDArray]) -> list[NDArray]:
    """
    The jet of curl F from the jet of F, one order shorter.
    """
    return [
        np.einsum("ijk,pk...j->pi...", LEVI_CIVITA, jets[order + 1])
        for order in range(len(jets) - 1)
    ]


def divergence(jets: list[NDArray]) -> NDArray:
    return np.einsum("pii->p", jets[1])


def laplacian(jets: list[NDArray]) -> NDArray:
    return np.einsum("pijj->pi", jets[2])


class R3Field(abc.ABC):
    """
    Abstract base class for vector fields on R^3 with analytic partial
    derivatives up to `max_order`.

    Attributes:
        max_order: highest available derivative order
        beltrami_constant: λ when curl v = λ v is known to hold
        helmholtz: True when Δv + v = 0 is known to hold
    """

    max_order: int = DEFAULT_MAX_ORDER
    beltrami_constant: float | None = None
    helmholtz: bool = False

    @abc.abstractmethod
    def _jets(self, points: NDArray, order: int) -> list[NDArray]:
        """
        This method should return the jet of the field up to `order` at
        points of shape (P, 3).

        Arguments:
            points: evaluation points
            order: highest derivative order, already validated
        """

    def jets(self, x: ArrayLike, order: int) -> list[NDArray]:
        """
        The jet of the field up to `order`.

        Arguments:
            x: point(s) with trailing dimension 3
            order: highest derivative order

        Returns:
            [D_0, ..., D_order]

        Raises:
            DerivativeUnavailableError: if order exceeds max_order
        """
        if order < 0 or order > self.max_order:
            raise DerivativeUnavailableError(
                f"{type(self).__name__} provides derivatives up to order "
                f"{self.max_order}, {order} requested",
                stage="eval",
            )
        return self._jets(as_points(x), order)

    def derivative(self, x: ArrayLike, order: int) -> NDArray:
        return self.jets(x, order)[order]

    def __call__(self, x: ArrayLike) -> NDArray:
        values = self.jets(x, 0)[0]
        return values.reshape(np.shape(x)) if np.ndim(x) == 1 else values

    def curl(self, x: ArrayLike) -> NDArray:
        return curl_jets(self.jets(x, 1))[0]

    def descriptor(self) -> dict[str, Any]:
        raise NotImplementedError(
            f"{type(self).__name__} has no descriptor form"
        )


class ABCField(R3Field):
    """
    The Arnold-Beltrami-Childress field
    (A sin z + C cos y, B sin x + A cos z, C sin y + B cos x), with
    curl v = v.
    """

    beltrami_constant = 1.0
    helmholtz = True

    def __init__(self, a: float = 1.0, b: float = 1.0, c: float = 1.0) -> None:
        self.coefficients = (a, b, c)
        # (component, coefficient, variable, phase) for
        # coefficient sin(x_var + phase)
        self._terms = [
            (0, a, 2, 0.0),
            (0, c, 1, 0.5 * math.pi),
            (1, b, 0, 0.0),
            (1, a, 2, 0.5 * math.pi),
            (2, c, 1, 0.0),
            (2, b, 0, 0.5 * math.pi),
        ]

    def _jets(self, points: NDArray, order: int) -> list[NDArray]:
        jets = []
        for n in range(order + 1):
            tensor = np.zeros((points.shape[0], 3) + (3,) * n)
            for component, coefficient, variable, phase in self._terms:
                index = (slice(None), component) + (variable,) * n
                tensor[index] += coefficient * np.sin(
                    points[:, variable] + phase + 0.5 * math.pi * n
                )
            jets.append(tensor)
        return jets


class _ScalarGeneratorField(R3Field):
    """
    Fields built from the scalar Helmholtz solution ψ = j_l(r) Y_lm(x/r),
    written as (-1)^l R_lm(x) φ^(l)(|x|^2 / 2).
    """

    def __init__(self, l: int, m: int) -> None:
        if l < 0 or abs(m) > l:
            raise PreconditionError(
                f"invalid harmonic indices l={l}, m={m}", stage="reference"
            )
        self.l = l
        self.m = m
        self.solid_harmonic = SolidHarmonic(l, m)

    def scalar_jets(self, points: NDArray, order: int) -> list[NDArray]:
        """
        All partials of ψ up to `order`, as symmetric tensors of shape
        (P,) + (3,) * n.
        """
        kernels = radial_kernels(
            self.l + order, np.linalg.norm(points, axis=-1)
        )
        radial = [
            radial_derivative_tensor(self.l, points, n, kernels)
            for n in range(order + 1)
        ]
        sign = (-1) ** self.l
        lead_shape = points.shape[:1]
        polynomial_partials: dict[tuple[int, ...], NDArray] = {}
        jets = []
        for n in range(order + 1):
            values = {}
            for index in itertools.combinations_with_replacement(range(3), n):
                total = np.zeros(lead_shape)
                for mask in itertools.product((False, True), repeat=n):
                    polynomial_axes = tuple(
                        axis for axis, chosen in zip(index, mask) if chosen
                    )
                    radial_axes = tuple(
                        axis for axis, chosen in zip(index, mask) if not chosen
                    )
                    if len(polynomial_axes) > self.l:
                        continue
                    key = tuple(sorted(polynomial_axes))
                    if key not in polynomial_partials:
                        polynomial_partials[key] = self.solid_harmonic.partial(
                            points, key
                        )
                    total = total + polynomial_partials[key] * radial[
                        len(radial_axes)
                    ][(slice(None),) + radial_axes]
                values[index] = sign * total
            jets.append(symmetric_tensor(values, n, lead_shape))
        return jets


class HelmholtzMode(_ScalarGeneratorField):
    """
    The Helmholtz solution j_l(r) Y_lm(x/r) b for a constant vector b.
    """

    helmholtz = True

    def __init__(
        self, l: int, m: int, vector: ArrayLike = (1.0, 0.0, 0.0)
    ) -> None:
        super().__init__(l, m)
        self.vector = np.asarray(vector, dtype=float)

    def _jets(self, points: NDArray, order: int) -> list[NDArray]:
        return [
            np.einsum("p...,i->pi...", scalar, self.vector)
            for scalar in self.scalar_jets(points, order)
        ]


class ChandrasekharKendallField(_ScalarGeneratorField):
    """
    The Chandrasekhar-Kendall field v = curl(ψa) + curl curl(ψa) with
    ψ = j_l(r) Y_lm(x/r) and a constant axis a, so that curl v = v.

    Expanded with Δψ + ψ = 0 this is v = ∇ψ × a + ∇(a·∇ψ) + ψa.
    """

    beltrami_constant = 1.0
    helmholtz = True

    def __init__(
        self, l: int = 0, m: int = 0, axis: ArrayLike = (0.0, 0.0, 1.0)
    ) -> None:
        super().__init__(l, m)
        self.axis = np.asarray(axis, dtype=float)
        if not np.any(self.axis):
            raise PreconditionError(
                "CK axis must be nonzero", stage="reference"
            )

    def _jets(self, points: NDArray, order: int) -> list[NDArray]:
        scalar = self.scalar_jets(points, order + 2)
        jets = []
        for n in range(order + 1):
            cross = np.einsum(
                "ijk,p...j,k->pi...", LEVI_CIVITA, scalar[n + 1], self.axis
            )
            hessian = np.einsum("p...ij,j->pi...", scalar[n + 2], self.axis)
            scaled = np.einsum("p...,i->pi...", scalar[n], self.axis)
            jets.append(cross + hessian + scaled)
        return jets


class BeltramiProjection(R3Field):
    """
    The field ½(curl curl w + curl w) of a Helmholtz field w, which is the
    component of w in the curl = +1 eigenspace.
    """

    beltrami_constant = 1.0
    helmholtz = True

    def __init__(self, source: R3Field) -> None:
        self.source = source
        self.max_order = source.max_order - 2

    def _jets(self, points: NDArray, order: int) -> list[NDArray]:
        jets = self.source.jets(points, order + 2)
        single = curl_jets(jets)
        double = curl_jets(single)
        return [0.5 * (double[n] + single[n]) for n in range(order + 1)]


REFERENCE_KINDS = ("abc-type", "chandrasekhar-kendall")


def reference_beltrami(kind: str, **params: Any) -> R3Field:
    """
    A closed-form Beltrami field of R^3 with curl v = v.

    >>> reference_beltrami("abc-type")(np.zeros(3))
    array([1., 1., 1.])

    Arguments:
        kind: "abc-type" or "chandrasekhar-kendall"
        **params: a, b, c for the ABC kind; l, m, axis for the CK kind

    Returns:
        the reference field

    Raises:
        PreconditionError: for an unknown kind or invalid parameters
    """
    try:
        if kind == "abc-type":
            return ABCField(**params)
        if kind == "chandrasekhar-kendall":
            return ChandrasekharKendallField(**params)
    except TypeError as exc:
        raise PreconditionError(
            f"invalid parameters for {kind}: {exc}", stage="reference"
        ) from exc

    raise PreconditionError(
        f"unknown reference kind '{kind}', expected one of {REFERENCE_KINDS}",
        stage="reference",
    )


def beltrami_projection(field: R3Field) -> BeltramiProjection:
    return BeltramiProjection(field)
