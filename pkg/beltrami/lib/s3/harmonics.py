"""
Degree-Λ spherical harmonics on S^3 written as zonal sums
Y(p) = Σ c_n C_Λ(p·q_n), with closed-form Hopf-frame derivatives.

A frame jet of order k has shape (P, m) + (3,) * k and entry
[p, i, a1, ..., ak] = h_a1 ... h_ak Y_i(p), the rightmost field acting
first. With A_j = H_j p·q the derivatives follow from
h_j (M p·q) = M H_j p·q.
"""

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from beltrami.errors.beltrami_errors import (
    PreconditionError,
    UnsupportedDegreeError,
)
from beltrami.lib.r3_fields.atoms import BesselAtomField
from beltrami.lib.s3.chart import NormalChart
from beltrami.lib.s3.hopf import HOPF_MATRICES, as_s3_points
from beltrami.lib.specfun.gegenbauer import (
    MAX_DERIVATIVE_ORDER,
    GegenbauerEvaluator,
)

_logger = logging.getLogger(__name__)

_PAIR_BUDGET = 2_000_000


def _zonal_jets_chunk(
    evaluator: GegenbauerEvaluator,
    points: NDArray,
    centers: NDArray,
    weights: NDArray,
    order: int,
) -> list[NDArray]:
    gegenbauer = evaluator.jets(points @ centers.T, order)
    jets = [np.einsum("pn,nm->pm", gegenbauer[0], weights)]
    if order == 0:
        return jets

    # H_j p, H_k H_j p and H_l H_k H_j p
    once = np.einsum("jab,pb->jpa", HOPF_MATRICES, points)
    a = once @ centers.T
    jets.append(np.einsum("pn,jpn,nm->pmj", gegenbauer[1], a, weights))
    if order == 1:
        return jets

    twice = np.einsum("kab,jpb->jkpa", HOPF_MATRICES, once)
    b = twice @ centers.T
    jets.append(
        np.einsum("pn,jpn,kpn,nm->pmjk", gegenbauer[2], a, a, weights)
        + np.einsum("pn,jkpn,nm->pmjk", gegenbauer[1], b, weights)
    )
    if order == 2:
        return jets

    thrice = np.einsum("lab,jkpb->jklpa", HOPF_MATRICES, twice)
    c = thrice @ centers.T
    mixed = (
        np.einsum("jkpn,lpn->jklpn", b, a)
        + np.einsum("kpn,jlpn->jklpn", a, b)
        + np.einsum("jpn,klpn->jklpn", a, b)
    )
    jets.append(
        np.einsum("pn,jpn,kpn,lpn,nm->pmjkl", gegenbauer[3], a, a, a, weights)
        + np.einsum("pn,jklpn,nm->pmjkl", gegenbauer[2], mixed, weights)
        + np.einsum("pn,jklpn,nm->pmjkl", gegenbauer[1], c, weights)
    )
    return jets


def zonal_jets(
    degree: int,
    points: NDArray,
    centers: NDArray,
    weights: NDArray,
    order: int,
) -> list[NDArray]:
    """
    Frame jets of Σ_n w_n C_Λ(p·q_n) for several weight columns at once.

    Arguments:
        degree: Λ
        points: unit vectors of shape (P, 4)
        centers: unit vectors q_n of shape (N, 4)
        weights: shape (N, m)
        order: highest derivative order, at most 3

    Returns:
        [D_0, ..., D_order] with D_k of shape (P, m) + (3,) * k

    Raises:
        UnsupportedDegreeError: if order exceeds 3
    """
    if not 0 <= order <= MAX_DERIVATIVE_ORDER:
        raise UnsupportedDegreeError(
            f"frame derivatives of order {order} not in "
            f"0..{MAX_DERIVATIVE_ORDER}"
        )

    n_weights = weights.shape[1]
    if len(centers) == 0:
        return [
            np.zeros((len(points), n_weights) + (3,) * k)
            for k in range(order + 1)
        ]

    evaluator = GegenbauerEvaluator(degree)
    step = max(1, _PAIR_BUDGET // (len(centers) * 3**order))
    pieces = [
        _zonal_jets_chunk(
            evaluator, points[start : start + step], centers, weights, order
        )
        for start in range(0, len(points), step)
    ]
    return [
        np.concatenate([piece[k] for piece in pieces])
        for k in range(order + 1)
    ]


@dataclass(frozen=True, eq=False)
class S3HarmonicSum:
    """
    Y(p) = Σ c_n C_Λ(p·p_n), a spherical harmonic of degree Λ with
    ΔY + Λ(Λ+2) Y = 0.

    Attributes:
        degree: Λ
        centers: unit vectors p_n, shape (N, 4)
        weights: real weights c_n, shape (N,)
    """

    degree: int
    centers: NDArray
    weights: NDArray

    def __post_init__(self) -> None:
        if self.degree < 0:
            raise UnsupportedDegreeError(f"negative degree {self.degree}")
        centers = np.asarray(self.centers, dtype=float).reshape(-1, 4)
        if len(centers):
            centers = as_s3_points(centers)
        weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if len(weights) != len(centers):
            raise PreconditionError(
                f"{len(centers)} centers but {len(weights)} weights",
                stage="lift",
            )
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "weights", weights)

    def __len__(self) -> int:
        return len(self.centers)

    def jets(self, p: ArrayLike, order: int = 0) -> list[NDArray]:
        """
        Y and its Hopf-frame derivatives up to `order` (at most 3), with
        shapes (P,) + (3,) * k.
        """
        jets = zonal_jets(
            self.degree,
            as_s3_points(p),
            self.centers,
            self.weights[:, None],
            order,
        )
        return [jet[:, 0] for jet in jets]

    def __call__(self, p: ArrayLike) -> NDArray:
        return self.jets(p, 0)[0]

    def laplacian(self, p: ArrayLike) -> NDArray:
        """
        ΔY = Σ_a h_a h_a Y; the Hopf orbits are geodesics.
        """
        return np.einsum("paa->p", self.jets(p, 2)[2])


def lift_harmonic(
    atoms: BesselAtomField, component: int, degree: int, chart: NormalChart
) -> S3HarmonicSum:
    """
    Y_i(p) = Σ c_n^i C_Λ(p·p_n) with p_n = Ψ^-1(x_n / Λ), so that
    Y_i(Ψ^-1(x / Λ)) approximates the i-th atom component on the unit ball
    with an O(1/Λ) error.

    Arguments:
        atoms: the Bessel atom field
        component: 0, 1 or 2
        degree: Λ, larger than the atom radius R
        chart: the normal chart carrying the atoms

    Returns:
        the lifted harmonic

    Raises:
        PreconditionError: if Λ <= R
    """
    if degree <= atoms.radius:
        raise PreconditionError(
            f"degree {degree} must exceed the atom radius {atoms.radius}",
            stage="lift",
        )

    centers = chart.to_sphere(atoms.centers / degree)
    return S3HarmonicSum(degree, centers, atoms.weights[:, component])


def lift_atoms(
    atoms: BesselAtomField, degree: int, chart: NormalChart
) -> tuple[S3HarmonicSum, S3HarmonicSum, S3HarmonicSum]:
    """
    The three lifted components of an atom field.
    """
    lifted = tuple(
        lift_harmonic(atoms, component, degree, chart)
        for component in range(3)
    )
    _logger.info(f"Lifted {len(atoms)} atoms to degree {degree}")
    return lifted


@dataclass(frozen=True)
class DecayProfile:
    """
    Attributes:
        degrees: the sampled Λ
        maxima: max over θ in [π/4, 3π/4] of |C_Λ(cos θ)|
        slope: least-squares slope of log maxima against log Λ
    """

    degrees: NDArray
    maxima: NDArray
    slope: float


def gegenbauer_decay_profile(
    degrees: ArrayLike, samples: int = 2001
) -> DecayProfile:
    """
    Measure the decay of C_Λ away from ±1, which bounds the interaction of
    harmonics centred at well separated points.
    """
    degrees = np.asarray(degrees, dtype=int)
    t = np.cos(np.linspace(0.25 * np.pi, 0.75 * np.pi, samples))
    maxima = np.array(
        [np.max(np.abs(GegenbauerEvaluator(int(d))(t))) for d in degrees]
    )
    slope = float(np.polyfit(np.log(degrees), np.log(maxima), 1)[0])
    _logger.info(f"Gegenbauer decay slope {slope:.3f}")
    return DecayProfile(degrees, maxima, slope)
