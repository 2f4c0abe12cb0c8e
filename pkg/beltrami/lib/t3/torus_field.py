"""
Beltrami fields on the flat torus (R / 2πZ)^3 as finite sums of Fourier
modes ĉ e^{i k·x} with |k| = λ and i k × ĉ = λ ĉ.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray

from beltrami import TORUS_PERIOD
from beltrami.errors.beltrami_errors import (
    InvariantViolation,
    PreconditionError,
    ZeroFieldError,
)
from beltrami.lib.r3_fields.atoms import MAX_EVAL_ORDER, PlaneWaveAtomField
from beltrami.lib.r3_fields.fields import R3Field, divergence
from beltrami.lib.t3.lattice import (
    DirectionAssignment,
    LatticeDirectionSet,
    resolve_norm_squared,
    select_nearest_directions,
)

_logger = logging.getLogger(__name__)

MODE_TOLERANCE = 1e-13
SNAP_TOLERANCE = 1e-9


def beltrami_mode(wavevector: ArrayLike, amplitude: ArrayLike) -> NDArray:
    """
    ĉ = (-k × (k × c) + i λ k × c) / (2λ^2), the projection of
    c e^{i k·x} onto the curl = λ eigenspace with λ = |k|.
    """
    k = np.asarray(wavevector, dtype=float)
    c = np.asarray(amplitude, dtype=complex)
    norm_squared = np.sum(k * k, axis=-1, keepdims=True)
    twist = np.cross(k, c)
    return (-np.cross(k, twist) + 1j * np.sqrt(norm_squared) * twist) / (
        2.0 * norm_squared
    )


def _is_canonical(wavevectors: NDArray) -> NDArray:
    """
    Whether the first nonzero coordinate is positive, which picks one of
    each pair ±k.
    """
    first = np.argmax(wavevectors != 0, axis=-1)
    return np.take_along_axis(wavevectors, first[:, None], axis=-1)[:, 0] > 0


@dataclass(frozen=True, eq=False)
class TorusBeltramiField(R3Field):
    """
    u(x) = Σ ĉ_k e^{i k·x} over explicit conjugate pairs (k, ĉ) and
    (-k, conj ĉ), so that u is real.

    Attributes:
        norm_squared: n = |k|^2 shared by every mode
        wavevectors: integer vectors, shape (K, 3)
        amplitudes: complex amplitudes, shape (K, 3)
    """

    norm_squared: int
    wavevectors: NDArray
    amplitudes: NDArray

    max_order = MAX_EVAL_ORDER
    helmholtz = True

    def __post_init__(self) -> None:
        wavevectors = np.asarray(self.wavevectors, dtype=np.int64)
        wavevectors = wavevectors.reshape(-1, 3)
        amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1, 3)
        if len(wavevectors) != len(amplitudes):
            raise PreconditionError(
                f"{len(wavevectors)} wavevectors but {len(amplitudes)} "
                "amplitudes",
                stage="project",
            )
        if np.any(np.sum(wavevectors**2, axis=-1) != self.norm_squared):
            raise PreconditionError(
                f"every wavevector must satisfy |k|^2 = {self.norm_squared}",
                stage="project",
            )
        object.__setattr__(self, "wavevectors", wavevectors)
        object.__setattr__(self, "amplitudes", amplitudes)

    def __len__(self) -> int:
        return len(self.wavevectors)

    @property
    def degree(self) -> float:
        root = math.isqrt(self.norm_squared)
        if root * root == self.norm_squared:
            return root
        return math.sqrt(self.norm_squared)

    @property
    def eigenvalue(self) -> float:
        return math.sqrt(self.norm_squared)

    @property
    def beltrami_constant(self) -> float:
        return self.eigenvalue

    def _jets(self, points: NDArray, order: int) -> list[NDArray]:
        if len(self) == 0:
            return [
                np.zeros((len(points), 3) + (3,) * n) for n in range(order + 1)
            ]

        k = self.wavevectors.astype(float)
        phases = np.exp(1j * np.mod(points, TORUS_PERIOD) @ k.T)
        jets = []
        power = np.ones((len(self), 1), dtype=complex)
        for n in range(order + 1):
            shaped = power.reshape((len(self),) + (3,) * n)
            jets.append(
                np.einsum(
                    "pn,ni,n...->pi...", phases, self.amplitudes, shaped
                ).real
            )
            power = (power[:, :, None] * (1j * k)[:, None, :]).reshape(
                len(self), -1
            )
        return jets

    def mode_residuals(self) -> dict[str, float]:
        """
        Largest per-mode defects, relative to λ max |ĉ|: the eigen relation
        |i k × ĉ - λ ĉ|, transversality |k·ĉ| and conjugate symmetry.
        """
        if len(self) == 0:
            return {"eigen": 0.0, "transversality": 0.0, "conjugate": 0.0}

        k = self.wavevectors.astype(float)
        scale = self.eigenvalue * np.max(np.abs(self.amplitudes))
        scale = scale if scale > 0 else 1.0
        eigen = 1j * np.cross(k, self.amplitudes) - self.eigenvalue * (
            self.amplitudes
        )
        transversality = np.einsum("ki,ki->k", k, self.amplitudes)
        return {
            "eigen": float(np.max(np.abs(eigen)) / scale),
            "transversality": float(np.max(np.abs(transversality)) / scale),
            "conjugate": self._conjugate_defect() / scale,
        }

    def _conjugate_defect(self) -> float:
        lookup = {
            tuple(k): amplitude
            for k, amplitude in zip(self.wavevectors.tolist(), self.amplitudes)
        }
        worst = 0.0
        for k, amplitude in lookup.items():
            partner = lookup.get(tuple(-v for v in k))
            if partner is None:
                return math.inf
            gap = np.max(np.abs(partner - np.conj(amplitude)))
            worst = max(worst, float(gap))
        return worst

    def check_invariants(self, tolerance: float = MODE_TOLERANCE) -> None:
        """
        Raises:
            InvariantViolation: if a per-mode defect exceeds tolerance
        """
        for name, defect in self.mode_residuals().items():
            if defect > tolerance:
                raise InvariantViolation(
                    f"torus field {name} defect {defect:.3e} above "
                    f"{tolerance:.0e}"
                )

    def helicity_ratio(self) -> float:
        """
        ∫ u·curl u / ∫ |u|^2 by Parseval; equals λ for a Beltrami field.

        Raises:
            ZeroFieldError: for the zero field
        """
        energy = float(np.sum(np.abs(self.amplitudes) ** 2))
        if energy == 0.0:
            raise ZeroFieldError("helicity ratio of the zero field")

        k = self.wavevectors.astype(float)
        vorticity = 1j * np.cross(k, self.amplitudes)
        helicity = float(np.sum(np.conj(self.amplitudes) * vorticity).real)
        return helicity / energy

    def scaled(self, factor: float) -> "TorusBeltramiField":
        return TorusBeltramiField(
            self.norm_squared, self.wavevectors, factor * self.amplitudes
        )

    def rescaled(self) -> "RescaledTorusField":
        return RescaledTorusField(self)

    def divergence_residual(self, x: ArrayLike) -> float:
        """
        max |div u| over the given points, from analytic derivatives.
        """
        return float(np.max(np.abs(divergence(self.jets(x, 1)))))

    def descriptor(self) -> dict[str, Any]:
        return {
            "type": "t3_beltrami",
            "Lambda": self.degree,
            "norm_squared": self.norm_squared,
            "modes": [
                {
                    "k": k.tolist(),
                    "c_re": amplitude.real.tolist(),
                    "c_im": amplitude.imag.tolist(),
                }
                for k, amplitude in zip(self.wavevectors, self.amplitudes)
            ],
        }


class RescaledTorusField(R3Field):
    """
    x ↦ u(x / λ), the torus field seen at the wavelength scale.
    """

    def __init__(self, field: TorusBeltramiField) -> None:
        self.field = field
        self.max_order = field.max_order

    def _jets(self, points: NDArray, order: int) -> list[NDArray]:
        scale = 1.0 / self.field.eigenvalue
        jets = self.field.jets(points * scale, order)
        return [jet * scale**n for n, jet in enumerate(jets)]


def snap_atoms(
    atoms: PlaneWaveAtomField, lattice: LatticeDirectionSet
) -> tuple[PlaneWaveAtomField, DirectionAssignment]:
    """
    Move every plane-wave direction to its nearest lattice direction.

    Returns:
        the snapped field and the assignment with its displacements
    """
    assignment = select_nearest_directions(atoms.directions, lattice)
    snapped = PlaneWaveAtomField(
        assignment.directions, atoms.weights, atoms.report
    )
    return snapped, assignment


def _lattice_wavevectors(
    directions: NDArray, norm_squared: int
) -> NDArray:
    scaled = directions * math.sqrt(norm_squared)
    wavevectors = np.rint(scaled)
    offsets = np.max(np.abs(scaled - wavevectors), axis=-1)
    wavevectors = wavevectors.astype(np.int64)
    on_sphere = np.sum(wavevectors**2, axis=-1) == norm_squared
    bad = np.flatnonzero((offsets > SNAP_TOLERANCE) | ~on_sphere)
    if len(bad):
        raise PreconditionError(
            f"atom {int(bad[0])} direction {directions[bad[0]].tolist()} is "
            f"not on the lattice |k|^2 = {norm_squared}",
            stage="snap",
        )
    return wavevectors


def build_torus_beltrami(
    atoms: PlaneWaveAtomField,
    degree: int | None = None,
    norm_squared: int | None = None,
) -> TorusBeltramiField:
    """
    u = (curl curl ũ + λ curl ũ) / (2λ^2) for
    ũ(x) = Re Σ c_n e^{iλ ξ_n·x}, computed mode by mode.

    Arguments:
        atoms: plane waves whose directions satisfy λ ξ_n ∈ Z^3
        degree: Λ = λ, giving |k|^2 = Λ^2
        norm_squared: |k|^2 directly, for λ = √n

    Returns:
        the real torus field, with coinciding modes merged

    Raises:
        PreconditionError: naming the first atom off the lattice
        InvariantViolation: if a per-mode identity fails
    """
    norm_squared = resolve_norm_squared(degree, norm_squared)
    if len(atoms) == 0:
        return TorusBeltramiField(
            norm_squared, np.zeros((0, 3)), np.zeros((0, 3))
        )

    wavevectors = _lattice_wavevectors(atoms.directions, norm_squared)
    modes = beltrami_mode(wavevectors, atoms.weights)

    # Re w puts half of each mode at k and its conjugate at -k; collect
    # both on the canonical member of the pair
    canonical = _is_canonical(wavevectors)
    keys = np.where(canonical[:, None], wavevectors, -wavevectors)
    halves = 0.5 * np.where(canonical[:, None], modes, np.conj(modes))
    unique, inverse = np.unique(keys, axis=0, return_inverse=True)
    merged = np.zeros((len(unique), 3), dtype=complex)
    np.add.at(merged, inverse.reshape(-1), halves)

    field = TorusBeltramiField(
        norm_squared,
        np.concatenate([unique, -unique]),
        np.concatenate([merged, np.conj(merged)]),
    )
    field.check_invariants()
    _logger.info(
        f"Torus Beltrami field with {len(field)} modes at |k|^2 = "
        f"{norm_squared}"
    )
    return field


def eval_torus_field(
    field: TorusBeltramiField, x: ArrayLike, order: int = 0
) -> NDArray:
    """
    The order-th partials of u at x, wrapped into the period cell.
    """
    return field.derivative(x, order)


def torus_helicity_ratio(field: TorusBeltramiField) -> float:
    return field.helicity_ratio()
