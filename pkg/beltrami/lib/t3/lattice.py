"""
Integer points on spheres |k|^2 = n and the unit directions k / √n they
define, which are the admissible plane-wave directions of a Beltrami field
of eigenvalue √n on the torus (R / 2πZ)^3.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from numpy.typing import ArrayLike, NDArray
from sympy import factorint

from beltrami.errors.beltrami_errors import LatticeError
from beltrami.lib.parallel import chunked_map
from beltrami.lib.r3_fields.quadrature import equal_area_partition

_logger = logging.getLogger(__name__)

MAX_LATTICE_DEGREE = 2000
DEFAULT_COVERAGE_PROBES = 512
_TARGET_CHUNK = 4096


def resolve_norm_squared(
    degree: int | None = None, norm_squared: int | None = None
) -> int:
    """
    The integer n = |k|^2 from either Λ (n = Λ^2) or n itself.

    Raises:
        LatticeError: if neither or both are given, n < 1, or Λ is above
            MAX_LATTICE_DEGREE
    """
    if (degree is None) == (norm_squared is None):
        raise LatticeError("give exactly one of degree and norm_squared")

    if degree is not None:
        if int(degree) != degree or degree < 1:
            raise LatticeError(f"degree {degree} is not a positive integer")
        norm_squared = int(degree) ** 2

    if int(norm_squared) != norm_squared or norm_squared < 1:
        raise LatticeError(f"|k|^2 = {norm_squared} is not a positive integer")
    if norm_squared > MAX_LATTICE_DEGREE**2:
        raise LatticeError(
            f"|k|^2 = {norm_squared} beyond the enumeration cap "
            f"{MAX_LATTICE_DEGREE}^2"
        )
    return int(norm_squared)


@dataclass(frozen=True, eq=False)
class LatticeDirectionSet:
    """
    All k ∈ Z^3 with |k|^2 = n, sorted lexicographically.

    Attributes:
        norm_squared: n
        points: integer vectors, shape (K, 3)
    """

    norm_squared: int
    points: NDArray

    def __len__(self) -> int:
        return len(self.points)

    @property
    def degree(self) -> float:
        """
        λ = √n, an integer when n is a perfect square.
        """
        root = math.isqrt(self.norm_squared)
        if root * root == self.norm_squared:
            return root
        return math.sqrt(self.norm_squared)

    @property
    def directions(self) -> NDArray:
        return self.points / math.sqrt(self.norm_squared)

    def as_dict(self) -> dict:
        return {
            "norm_squared": self.norm_squared,
            "Lambda": self.degree,
            "count": len(self),
            "points": self.points.tolist(),
        }


def _slice_points(norm_squared: int, first: int) -> NDArray:
    """
    The lattice points with k_1 = first.
    """
    rest = norm_squared - first * first
    bound = math.isqrt(rest)
    second = np.arange(-bound, bound + 1, dtype=np.int64)
    remainder = rest - second * second
    third = np.floor(np.sqrt(remainder)).astype(np.int64)
    # correct the float square root to the exact integer one
    third += (third + 1) * (third + 1) <= remainder
    third -= third * third > remainder
    exact = third * third == remainder

    rows = []
    for k2, k3 in zip(second[exact], third[exact]):
        for signed in sorted({-int(k3), int(k3)}):
            rows.append((first, int(k2), signed))
    return np.array(rows, dtype=np.int64).reshape(-1, 3)


def enumerate_sphere_lattice(
    degree: int | None = None,
    norm_squared: int | None = None,
    threads: int = 1,
) -> LatticeDirectionSet:
    """
    Every k ∈ Z^3 with |k|^2 = n by scanning k_1 and k_2 and solving for k_3
    in integer arithmetic.

    >>> len(enumerate_sphere_lattice(3))
    30

    Arguments:
        degree: Λ, giving n = Λ^2
        norm_squared: n directly, for eigenvalues √n
        threads: worker threads over k_1 slices

    Returns:
        the lattice point set

    Raises:
        LatticeError: for invalid or too large arguments
    """
    norm_squared = resolve_norm_squared(degree, norm_squared)
    bound = math.isqrt(norm_squared)
    firsts = np.arange(-bound, bound + 1, dtype=np.int64)

    def scan(chunk: NDArray) -> NDArray:
        return np.concatenate(
            [np.zeros((0, 3), dtype=np.int64)]
            + [_slice_points(norm_squared, int(first)) for first in chunk]
        )

    # one scan result per k_1 chunk, merged in submission order
    points = chunked_map(scan, firsts, threads, chunk_size=64)
    _logger.debug(f"{len(points)} lattice points with |k|^2 = {norm_squared}")
    return LatticeDirectionSet(norm_squared, points)


@dataclass(frozen=True)
class DirectionAssignment:
    """
    The lattice direction nearest to each target direction.

    Attributes:
        indices: index into the lattice per target
        points: the chosen integer vectors, shape (M, 3)
        directions: the chosen unit directions, shape (M, 3)
        displacements: angular distance target to choice, shape (M,)
    """

    indices: NDArray
    points: NDArray
    directions: NDArray
    displacements: NDArray

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def max_displacement(self) -> float:
        if len(self.displacements) == 0:
            return 0.0
        return float(np.max(self.displacements))


def angular_distance(a: NDArray, b: NDArray) -> NDArray:
    cross = np.linalg.norm(np.cross(a, b), axis=-1)
    return np.arctan2(cross, np.sum(a * b, axis=-1))


def select_nearest_directions(
    targets: ArrayLike, lattice: LatticeDirectionSet
) -> DirectionAssignment:
    """
    For each target ξ* the lattice direction of least angular distance.

    Arguments:
        targets: directions, shape (M, 3); normalized before use
        lattice: a nonempty lattice set

    Returns:
        the assignment, empty for an empty target list

    Raises:
        LatticeError: if the lattice is empty
    """
    if len(lattice) == 0:
        raise LatticeError(
            f"no lattice points with |k|^2 = {lattice.norm_squared}"
        )

    targets = np.asarray(targets, dtype=float).reshape(-1, 3)
    if len(targets):
        targets = targets / np.linalg.norm(targets, axis=-1, keepdims=True)
    directions = lattice.directions

    def nearest(chunk: NDArray) -> NDArray:
        return np.argmax(chunk @ directions.T, axis=-1)

    indices = chunked_map(nearest, targets, chunk_size=_TARGET_CHUNK)
    indices = np.asarray(indices, dtype=np.int64).reshape(-1)
    chosen = directions[indices]
    displacements = angular_distance(targets, chosen)
    assignment = DirectionAssignment(
        indices, lattice.points[indices], chosen, displacements
    )
    _logger.info(
        f"Snapped {len(assignment)} directions to |k|^2 = "
        f"{lattice.norm_squared}, max displacement "
        f"{assignment.max_displacement:.3e} rad"
    )
    return assignment


def direction_coverage(
    lattice: LatticeDirectionSet, probes: int = DEFAULT_COVERAGE_PROBES
) -> float:
    """
    Covering radius of the lattice directions, measured as the largest
    angular distance from the centres of an equal-area partition of S^2 to
    their nearest lattice direction.
    """
    centres = equal_area_partition(probes).centres
    return select_nearest_directions(centres, lattice).max_displacement


def is_square_free(n: int) -> bool:
    """
    >>> [is_square_free(n) for n in (1, 6, 12)]
    [True, True, False]
    """
    if n < 1:
        raise LatticeError(f"square-freeness of {n} is undefined")
    return all(power == 1 for power in factorint(n).values())


def square_free_filter(degrees: Iterable[int]) -> list[int]:
    """
    The Λ whose square Λ^2 is square-free. Only Λ = 1 qualifies; the filter
    exists to tag eigenvalues in sweeps.
    """
    return [degree for degree in degrees if is_square_free(degree * degree)]


def square_free_eigenvalues(n_max: int) -> list[int]:
    """
    The square-free n <= n_max that are sums of three squares, i.e. not of
    the form 4^a (8b + 7); their eigenvalues √n carry equidistributed
    lattice directions.

    >>> square_free_eigenvalues(10)
    [1, 2, 3, 5, 6, 10]
    """
    return [
        n
        for n in range(1, n_max + 1)
        if is_square_free(n) and n % 8 != 7
    ]
