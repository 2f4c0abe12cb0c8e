import numpy as np

from beltrami.lib.r3_fields.atoms import BesselAtomField
from beltrami.lib.s3.beltrami_field import S3BeltramiField, assemble_beltrami
from beltrami.lib.s3.chart import exp_chart
from beltrami.lib.s3.harmonics import lift_atoms


def random_sphere_points(n: int, seed: int = 0) -> np.ndarray:
    points = np.random.default_rng(seed).normal(size=(n, 4))
    return points / np.linalg.norm(points, axis=-1, keepdims=True)


def random_ball(n: int, radius: float, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    directions = rng.normal(size=(n, 3))
    directions /= np.linalg.norm(directions, axis=-1, keepdims=True)
    return directions * radius * rng.uniform(0, 1, (n, 1)) ** (1 / 3)


def random_atoms(
    n: int, seed: int = 0, radius: float = 4.0
) -> BesselAtomField:
    rng = np.random.default_rng(seed)
    return BesselAtomField(
        random_ball(n, 0.75 * radius, seed), rng.normal(size=(n, 3)), radius
    )


def lifted_field(
    degree: int, n_atoms: int = 5, seed: int = 0
) -> S3BeltramiField:
    harmonics = lift_atoms(random_atoms(n_atoms, seed), degree, exp_chart())
    return assemble_beltrami(*harmonics, degree)


def sample_points(degree: int, n: int, seed: int = 0) -> np.ndarray:
    """
    Half of the points near the base point, where the lifted field lives,
    and half anywhere on S^3.
    """
    near = exp_chart().to_sphere(random_ball(n // 2, 3.0, seed) / degree)
    return np.concatenate([near, random_sphere_points(n - n // 2, seed + 1)])
