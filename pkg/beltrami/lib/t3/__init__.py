"""
Beltrami fields on the flat torus built from lattice plane waves.
"""

from beltrami.lib.t3.lattice import (
    DirectionAssignment,
    LatticeDirectionSet,
    direction_coverage,
    enumerate_sphere_lattice,
    is_square_free,
    select_nearest_directions,
    square_free_eigenvalues,
    square_free_filter,
)
from beltrami.lib.t3.torus_field import (
    RescaledTorusField,
    TorusBeltramiField,
    beltrami_mode,
    build_torus_beltrami,
    eval_torus_field,
    snap_atoms,
    torus_helicity_ratio,
)

__all__ = [
    "DirectionAssignment",
    "LatticeDirectionSet",
    "RescaledTorusField",
    "TorusBeltramiField",
    "beltrami_mode",
    "build_torus_beltrami",
    "direction_coverage",
    "enumerate_sphere_lattice",
    "eval_torus_field",
    "is_square_free",
    "select_nearest_directions",
    "snap_atoms",
    "square_free_eigenvalues",
    "square_free_filter",
    "torus_helicity_ratio",
]
