"""
Beltrami and Helmholtz fields of R^3 and their approximation by
Fourier-Bessel series, Herglotz densities and atom sums.
"""

from beltrami.lib.r3_fields.atoms import (
    AtomFitReport,
    BesselAtomField,
    PlaneWaveAtomField,
    eval_with_derivatives,
    fit_bessel_atoms,
    fit_planewave_atoms,
    smooth_cutoff,
)
from beltrami.lib.r3_fields.fields import (
    LEVI_CIVITA,
    REFERENCE_KINDS,
    ABCField,
    BeltramiProjection,
    ChandrasekharKendallField,
    HelmholtzMode,
    R3Field,
    beltrami_projection,
    curl_jets,
    divergence,
    laplacian,
    reference_beltrami,
)
from beltrami.lib.r3_fields.fourier_bessel import (
    FourierBesselSeries,
    fourier_bessel_expand,
    l2_residual,
)
from beltrami.lib.r3_fields.herglotz import HerglotzDensity, herglotz_density
from beltrami.lib.r3_fields.quadrature import (
    EqualAreaPartition,
    SphereQuadrature,
    ball_grid,
    equal_area_partition,
)

__all__ = [
    "LEVI_CIVITA",
    "REFERENCE_KINDS",
    "ABCField",
    "AtomFitReport",
    "BeltramiProjection",
    "BesselAtomField",
    "ChandrasekharKendallField",
    "EqualAreaPartition",
    "FourierBesselSeries",
    "HelmholtzMode",
    "HerglotzDensity",
    "PlaneWaveAtomField",
    "R3Field",
    "SphereQuadrature",
    "ball_grid",
    "beltrami_projection",
    "curl_jets",
    "divergence",
    "equal_area_partition",
    "eval_with_derivatives",
    "fit_bessel_atoms",
    "fit_planewave_atoms",
    "fourier_bessel_expand",
    "herglotz_density",
    "l2_residual",
    "laplacian",
    "reference_beltrami",
    "smooth_cutoff",
]
