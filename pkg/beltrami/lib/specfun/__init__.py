"""
Scalar special functions: spherical Bessel functions, dimension-4
ultraspherical polynomials and radial Helmholtz kernels.
"""

from beltrami.lib.specfun.bessel import (
    MAX_BESSEL_DEGREE,
    spherical_bessel,
    spherical_bessel_table,
)
from beltrami.lib.specfun.gegenbauer import (
    GegenbauerEvaluator,
    chebyshev_closed_form,
    darboux_residual,
    gegenbauer4,
)
from beltrami.lib.specfun.radial import (
    radial_derivative_tensor,
    radial_kernel,
    radial_kernels,
    symmetric_tensor,
)

__all__ = [
    "MAX_BESSEL_DEGREE",
    "GegenbauerEvaluator",
    "chebyshev_closed_form",
    "darboux_residual",
    "gegenbauer4",
    "radial_derivative_tensor",
    "radial_kernel",
    "radial_kernels",
    "spherical_bessel",
    "spherical_bessel_table",
    "symmetric_tensor",
]
