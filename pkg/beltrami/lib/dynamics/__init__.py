"""
Field-line tracing, Poincaré sections, error norms and helicity of the
constructed fields.
"""

from beltrami.lib.dynamics.helicity import (
    divergence_residual,
    helicity_ratio,
    s3_helicity_ratio,
)
from beltrami.lib.dynamics.integrator import DormandPrince54, IntegratorStats
from beltrami.lib.dynamics.norms import (
    ErrorReport,
    RateTable,
    rate_table,
    sup_error_norm,
)
from beltrami.lib.dynamics.persistence import (
    PersistenceReport,
    persistence_witness,
)
from beltrami.lib.dynamics.section import (
    ClosedOrbit,
    PoincareSection,
    SectionPlane,
    detect_closed_orbits,
    poincare_section,
    refine_elliptic_seed,
)
from beltrami.lib.dynamics.trajectory import (
    Trajectory,
    trace_field_line,
    trace_field_lines,
)

__all__ = [
    "ClosedOrbit",
    "DormandPrince54",
    "ErrorReport",
    "IntegratorStats",
    "PersistenceReport",
    "PoincareSection",
    "RateTable",
    "SectionPlane",
    "Trajectory",
    "detect_closed_orbits",
    "divergence_residual",
    "helicity_ratio",
    "persistence_witness",
    "poincare_section",
    "rate_table",
    "refine_elliptic_seed",
    "s3_helicity_ratio",
    "sup_error_norm",
    "trace_field_line",
    "trace_field_lines",
]
