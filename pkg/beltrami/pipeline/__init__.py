"""
The construction, measurement and dynamics runs behind the command line
verbs.
"""

from beltrami.pipeline.build import BuildResult, build, fit
from beltrami.pipeline.dynamics import section_run, trace_run
from beltrami.pipeline.evaluate import evaluate_grid
from beltrami.pipeline.rates import measure_errors, measure_rates

__all__ = [
    "BuildResult",
    "build",
    "evaluate_grid",
    "fit",
    "measure_errors",
    "measure_rates",
    "section_run",
    "trace_run",
]
