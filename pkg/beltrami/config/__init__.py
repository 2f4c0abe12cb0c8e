"""
Run configuration of the command line front end.
"""

from beltrami.config.pipeline_config import (
    ChartConfig,
    DynamicsConfig,
    FitConfig,
    NormsConfig,
    OutputConfig,
    PipelineConfig,
    ReferenceConfig,
    SectionConfig,
    load_config,
)

__all__ = [
    "ChartConfig",
    "DynamicsConfig",
    "FitConfig",
    "NormsConfig",
    "OutputConfig",
    "PipelineConfig",
    "ReferenceConfig",
    "SectionConfig",
    "load_config",
]
