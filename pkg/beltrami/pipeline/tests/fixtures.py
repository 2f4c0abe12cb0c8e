from beltrami.config.pipeline_config import PipelineConfig

# small enough to build in well under a second per degree
SMALL_S3 = {
    "manifold": "s3",
    "degree": [20],
    "reference": {"l_max": 2},
    "fit": {"radius": 4.0, "cells": 8},
}
SMALL_T3 = {
    "manifold": "t3",
    "degree": [3],
    "reference": {"l_max": 2},
    "fit": {"plane_wave_cells": 32},
}


def small_config(manifold: str = "s3", **changes: dict) -> PipelineConfig:
    data = dict(SMALL_S3 if manifold == "s3" else SMALL_T3)
    data.update(changes)
    return PipelineConfig.from_dict(data)
