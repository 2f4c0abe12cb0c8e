"""
Provenance records echoed into the header of every output.
"""

import json
from importlib import metadata
from typing import Any

from packaging import version

from beltrami.config.pipeline_config import PipelineConfig

BELTRAMI_VERSION = version.parse(metadata.version("beltrami"))


def provenance(verb: str, config: PipelineConfig) -> dict[str, Any]:
    """
    Package version, verb, resolved configuration as compact JSON, and
    seed.

    >>> sorted(provenance("lattice", PipelineConfig()))
    ['config', 'seed', 'verb', 'version']
    """
    return {
        "version": str(BELTRAMI_VERSION),
        "verb": verb,
        "config": json.dumps(
            config.as_dict(), sort_keys=True, separators=(",", ":")
        ),
        "seed": config.seed,
    }
