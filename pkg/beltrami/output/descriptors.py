"""
Field descriptors: the JSON form of every constructed field, keyed by its
"type".
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from beltrami.errors.beltrami_errors import BeltramiError, DescriptorIOError
from beltrami.lib.r3_fields.atoms import BesselAtomField, PlaneWaveAtomField
from beltrami.lib.s3.beltrami_field import (
    HarmonicFrameField,
    S3BeltramiField,
)
from beltrami.lib.t3.torus_field import TorusBeltramiField

_logger = logging.getLogger(__name__)


def _complex(entries: list[dict], key: str) -> np.ndarray:
    return np.array(
        [e[f"{key}_re"] for e in entries], dtype=float
    ) + 1j * np.array([e[f"{key}_im"] for e in entries], dtype=float)


def _s3_beltrami(data: dict) -> S3BeltramiField:
    return S3BeltramiField(
        HarmonicFrameField(
            int(data["Lambda"]), data["centers"] or [], data["weights"] or []
        )
    )


def _t3_beltrami(data: dict) -> TorusBeltramiField:
    modes = data["modes"]
    return TorusBeltramiField(
        int(data["norm_squared"]),
        np.array([mode["k"] for mode in modes], dtype=np.int64).reshape(-1, 3),
        _complex(modes, "c").reshape(-1, 3),
    )


def _bessel_atoms(data: dict) -> BesselAtomField:
    atoms = data["atoms"]
    return BesselAtomField(
        np.array([atom["x"] for atom in atoms]).reshape(-1, 3),
        np.array([atom["c"] for atom in atoms]).reshape(-1, 3),
        float(data["R"]),
    )


def _plane_waves(data: dict) -> PlaneWaveAtomField:
    atoms = data["atoms"]
    return PlaneWaveAtomField(
        np.array([atom["xi"] for atom in atoms]).reshape(-1, 3),
        _complex(atoms, "c").reshape(-1, 3),
    )


DESCRIPTOR_TYPES: dict[str, Callable[[dict], Any]] = {
    "s3_beltrami": _s3_beltrami,
    "t3_beltrami": _t3_beltrami,
    "bessel_atoms": _bessel_atoms,
    "plane_waves": _plane_waves,
}


@dataclass
class Descriptor:
    """
    A field read back from its descriptor file.

    Attributes:
        source: the reconstructed field
        extras: every other top-level entry (chart base points, reports)
        provenance: the provenance record of the run that wrote it
    """

    source: Any
    extras: dict[str, Any] = field(default_factory=dict)
    provenance: dict[str, Any] = field(default_factory=dict)

    @property
    def kind(self) -> str:
        return self.source.descriptor()["type"]


def descriptor_from_dict(data: dict[str, Any]) -> Descriptor:
    """
    Rebuild a field from its descriptor mapping.

    Raises:
        KeyError: for an unknown type or a missing entry
        BeltramiError: if the entries violate the field's preconditions
    """
    kind = data["type"]
    if kind not in DESCRIPTOR_TYPES:
        raise KeyError(
            f"unknown descriptor type '{kind}', expected one of "
            f"{sorted(DESCRIPTOR_TYPES)}"
        )

    built = DESCRIPTOR_TYPES[kind](data)
    own = set(built.descriptor())
    extras = {
        k: v for k, v in data.items() if k not in own and k != "provenance"
    }
    return Descriptor(built, extras, data.get("provenance", {}))


def save_descriptor(
    path: Path,
    source: Any,
    provenance: dict[str, Any],
    **extras: Any,
) -> Path:
    """
    Write the descriptor of a field, its provenance and any extra entries
    as JSON.

    Arguments:
        path: the destination
        source: a field with a descriptor() method
        provenance: the provenance record
        **extras: further JSON-serializable entries

    Returns:
        the written path

    Raises:
        DescriptorIOError: if the file cannot be written
    """
    path = Path(path)
    data = {"provenance": provenance, **source.descriptor(), **extras}
    try:
        path.write_text(json.dumps(data, indent=2))
    except OSError as exc:
        raise DescriptorIOError(str(path), str(exc)) from exc

    _logger.info(f"Descriptor '{data['type']}' saved to {path}")
    return path


def load_descriptor(path: Path | str) -> Descriptor:
    """
    Read a field descriptor file.

    Arguments:
        path: the descriptor JSON

    Returns:
        the descriptor with its rebuilt field

    Raises:
        DescriptorIOError: naming the path, if the file cannot be read,
            is not JSON, or does not describe a field
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise DescriptorIOError(str(path), exc.strerror or str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise DescriptorIOError(str(path), f"invalid JSON: {exc}") from exc

    try:
        descriptor = descriptor_from_dict(data)
    except (KeyError, TypeError, ValueError, BeltramiError) as exc:
        raise DescriptorIOError(
            str(path), f"not a field descriptor: {exc}"
        ) from exc

    _logger.debug(f"Loaded '{descriptor.kind}' descriptor from {path}")
    return descriptor
