"""
Grid exporter base classes and registration.
"""

import abc
import importlib
import logging
import tempfile
from pathlib import Path
from typing import Any, Optional

import numpy as np
from numpy.typing import NDArray
from owasp_logger import OWASPLogger

from beltrami.errors.beltrami_errors import DescriptorIOError
from beltrami.loggers.owasp_logger import get_owasp_logger

_owasp_logger = OWASPLogger(appid=__name__, logger=get_owasp_logger())
_logger = logging.getLogger(__name__)

OUTPUT_FORMATS: dict[str, "GridExporterMeta"] = {}


def get_outdir_path(outdir: Optional[str] = None) -> Path:
    """
    The output directory, created if missing.

    Arguments:
        outdir: output directory provided by the user, a fixed directory
            under the system temporary directory if None

    Returns:
        Path: the output directory
    """
    if outdir is not None:
        beltrami_outdir = Path(outdir)
    else:
        beltrami_outdir = Path(tempfile.gettempdir()) / "beltrami-outdir"

    beltrami_outdir.mkdir(parents=True, exist_ok=True)
    return beltrami_outdir


class StructuredGrid:
    """
    A uniform lattice of points with x_1 varying fastest.

    Attributes:
        origin: the lower corner
        spacing: the step per axis
        dimensions: points per axis
    """

    def __init__(
        self, lower: Any, upper: Any, dimensions: int | tuple[int, ...]
    ) -> None:
        self.origin = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)
        if np.ndim(dimensions) == 0:
            dimensions = (int(dimensions),) * 3
        self.dimensions = tuple(int(n) for n in dimensions)
        if min(self.dimensions) < 2 or np.any(upper <= self.origin):
            raise ValueError(
                f"grid needs at least 2 points per axis and upper > lower, "
                f"got {self.dimensions}, {self.origin} to {upper}"
            )
        self.spacing = (upper - self.origin) / (np.array(self.dimensions) - 1)

    def __len__(self) -> int:
        return int(np.prod(self.dimensions))

    @property
    def upper(self) -> NDArray:
        return self.origin + self.spacing * (np.array(self.dimensions) - 1)

    def points(self) -> NDArray:
        """
        All grid points, shape (n_1 n_2 n_3, 3), x_1 fastest.
        """
        axes = [
            self.origin[i] + self.spacing[i] * np.arange(n)
            for i, n in enumerate(self.dimensions)
        ]
        # the last axis returned by meshgrid varies fastest after ravel
        x3, x2, x1 = np.meshgrid(axes[2], axes[1], axes[0], indexing="ij")
        return np.stack([x1.ravel(), x2.ravel(), x3.ravel()], axis=-1)


def provenance_lines(provenance: dict[str, Any]) -> list[str]:
    """
    The provenance header of a text output, one "key: value" per line.
    """
    return [f"{key}: {value}" for key, value in provenance.items()]


class GridExporterMeta(abc.ABCMeta):
    """
    Metaclass for creating grid exporter classes.
    """

    def __new__(
        mcs, name: Any, bases: Any, namespace: Any, **kwargs
    ) -> "GridExporterMeta":
        """
        Create an exporter class and register it in OUTPUT_FORMATS under its
        format name, or its class name if it declares none.

        Arguments:
            name: class name
            bases: parent classes
            namespace: class namespace
            **kwargs: additional keyword arguments

        Returns:
            Exporter class registered in OUTPUT_FORMATS
        """
        exporter_class = super().__new__(mcs, name, bases, namespace, **kwargs)
        OUTPUT_FORMATS[namespace.get("format_name", name)] = exporter_class
        return exporter_class


class GridExporterBase(abc.ABC, metaclass=GridExporterMeta):
    """
    Abstract base class of the writers of vector values sampled on a
    structured grid.
    """

    suffix: str = ""

    @abc.abstractmethod
    def render(
        self,
        grid: StructuredGrid,
        values: NDArray,
        provenance: dict[str, Any],
    ) -> str:
        """
        The file content for the values at the grid points.

        Arguments:
            grid: the grid
            values: vectors at grid.points(), shape (len(grid), 3)
            provenance: version, verb, config and seed of the run

        Returns:
            the text to write
        """

    def export(
        self,
        path: Path,
        grid: StructuredGrid,
        values: NDArray,
        provenance: dict[str, Any],
    ) -> Path:
        """
        Write the values to path with the exporter's suffix.

        Returns:
            the written path

        Raises:
            DescriptorIOError: if the file cannot be written
        """
        path = Path(path).with_suffix(self.suffix)
        values = np.asarray(values, dtype=float).reshape(len(grid), 3)
        try:
            path.write_text(self.render(grid, values, provenance))
        except OSError as exc:
            raise DescriptorIOError(str(path), str(exc)) from exc

        _logger.info(f"Grid of {len(grid)} points exported to {path}")
        return path


def get_exporter(name: str) -> GridExporterBase:
    """
    Instantiate the exporter registered under name.

    Raises:
        ValueError: if no exporter has that name
    """
    try:
        return OUTPUT_FORMATS[name]()
    except KeyError:
        error_msg = f"Unsupported output format: {name}"
        _owasp_logger.sys_crash(error_msg)
        raise ValueError(error_msg)


def import_supported_formats() -> None:
    module_path = Path(__file__).resolve().parent
    for module in Path(module_path).glob("*_exporter.py"):
        importlib.import_module(f"beltrami.output.{module.stem}")

    OUTPUT_FORMATS.pop(GridExporterBase.__name__, None)


import_supported_formats()
