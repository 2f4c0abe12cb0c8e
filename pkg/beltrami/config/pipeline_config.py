"""
Run configuration: one JSON file parsed into frozen dataclasses and
validated before any computation.
"""

import dataclasses
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, TypeVar

from beltrami import DEFAULT_BASE_POINT, TORUS_PERIOD
from beltrami.errors.beltrami_errors import ConfigError, DescriptorIOError

_logger = logging.getLogger(__name__)

MANIFOLDS = ("s3", "t3")
OUTPUT_KINDS = ("csv", "vtk")

_Section = TypeVar("_Section")


def _vector(length: int) -> Any:
    def convert(value: Any) -> tuple[float, ...]:
        vector = tuple(float(v) for v in value)
        if len(vector) != length:
            raise ValueError(f"expected {length} components")
        return vector

    return convert


def _vectors(length: int) -> Any:
    def convert(value: Any) -> tuple[tuple[float, ...], ...]:
        return tuple(_vector(length)(v) for v in value)

    return convert


def _optional(convert: Any) -> Any:
    def optional(value: Any) -> Any:
        return None if value is None else convert(value)

    return optional


def _free_vectors(value: Any) -> tuple[tuple[float, ...], ...]:
    return tuple(tuple(float(v) for v in point) for point in value)


def _degrees(value: Any) -> tuple[int, ...]:
    values = value if isinstance(value, (list, tuple)) else [value]
    degrees = []
    for v in values:
        if isinstance(v, bool) or int(v) != v:
            raise ValueError(f"{v} is not an integer")
        degrees.append(int(v))
    return tuple(degrees)


def _strings(value: Any) -> tuple[str, ...]:
    if isinstance(value, str):
        return (value,)
    return tuple(str(v) for v in value)


def _convert_with(convert: Any) -> dict[str, Any]:
    return {"convert": convert}


@dataclass(frozen=True)
class ReferenceConfig:
    """
    The closed-form Beltrami field of R^3 to approximate.

    Attributes:
        kind: "chandrasekhar-kendall" or "abc-type"
        params: keyword arguments of the reference (l, m, axis or a, b, c)
        l_max: cutoff degree of the Fourier-Bessel expansion
    """

    kind: str = "chandrasekhar-kendall"
    params: dict = field(default_factory=dict)
    l_max: int = 4


@dataclass(frozen=True)
class FitConfig:
    """
    Atom fit parameters.

    Attributes:
        radius: radius R of the Bessel atom ball
        cells: cubic cells per axis of the Bessel atom ball
        tolerance: largest acceptable sup-error over S^2, unchecked if None
        refine: run the least-squares weight refinement
        prune: relative weight threshold below which atoms are dropped
        plane_wave_cells: equal-area sphere regions of a plane-wave fit
    """

    radius: float = 6.0
    cells: int = 32
    tolerance: Optional[float] = field(
        default=None, metadata=_convert_with(_optional(float))
    )
    refine: bool = False
    prune: float = 0.0
    plane_wave_cells: int = 256


@dataclass(frozen=True)
class ChartConfig:
    """
    Base points of the normal charts on S^3; several points give a
    multi-center field.
    """

    base_points: tuple[tuple[float, ...], ...] = field(
        default=(DEFAULT_BASE_POINT,), metadata=_convert_with(_vectors(4))
    )


@dataclass(frozen=True)
class DynamicsConfig:
    """
    Field-line tracing parameters.

    Attributes:
        seeds: start points, on S^3 (4 components) or the torus (3)
        duration: integration time T
        tol: local error tolerance in [1e-12, 1e-3]
        max_step: step size cap, uncapped if None
    """

    seeds: tuple[tuple[float, ...], ...] = field(
        default=(), metadata=_convert_with(_free_vectors)
    )
    duration: float = 10.0
    tol: float = 1e-9
    max_step: Optional[float] = field(
        default=None, metadata=_convert_with(_optional(float))
    )


@dataclass(frozen=True)
class SectionConfig:
    """
    Poincaré section parameters.

    Attributes:
        point: a point of the section, the first seed if None
        normal: the section normal, the field direction at point if None
        n_returns: crossings recorded per seed
        max_time: integration time limit per seed
        region_radius: section-coordinate radius beyond which an orbit has
            escaped, unbounded if None
        min_transversality: smallest accepted |n·u|/|u| at a crossing
        closed_threshold: return spread below which an orbit is closed
        annulus_radius: ring radius of the persistence witness, no witness
            if None
    """

    point: Optional[tuple[float, ...]] = field(
        default=None,
        metadata=_convert_with(_optional(lambda v: tuple(map(float, v)))),
    )
    normal: Optional[tuple[float, ...]] = field(
        default=None,
        metadata=_convert_with(_optional(lambda v: tuple(map(float, v)))),
    )
    n_returns: int = 100
    max_time: float = 1000.0
    region_radius: Optional[float] = field(
        default=None, metadata=_convert_with(_optional(float))
    )
    min_transversality: float = 1e-3
    closed_threshold: float = 1e-6
    annulus_radius: Optional[float] = field(
        default=None, metadata=_convert_with(_optional(float))
    )


@dataclass(frozen=True)
class NormsConfig:
    """
    Error norm and helicity parameters.

    Attributes:
        order: largest derivative order m of the C^m norm
        grid_n: lattice points per axis of the error grid
        radius: radius of the error ball
        center: centre of the error ball
        allow_fd: fall back to finite differences for missing partials
        quadrature_n: Monte Carlo nodes of the S^3 helicity ratio
    """

    order: int = 0
    grid_n: int = 33
    radius: float = 1.0
    center: tuple[float, ...] = field(
        default=(0.0, 0.0, 0.0), metadata=_convert_with(_vector(3))
    )
    allow_fd: bool = True
    quadrature_n: int = 1_000_000


@dataclass(frozen=True)
class OutputConfig:
    """
    Output locations and the evaluation grid.

    Attributes:
        outdir: output directory, <tmp>/beltrami-outdir if None
        formats: grid exporters by name
        grid_n: grid points per axis
        lower: lower grid corner, (0, 0, 0) on the torus and (-1, -1, -1)
            elsewhere if None
        upper: upper grid corner, (2π, 2π, 2π) on the torus and (1, 1, 1)
            elsewhere if None
    """

    outdir: Optional[str] = field(
        default=None, metadata=_convert_with(_optional(str))
    )
    formats: tuple[str, ...] = field(
        default=("csv",), metadata=_convert_with(_strings)
    )
    grid_n: int = 16
    lower: Optional[tuple[float, ...]] = field(
        default=None, metadata=_convert_with(_optional(_vector(3)))
    )
    upper: Optional[tuple[float, ...]] = field(
        default=None, metadata=_convert_with(_optional(_vector(3)))
    )

    def grid_bounds(self, manifold: str) -> tuple[tuple[float, ...], ...]:
        if manifold == "t3":
            lower, upper = (0.0,) * 3, (TORUS_PERIOD,) * 3
        else:
            lower, upper = (-1.0,) * 3, (1.0,) * 3
        return self.lower or lower, self.upper or upper


@dataclass(frozen=True)
class PipelineConfig:
    """
    Everything one run needs.

    Attributes:
        manifold: "s3" or "t3"
        degree: Λ, or the list of Λ of a rate sweep
        norm_squared: |k|^2 of the torus lattice, overriding Λ^2 if set
        seed: RNG seed of Monte Carlo nodes and seed placement
        threads: worker threads; 1 is bit-reproducible
    """

    manifold: str = "s3"
    degree: tuple[int, ...] = field(
        default=(101,), metadata=_convert_with(_degrees)
    )
    norm_squared: Optional[int] = field(
        default=None, metadata=_convert_with(_optional(int))
    )
    seed: int = 0
    threads: int = 1
    reference: ReferenceConfig = field(default_factory=ReferenceConfig)
    fit: FitConfig = field(default_factory=FitConfig)
    chart: ChartConfig = field(default_factory=ChartConfig)
    dynamics: DynamicsConfig = field(default_factory=DynamicsConfig)
    section: SectionConfig = field(default_factory=SectionConfig)
    norms: NormsConfig = field(default_factory=NormsConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def __post_init__(self) -> None:
        checks = [
            (
                self.manifold in MANIFOLDS,
                f"manifold '{self.manifold}' not in {MANIFOLDS}",
            ),
            (
                len(self.degree) > 0 and min(self.degree) >= 1,
                f"degree {list(self.degree)} must be positive integers",
            ),
            (self.threads >= 1, f"threads {self.threads} must be >= 1"),
            (
                self.norm_squared is None or self.norm_squared >= 1,
                f"norm_squared {self.norm_squared} must be >= 1",
            ),
            (
                self.output.grid_n >= 2,
                f"output.grid_n {self.output.grid_n} must be >= 2",
            ),
            (
                set(self.output.formats) <= set(OUTPUT_KINDS),
                f"output.formats {list(self.output.formats)} not within "
                f"{OUTPUT_KINDS}",
            ),
            (
                self.dynamics.duration >= 0
                and math.isfinite(self.dynamics.duration),
                f"dynamics.duration {self.dynamics.duration} must be finite "
                "and >= 0",
            ),
            (
                self.section.n_returns >= 0,
                f"section.n_returns {self.section.n_returns} must be >= 0",
            ),
        ]
        failed = [message for ok, message in checks if not ok]
        if failed:
            raise ConfigError("; ".join(failed))

    @property
    def primary_degree(self) -> int:
        """
        The first Λ of the run.
        """
        return self.degree[0]

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "PipelineConfig":
        """
        Build a validated configuration from parsed JSON.

        Arguments:
            data: the mapping; missing keys take their documented defaults

        Returns:
            the configuration

        Raises:
            ConfigError: for unknown keys, unconvertible values or failed
                range checks
        """
        return _section_from_dict(cls, data, "")

    def as_dict(self) -> dict[str, Any]:
        return json.loads(json.dumps(dataclasses.asdict(self)))

    def with_overrides(self, **overrides: Any) -> "PipelineConfig":
        """
        A copy with the given top-level fields replaced; None values are
        ignored.
        """
        changes = {k: v for k, v in overrides.items() if v is not None}
        return dataclasses.replace(self, **changes) if changes else self


def _section_from_dict(
    cls: type[_Section], data: Any, prefix: str
) -> _Section:
    if not isinstance(data, dict):
        raise ConfigError(
            f"{prefix or 'config'} must be an object, got "
            f"{type(data).__name__}"
        )

    fields = {f.name: f for f in dataclasses.fields(cls)}
    unknown = set(data) - set(fields)
    if unknown:
        names = ", ".join(prefix + k for k in sorted(unknown))
        raise ConfigError(
            f"Unknown key(s): {names}. "
            f"Allowed: {', '.join(prefix + k for k in sorted(fields))}"
        )

    values = {}
    for key, value in data.items():
        declared = fields[key]
        if dataclasses.is_dataclass(declared.default_factory):
            values[key] = _section_from_dict(
                declared.default_factory, value, f"{prefix}{key}."
            )
            continue
        values[key] = _convert(declared, value, prefix + key)

    try:
        return cls(**values)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{prefix or 'config'}: {exc}") from exc


def _convert(declared: dataclasses.Field, value: Any, name: str) -> Any:
    if "convert" in declared.metadata:
        convert = declared.metadata["convert"]
        expected = "value"
    else:
        default = (
            declared.default
            if declared.default is not dataclasses.MISSING
            else declared.default_factory()
        )
        convert = type(default)
        expected = convert.__name__
        if convert is bool and not isinstance(value, bool):
            raise ConfigError(f"Invalid value for {name}: {value!r}.")
        if convert in (int, float) and isinstance(value, bool):
            raise ConfigError(f"Invalid value for {name}: {value!r}.")
        if convert is int and isinstance(value, float):
            if not value.is_integer():
                raise ConfigError(f"Invalid value for {name}: {value!r}.")

    try:
        return convert(value)
    except (ValueError, TypeError) as exc:
        raise ConfigError(
            f"Invalid value for {name}: {value!r}. Expected {expected}"
        ) from exc


def load_config(path: Optional[Path | str]) -> PipelineConfig:
    """
    Read and validate a JSON run configuration; None gives the defaults.

    Arguments:
        path: the configuration file

    Returns:
        the configuration

    Raises:
        DescriptorIOError: if the file cannot be read or is not JSON
        ConfigError: if the content fails validation
    """
    if path is None:
        return PipelineConfig()

    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise DescriptorIOError(str(path), exc.strerror or str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise DescriptorIOError(str(path), f"invalid JSON: {exc}") from exc

    config = PipelineConfig.from_dict(data)
    _logger.debug(f"Loaded configuration from {path}")
    return config
