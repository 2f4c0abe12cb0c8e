import json
from pathlib import Path

import pytest
from pyfakefs.fake_filesystem_unittest import FakeFilesystem

from beltrami import DEFAULT_BASE_POINT, TORUS_PERIOD
from beltrami.config.pipeline_config import (
    OutputConfig,
    PipelineConfig,
    load_config,
)
from beltrami.errors.beltrami_errors import (
    BeltramiExitCode,
    ConfigError,
    DescriptorIOError,
)
from beltrami.tests.fixtures import fs  # noqa: F401


class TestPipelineConfig:
    def test_defaults(self) -> None:
        """
        Test an empty mapping gives the documented defaults.
        """
        config = PipelineConfig.from_dict({})
        assert config == PipelineConfig()
        assert config.manifold == "s3"
        assert config.degree == (101,)
        assert config.primary_degree == 101
        assert config.reference.kind == "chandrasekhar-kendall"
        assert config.fit.radius == 6.0
        assert config.fit.cells == 32
        assert config.chart.base_points == (DEFAULT_BASE_POINT,)
        assert config.norms.grid_n == 33
        assert config.output.formats == ("csv",)

    def test_nested_values(self) -> None:
        """
        Test nested sections are converted to their field types.
        """
        config = PipelineConfig.from_dict(
            {
                "manifold": "t3",
                "degree": [100, 200],
                "seed": 7,
                "reference": {"kind": "abc-type", "params": {"a": 1}},
                "fit": {"cells": 16.0, "tolerance": 1},
                "dynamics": {"seeds": [[0, 0, 1]], "duration": 5},
                "norms": {"center": [1, 2, 3]},
                "output": {"formats": "vtk"},
            }
        )
        assert config.degree == (100, 200)
        assert config.fit.cells == 16
        assert isinstance(config.fit.cells, int)
        assert config.fit.tolerance == 1.0
        assert config.dynamics.seeds == ((0.0, 0.0, 1.0),)
        assert config.dynamics.duration == 5.0
        assert config.norms.center == (1.0, 2.0, 3.0)
        assert config.output.formats == ("vtk",)
        assert config.reference.params == {"a": 1}

    def test_single_degree(self) -> None:
        """
        Test a scalar degree becomes a one-entry sweep.
        """
        assert PipelineConfig.from_dict({"degree": 20}).degree == (20,)

    @pytest.mark.parametrize(
        "data,offending",
        [
            ({"lambda": 3}, "lambda"),
            ({"fit": {"radius": 6, "smoothing": 1}}, "fit.smoothing"),
            ({"output": {"dir": "x"}}, "output.dir"),
        ],
    )
    def test_unknown_keys(self, data: dict, offending: str) -> None:
        """
        Test unknown keys at any level are rejected by name with the
        allowed keys.
        """
        with pytest.raises(ConfigError) as error:
            PipelineConfig.from_dict(data)
        assert offending in str(error.value)
        assert "Allowed:" in str(error.value)
        assert error.value.exit_code == BeltramiExitCode.CONFIG_ERROR

    @pytest.mark.parametrize(
        "data",
        [
            {"manifold": "r3"},
            {"degree": 0},
            {"degree": []},
            {"degree": 2.5},
            {"threads": 0},
            {"seed": "seven"},
            {"seed": True},
            {"fit": {"refine": "yes"}},
            {"fit": {"cells": 16.5}},
            {"chart": {"base_points": [[0, 0, 1]]}},
            {"norms": {"center": [0, 0]}},
            {"output": {"formats": ["png"]}},
            {"output": {"grid_n": 1}},
            {"dynamics": {"duration": -1}},
            {"section": {"n_returns": -1}},
            {"fit": 3},
        ],
    )
    def test_invalid_values(self, data: dict) -> None:
        """
        Test unconvertible or out-of-range values are configuration errors.
        """
        with pytest.raises(ConfigError):
            PipelineConfig.from_dict(data)

    def test_as_dict_round_trip(self) -> None:
        """
        Test the resolved configuration is plain JSON and reads back equal.
        """
        config = PipelineConfig.from_dict(
            {"degree": [3, 5], "section": {"point": [0, 0, 0, 1]}}
        )
        data = config.as_dict()
        assert json.loads(json.dumps(data)) == data
        assert PipelineConfig.from_dict(data) == config

    def test_overrides(self) -> None:
        """
        Test command line overrides replace only the given fields.
        """
        config = PipelineConfig()
        assert config.with_overrides(seed=None, threads=None) is config
        changed = config.with_overrides(seed=7, threads=None)
        assert changed.seed == 7
        assert changed.threads == 1


class TestOutputConfig:
    def test_grid_bounds(self) -> None:
        """
        Test the default grid is the period cell on the torus and the unit
        cube elsewhere.
        """
        output = OutputConfig()
        assert output.grid_bounds("t3") == ((0.0,) * 3, (TORUS_PERIOD,) * 3)
        assert output.grid_bounds("s3") == ((-1.0,) * 3, (1.0,) * 3)
        moved = OutputConfig(lower=(0.0, 0.0, 0.0))
        assert moved.grid_bounds("s3") == ((0.0,) * 3, (1.0,) * 3)


class TestLoadConfig:
    def test_load(self, fs: FakeFilesystem) -> None:  # noqa: F811
        """
        Test a configuration file is parsed.
        """
        fs.create_file(
            "/run/config.json", contents=json.dumps({"manifold": "t3"})
        )
        assert load_config(Path("/run/config.json")).manifold == "t3"

    def test_none(self) -> None:
        """
        Test no file gives the defaults.
        """
        assert load_config(None) == PipelineConfig()

    def test_missing_file(self, fs: FakeFilesystem) -> None:  # noqa: F811
        """
        Test a missing file is an I/O error naming the path.
        """
        with pytest.raises(DescriptorIOError) as error:
            load_config("/run/missing.json")
        assert error.value.path == "/run/missing.json"
        assert error.value.exit_code == BeltramiExitCode.IO_ERROR

    def test_invalid_json(self, fs: FakeFilesystem) -> None:  # noqa: F811
        """
        Test a malformed file is an I/O error.
        """
        fs.create_file("/run/config.json", contents="{manifold: t3")
        with pytest.raises(DescriptorIOError) as error:
            load_config("/run/config.json")
        assert "invalid JSON" in str(error.value)

    def test_invalid_content(self, fs: FakeFilesystem) -> None:  # noqa: F811
        """
        Test a well-formed file with an unknown key is a configuration
        error.
        """
        fs.create_file("/run/config.json", contents='{"colour": "red"}')
        with pytest.raises(ConfigError):
            load_config("/run/config.json")
