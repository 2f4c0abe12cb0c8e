import json
from pathlib import Path
from unittest.mock import MagicMock, patch

import numpy as np
import pytest

from beltrami import main
from beltrami.errors.beltrami_errors import BeltramiExitCode
from beltrami.lib.t3.lattice import enumerate_sphere_lattice
from beltrami.main import (
    VERBS,
    parse_arguments,
    run_verb,
    write_report,
)
from beltrami.output.csv_exporter import render_table
from beltrami.output.provenance import BELTRAMI_VERSION
from beltrami.pipeline.tests.fixtures import SMALL_S3, SMALL_T3


def run_main(argv: list[str]) -> int:
    with pytest.raises(SystemExit) as cm:
        main.main(argv)
    return cm.value.code


def write_config(tmp_path: Path, data: dict, name: str = "config") -> str:
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps(data))
    return str(path)


class TestParseArguments:
    def test_version_is_development_placeholder(self) -> None:
        """
        Test that the version in the repository is the development
        placeholder 0.0.0.

        The actual version will be set by CI during the build process.
        """
        assert str(BELTRAMI_VERSION) == "0.0.0"

    def test_defaults(self) -> None:
        """
        Test the global flags default to INFO logging and no overrides.
        """
        args = parse_arguments(["lattice"])
        assert args.verb == "lattice"
        assert args.log_level == "INFO"
        assert args.threads is None
        assert args.seed is None
        assert args.outdir is None
        assert args.config is None

    @pytest.mark.parametrize(
        "flag,level", [("--debug", "DEBUG"), ("--quiet", "WARNING")]
    )
    def test_log_level(self, flag: str, level: str) -> None:
        assert parse_arguments([flag, "rates"]).log_level == level

    def test_descriptor_verbs(self) -> None:
        """
        Test descriptor verbs take the descriptor path and eval takes
        repeated formats.
        """
        args = parse_arguments(
            ["--threads", "2", "eval", "f.json", "--format", "vtk"]
        )
        assert args.descriptor == "f.json"
        assert args.formats == ["vtk"]
        assert args.threads == 2
        assert parse_arguments(["trace", "f.json"]).descriptor == "f.json"

    def test_every_verb_is_dispatched(self) -> None:
        assert set(VERBS) == {
            "build",
            "eval",
            "trace",
            "section",
            "norms",
            "helicity",
            "lattice",
            "rates",
        }

    @pytest.mark.parametrize(
        "argv",
        [[], ["paint"], ["eval"], ["eval", "f.json", "--format", "png"]],
    )
    @patch("beltrami.main._owasp_logger")
    def test_invalid(self, mock_logger: MagicMock, argv: list[str]) -> None:
        """
        Test invalid arguments exit through argparse and log a crash event.
        """
        with pytest.raises(SystemExit):
            parse_arguments(argv)
        mock_logger.sys_crash.assert_called_once()


class TestWriteReport:
    def test_write_report(self, tmp_path: Path) -> None:
        path = write_report(tmp_path, "norms", {"a": 1}, {"verb": "norms"})
        assert path == tmp_path / "norms_report.json"
        assert json.loads(path.read_text()) == {
            "provenance": {"verb": "norms"},
            "a": 1,
        }

    def test_unwritable(self, tmp_path: Path) -> None:
        with pytest.raises(main.DescriptorIOError):
            write_report(tmp_path / "missing", "norms", {}, {})


class TestMain:
    @patch("beltrami.main._owasp_logger")
    def test_lattice(self, mock_logger: MagicMock, tmp_path: Path) -> None:
        """
        Test the lattice verb writes the points and a report headed by
        provenance, and emits the audit events of a clean run.
        """
        config = write_config(tmp_path, {"manifold": "t3", "degree": 3})
        ec = run_main(
            ["--outdir", str(tmp_path), "--config", config, "lattice"]
        )
        assert ec == 0

        report = json.loads((tmp_path / "lattice_report.json").read_text())
        assert report["count"] == 30
        assert report["provenance"]["verb"] == "lattice"
        assert report["provenance"]["seed"] == 0
        assert report["coverage"] > 0
        expected = render_table(
            ["k1", "k2", "k3"],
            enumerate_sphere_lattice(3).points.tolist(),
            report["provenance"],
        )
        assert (tmp_path / "lattice.csv").read_text() == expected

        mock_logger.sys_startup.assert_called_once()
        mock_logger.sys_monitor_disabled.assert_any_call(
            main.getpass.getuser(), "debug_mode"
        )
        mock_logger.sys_crash.assert_not_called()
        mock_logger.sys_shutdown.assert_called_once()

    @patch("beltrami.main._owasp_logger")
    def test_debug_and_threads(
        self, mock_logger: MagicMock, tmp_path: Path
    ) -> None:
        ec = run_main(
            [
                "--debug",
                "--threads",
                "2",
                "--outdir",
                str(tmp_path),
                "lattice",
            ]
        )
        assert ec == 0
        mock_logger.sys_monitor_enabled.assert_any_call(
            main.getpass.getuser(), "debug_mode"
        )
        mock_logger.sys_monitor_enabled.assert_any_call(
            main.getpass.getuser(), "threads:2"
        )

    def test_seed_is_reproducible(self, tmp_path: Path) -> None:
        """
        Test two runs with --seed 7 write identical bytes.
        """
        config = write_config(tmp_path, SMALL_T3)
        outputs = []
        for run in ("a", "b"):
            outdir = tmp_path / run
            argv = ["--seed", "7", "--outdir", str(outdir), "--config"]
            assert run_main(argv + [config, "build"]) == 0
            outputs.append(
                [
                    (outdir / name).read_bytes()
                    for name in ("field.json", "build_report.json")
                ]
            )
        assert outputs[0] == outputs[1]
        report = json.loads(outputs[0][1])
        assert report["provenance"]["seed"] == 7

    def test_build_eval_helicity(self, tmp_path: Path) -> None:
        """
        Test a torus field built by one run is evaluated and measured by
        the next ones.
        """
        config = write_config(tmp_path, SMALL_T3)
        base = ["--outdir", str(tmp_path), "--config", config]
        assert run_main(base + ["build"]) == 0
        field = str(tmp_path / "field.json")
        assert (tmp_path / "atoms.json").exists()

        assert run_main(base + ["eval", field, "--format", "vtk"]) == 0
        vtk = (tmp_path / "grid.vtk").read_text().splitlines()
        assert vtk[0] == "# vtk DataFile Version 4.2"
        assert not (tmp_path / "grid.csv").exists()

        assert run_main(base + ["helicity", field]) == 0
        report = json.loads((tmp_path / "helicity_report.json").read_text())
        assert report["helicity_ratio"] == pytest.approx(3.0, abs=1e-11)

    def test_trace_matches_library(self, tmp_path: Path) -> None:
        """
        Test the trace verb writes the same samples as a direct run.
        """
        data = {
            **SMALL_T3,
            "dynamics": {"seeds": [[0.1, 0.2, 0.3]], "duration": 1.0},
        }
        config = write_config(tmp_path, data)
        base = ["--outdir", str(tmp_path), "--config", config]
        assert run_main(base + ["build"]) == 0
        assert run_main(base + ["trace", str(tmp_path / "field.json")]) == 0

        lines = (tmp_path / "trace_0.csv").read_text().splitlines()
        rows = np.loadtxt(
            [line for line in lines if not line.startswith("#")][1:],
            delimiter=",",
            ndmin=2,
        )
        assert rows[0, 1:4].tolist() == [0.1, 0.2, 0.3]
        assert rows[-1, 0] == pytest.approx(1.0)
        report = json.loads((tmp_path / "trace_report.json").read_text())
        assert report["trajectories"][0]["completed"]

    @patch("beltrami.main._owasp_logger")
    def test_missing_descriptor(
        self, mock_logger: MagicMock, tmp_path: Path
    ) -> None:
        """
        Test a missing descriptor is an I/O error naming the path.
        """
        missing = str(tmp_path / "missing.json")
        ec = run_main(["--outdir", str(tmp_path), "eval", missing])
        assert ec == BeltramiExitCode.IO_ERROR
        (message,) = mock_logger.sys_crash.call_args.args
        assert missing in message
        mock_logger.sys_shutdown.assert_called_once()

    def test_invalid_config(self, tmp_path: Path) -> None:
        config = write_config(tmp_path, {"lambda": 3})
        ec = run_main(["--config", config, "lattice"])
        assert ec == BeltramiExitCode.CONFIG_ERROR

    def test_invalid_threads(self, tmp_path: Path) -> None:
        ec = run_main(["--threads", "0", "--outdir", str(tmp_path), "rates"])
        assert ec == BeltramiExitCode.CONFIG_ERROR

    @patch("beltrami.main._owasp_logger")
    def test_stage_tagged_failure(
        self, mock_logger: MagicMock, tmp_path: Path
    ) -> None:
        """
        Test Λ not above the atom radius fails in the lift stage with the
        precondition exit code.
        """
        config = write_config(tmp_path, {**SMALL_S3, "degree": 4})
        ec = run_main(["--outdir", str(tmp_path), "--config", config, "build"])
        assert ec == BeltramiExitCode.PRECONDITION_ERROR
        (message,) = mock_logger.sys_crash.call_args.args
        assert "[lift]" in message
        assert not (tmp_path / "build_report.json").exists()


class TestRunVerb:
    def test_format_override(self, tmp_path: Path) -> None:
        """
        Test --format replaces the configured output formats.
        """
        config = write_config(tmp_path, SMALL_T3)
        base = ["--outdir", str(tmp_path), "--config", config]
        run_verb(parse_arguments(base + ["build"]))
        field = str(tmp_path / "field.json")

        path = run_verb(
            parse_arguments(
                base + ["eval", field, "--format", "csv", "--format", "vtk"]
            )
        )
        report = json.loads(path.read_text())
        assert [Path(f).suffix for f in report["files"]] == [".csv", ".vtk"]
        assert report["type"] == "t3_beltrami"
