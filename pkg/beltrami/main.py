"""
Beltrami command-line entry point.
"""

import dataclasses
import getpass
import json
import logging
import sys
from argparse import ArgumentParser, Namespace
from pathlib import Path
from typing import Any, Callable, Optional

from owasp_logger import OWASPLogger

from beltrami.config.pipeline_config import PipelineConfig, load_config
from beltrami.errors.beltrami_errors import BeltramiError, DescriptorIOError
from beltrami.lib.dynamics.helicity import helicity_ratio
from beltrami.lib.r3_fields.atoms import PlaneWaveAtomField
from beltrami.lib.t3.lattice import (
    direction_coverage,
    enumerate_sphere_lattice,
)
from beltrami.loggers.owasp_logger import get_owasp_logger
from beltrami.output import OUTPUT_FORMATS, get_exporter, get_outdir_path
from beltrami.output.csv_exporter import write_table
from beltrami.output.descriptors import load_descriptor, save_descriptor
from beltrami.output.provenance import BELTRAMI_VERSION, provenance
from beltrami.pipeline.build import RealPart, build, fit
from beltrami.pipeline.dynamics import section_run, trace_run
from beltrami.pipeline.evaluate import evaluate_grid
from beltrami.pipeline.rates import measure_errors, measure_rates

_owasp_logger = OWASPLogger(appid=__name__, logger=get_owasp_logger())
_logger = logging.getLogger(__name__)

DESCRIPTOR_VERBS = ("eval", "trace", "section", "helicity")
CONFIG_VERBS = ("build", "norms", "lattice", "rates")


def parse_arguments(argv: Optional[list[str]] = None) -> Namespace:
    """
    Add and parse command line arguments.

    Arguments:
        argv: list of arguments received via command line, taken from
            sys.argv if None

    Returns:
        The argparse.Namespace got after parsing the input

    Raises:
        SystemExit: If argument parsing fails
    """
    parser = ArgumentParser(prog="beltrami")
    parser.add_argument(
        "--debug",
        action="store_const",
        const="DEBUG",
        dest="log_level",
        help="be very verbose",
        default="INFO",
    )
    parser.add_argument(
        "--quiet",
        action="store_const",
        const="WARNING",
        dest="log_level",
        help="be less verbose",
    )
    parser.add_argument(
        "--threads",
        type=int,
        help="worker threads; 1 gives bit-reproducible output",
    )
    parser.add_argument(
        "--seed",
        type=int,
        help="random seed, overriding the configuration",
    )
    parser.add_argument(
        "--outdir",
        type=str,
        help="Specify output directory.",
    )
    parser.add_argument(
        "--config",
        type=str,
        help="JSON run configuration, defaults if omitted",
    )

    verbs = parser.add_subparsers(dest="verb", required=True)
    for verb in CONFIG_VERBS:
        verbs.add_parser(verb, help=f"run '{verb}' on the configuration")
    for verb in DESCRIPTOR_VERBS:
        verb_parser = verbs.add_parser(
            verb, help=f"run '{verb}' on a field descriptor"
        )
        verb_parser.add_argument(
            "descriptor", type=str, help="field descriptor JSON"
        )
        if verb == "eval":
            verb_parser.add_argument(
                "--format",
                action="append",
                choices=OUTPUT_FORMATS.keys(),
                dest="formats",
                help="output format, repeatable; the configured ones if "
                "omitted",
            )

    try:
        return parser.parse_args(argv)
    except SystemExit as e:
        _owasp_logger.sys_crash("Error parsing Beltrami arguments.")
        raise e


def write_report(
    outdir: Path, verb: str, report: dict[str, Any], record: dict[str, Any]
) -> Path:
    """
    Write the run report as JSON, headed by the provenance record.

    Raises:
        DescriptorIOError: if the file cannot be written
    """
    path = outdir / f"{verb}_report.json"
    try:
        path.write_text(
            json.dumps({"provenance": record, **report}, indent=2)
        )
    except OSError as exc:
        raise DescriptorIOError(str(path), str(exc)) from exc
    return path


def _traceable(source: Any) -> Any:
    if isinstance(source, PlaneWaveAtomField):
        return RealPart(source)
    return source


def cmd_build(
    args: Namespace,
    config: PipelineConfig,
    outdir: Path,
    record: dict[str, Any],
) -> dict[str, Any]:
    result = build(config)
    extras = {"report": result.report}
    if result.manifold == "s3":
        extras["base_points"] = [list(p) for p in result.base_points]
    save_descriptor(outdir / "field.json", result.field, record, **extras)
    save_descriptor(outdir / "atoms.json", result.atoms, record)
    return result.report


def cmd_eval(
    args: Namespace,
    config: PipelineConfig,
    outdir: Path,
    record: dict[str, Any],
) -> dict[str, Any]:
    descriptor = load_descriptor(args.descriptor)
    grid, values = evaluate_grid(descriptor, config.output, config.threads)
    formats = args.formats or config.output.formats
    written = [
        str(get_exporter(name).export(outdir / "grid", grid, values, record))
        for name in dict.fromkeys(formats)
    ]
    return {
        "type": descriptor.kind,
        "dimensions": list(grid.dimensions),
        "origin": grid.origin.tolist(),
        "spacing": grid.spacing.tolist(),
        "files": written,
    }


def cmd_trace(
    args: Namespace,
    config: PipelineConfig,
    outdir: Path,
    record: dict[str, Any],
) -> dict[str, Any]:
    field = _traceable(load_descriptor(args.descriptor).source)
    trajectories = trace_run(field, config)
    summaries = []
    for i, trajectory in enumerate(trajectories):
        write_table(
            outdir / f"trace_{i}.csv",
            trajectory.header(),
            trajectory.rows(),
            record,
        )
        summaries.append(
            {
                "seed_id": i,
                "samples": len(trajectory),
                "duration": trajectory.duration,
                "completed": trajectory.completed,
                "closure": trajectory.closure(),
                "diagnostic": trajectory.diagnostic,
                "stats": trajectory.stats.as_dict(),
            }
        )
    return {"trajectories": summaries}


def cmd_section(
    args: Namespace,
    config: PipelineConfig,
    outdir: Path,
    record: dict[str, Any],
) -> dict[str, Any]:
    field = _traceable(load_descriptor(args.descriptor).source)
    run = section_run(field, config)
    section = run.section
    write_table(
        outdir / "section.csv", section.header(), section.rows(), record
    )
    return run.as_dict()


def cmd_norms(
    args: Namespace,
    config: PipelineConfig,
    outdir: Path,
    record: dict[str, Any],
) -> dict[str, Any]:
    fitted = fit(config)
    result = build(config, fitted=fitted)
    return measure_errors(
        result, fitted, config.norms, config.threads
    ).as_dict()


def cmd_helicity(
    args: Namespace,
    config: PipelineConfig,
    outdir: Path,
    record: dict[str, Any],
) -> dict[str, Any]:
    field = load_descriptor(args.descriptor).source
    ratio = helicity_ratio(
        field,
        quadrature_n=config.norms.quadrature_n,
        seed=config.seed,
        threads=config.threads,
    )
    return {"helicity_ratio": ratio, "eigenvalue": field.eigenvalue}


def cmd_lattice(
    args: Namespace,
    config: PipelineConfig,
    outdir: Path,
    record: dict[str, Any],
) -> dict[str, Any]:
    if config.norm_squared is not None:
        size = {"norm_squared": config.norm_squared}
    else:
        size = {"degree": config.primary_degree}
    lattice = enumerate_sphere_lattice(threads=config.threads, **size)
    write_table(
        outdir / "lattice.csv",
        ["k1", "k2", "k3"],
        lattice.points.tolist(),
        record,
    )
    coverage = direction_coverage(lattice) if len(lattice) else None
    return {**lattice.as_dict(), "coverage": coverage}


def cmd_rates(
    args: Namespace,
    config: PipelineConfig,
    outdir: Path,
    record: dict[str, Any],
) -> dict[str, Any]:
    sweep = measure_rates(config)
    write_table(outdir / "rates.csv", sweep.header(), sweep.rows(), record)
    return sweep.as_dict()


VERBS: dict[str, Callable[..., dict[str, Any]]] = {
    "build": cmd_build,
    "eval": cmd_eval,
    "trace": cmd_trace,
    "section": cmd_section,
    "norms": cmd_norms,
    "helicity": cmd_helicity,
    "lattice": cmd_lattice,
    "rates": cmd_rates,
}


def run_verb(args: Namespace) -> Path:
    """
    Load the configuration, apply the command line overrides and run the
    verb.

    Returns:
        the path of the run report

    Raises:
        BeltramiError: from configuration, I/O or any pipeline stage
    """
    config = load_config(args.config).with_overrides(
        seed=args.seed, threads=args.threads
    )
    if getattr(args, "formats", None):
        config = config.with_overrides(
            output=dataclasses.replace(
                config.output, formats=tuple(args.formats)
            )
        )
    outdir = get_outdir_path(args.outdir or config.output.outdir)
    record = provenance(args.verb, config)

    report = VERBS[args.verb](args, config, outdir, record)
    path = write_report(outdir, args.verb, report, record)
    _logger.info(f"Results exported to: {outdir}")
    return path


def main(argv: Optional[list[str]] = None) -> None:
    """
    Main entry point.

    Arguments:
        argv: list of arguments received via command line, defaults
            to None
    """
    _owasp_logger.sys_startup(getpass.getuser())

    args = parse_arguments(argv)
    logging.basicConfig(level=args.log_level)
    _logger.debug(f"beltrami {BELTRAMI_VERSION}, verb '{args.verb}'")

    if args.log_level == "DEBUG":
        _owasp_logger.sys_monitor_enabled(getpass.getuser(), "debug_mode")
    else:
        _owasp_logger.sys_monitor_disabled(getpass.getuser(), "debug_mode")

    if args.threads is not None and args.threads > 1:
        _owasp_logger.sys_monitor_enabled(
            getpass.getuser(), f"threads:{args.threads}"
        )
    else:
        _owasp_logger.sys_monitor_disabled(getpass.getuser(), "threads")

    ec = 0
    try:
        run_verb(args)
    except BeltramiError as e:
        _logger.error(f"'{args.verb}' failed: {e}")
        _owasp_logger.sys_crash(f"{type(e).__name__}: {e}")
        ec = e.exit_code

    _owasp_logger.sys_shutdown(getpass.getuser())
    sys.exit(ec)


if __name__ == "__main__":
    main()
