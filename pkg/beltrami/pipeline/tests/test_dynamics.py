import numpy as np
import pytest

from beltrami.lib.dynamics.section import poincare_section
from beltrami.lib.dynamics.trajectory import trace_field_lines
from beltrami.lib.r3_fields.fields import reference_beltrami
from beltrami.lib.s3.tests.fixtures import lifted_field
from beltrami.pipeline.build import build
from beltrami.pipeline.dynamics import (
    ring_radius,
    ring_witness,
    rescaled_ring_witness,
    run_seeds,
    section_plane,
    section_run,
    trace_run,
)
from beltrami.pipeline.tests.fixtures import small_config


@pytest.fixture
def ck_field():
    return reference_beltrami("chandrasekhar-kendall")


class TestRunSeeds:
    def test_sphere_default(self) -> None:
        """
        Test a sphere field starts from the chart base point by default.
        """
        seeds = run_seeds(lifted_field(20), small_config())
        assert seeds.tolist() == [[0.0, 0.0, 0.0, 1.0]]

    def test_euclidean_default(self, ck_field) -> None:
        seeds = run_seeds(ck_field, small_config())
        assert seeds.tolist() == [[0.0, 0.0, 0.0]]

    def test_configured(self, ck_field) -> None:
        config = small_config(dynamics={"seeds": [[1, 2, 3], [0, 0, 1]]})
        assert run_seeds(ck_field, config).shape == (2, 3)


class TestTraceRun:
    def test_matches_library_call(self, ck_field) -> None:
        """
        Test the configured run equals a direct trace with the same
        parameters.
        """
        config = small_config(
            dynamics={"seeds": [[1.0, 0.5, 0.0]], "duration": 3.0}
        )
        run = trace_run(ck_field, config)
        direct = trace_field_lines(ck_field, [[1.0, 0.5, 0.0]], 3.0, 1e-9)
        assert len(run) == 1
        np.testing.assert_array_equal(run[0].times, direct[0].times)
        np.testing.assert_array_equal(run[0].positions, direct[0].positions)

    def test_sphere_stays_on_sphere(self) -> None:
        """
        Test sphere trajectories keep unit norm.
        """
        config = small_config(dynamics={"duration": 0.05})
        (trajectory,) = trace_run(lifted_field(20), config)
        np.testing.assert_allclose(
            np.linalg.norm(trajectory.positions, axis=-1), 1.0, atol=1e-12
        )


class TestRingRadius:
    def test_root(self) -> None:
        """
        Test the ring radius zeroes the vertical component of the CK field
        in its midplane.
        """
        radius = ring_radius()
        field = reference_beltrami("chandrasekhar-kendall")
        value = field(np.array([[radius, 0.0, 0.0]]))[0]
        assert abs(value[2]) <= 1e-12 * np.linalg.norm(value)
        assert abs(value[1]) > 0


class TestSectionRun:
    def test_ring_is_closed(self, ck_field) -> None:
        """
        Test a seed on the circular vortex line returns to itself.
        """
        config = small_config(
            dynamics={"seeds": [[ring_radius(), 0.0, 0.0]], "tol": 1e-11},
            section={
                "n_returns": 3,
                "max_time": 2000.0,
                "closed_threshold": 1e-5,
            },
        )
        run = section_run(ck_field, config)
        assert len(run.section.returns(0)) == 3
        assert [orbit.seed_id for orbit in run.closed_orbits] == [0]
        assert run.witness is None
        assert run.as_dict()["witness"] is None

    def test_matches_library_call(self, ck_field) -> None:
        """
        Test the section of the configured seeds equals a direct call.
        """
        seeds = [[ring_radius() + 0.1, 0.0, 0.0]]
        config = small_config(
            dynamics={"seeds": seeds},
            section={"n_returns": 2, "max_time": 2000.0},
        )
        run = section_run(ck_field, config)
        direct = poincare_section(
            ck_field,
            section_plane(ck_field, config),
            seeds,
            2,
            tol=1e-9,
            max_time=2000.0,
        )
        np.testing.assert_array_equal(run.section.rows(), direct.rows())

    def test_configured_plane(self, ck_field) -> None:
        """
        Test a configured point and normal fix the section.
        """
        config = small_config(
            section={"point": [2.0, 0.0, 0.0], "normal": [0.0, 2.0, 0.0]}
        )
        plane = section_plane(ck_field, config)
        assert plane.point.tolist() == [2.0, 0.0, 0.0]
        assert plane.normal.tolist() == [0.0, 1.0, 0.0]

    def test_witness(self, ck_field) -> None:
        """
        Test an annulus radius turns the run into a persistence witness
        around the section point.
        """
        config = small_config(
            section={
                "point": [ring_radius(), 0.0, 0.0],
                "n_returns": 4,
                "max_time": 5000.0,
                "annulus_radius": 0.05,
            },
        )
        run = section_run(ck_field, config)
        assert run.witness is not None
        assert run.witness.tube_ratio <= 1.5
        assert len(run.section.coordinates) == 9


class TestRingWitness:
    def test_reference(self, ck_field) -> None:
        """
        Test returns around the reference's circular line stay in the tube.
        """
        report, section = ring_witness(ck_field, 0.05, n_returns=5)
        assert report.tube_ratio <= 1.5
        assert report.closure <= 1e-4

    @pytest.mark.slow
    def test_rescaled_pipeline_field(self) -> None:
        """
        Test the vortex ring persists in the rescaled S^3 field at Λ = 200:
        100 returns of a 9-point annulus stay within 1.5 annulus radii and
        one seed closes to 1e-4.
        """
        config = small_config(
            degree=[200], fit={"radius": 6.0, "cells": 16}, threads=4
        )
        report, _ = rescaled_ring_witness(build(config), 0.05)
        assert report.returns == 100
        assert report.passed, report.as_dict()
