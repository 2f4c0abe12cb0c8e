import numpy as np
import pytest
from numpy.testing import assert_allclose

from beltrami import TORUS_PERIOD
from beltrami.errors.beltrami_errors import PreconditionError
from beltrami.lib.dynamics.persistence import (
    PersistenceReport,
    annulus_seeds,
    persistence_witness,
)
from beltrami.lib.dynamics.section import SectionPlane
from beltrami.lib.dynamics.tests.fixtures import Vortex


def periodic_plane() -> SectionPlane:
    return SectionPlane.through([0.0, 0.0, 0.0], [0, 0, 1], "torus")


class TestAnnulusSeeds:
    def test_ring(self) -> None:
        """
        Test the centre comes first and the ring sits at the radius.
        """
        plane = periodic_plane()
        seeds = annulus_seeds(plane, [0.1, 0.2], 0.05, 9)
        coordinates = plane.coordinates(seeds)
        assert_allclose(coordinates[0], [0.1, 0.2], atol=1e-15)
        assert_allclose(
            np.linalg.norm(coordinates[1:] - [0.1, 0.2], axis=-1), 0.05
        )
        assert_allclose(plane.height(seeds), 0.0, atol=1e-15)


class TestPersistenceWitness:
    def test_twisted_vortex(self) -> None:
        """
        Test the ring around the axis of a twisted vortex stays in its
        tube, turns one way, and the refined axis closes.
        """
        field = Vortex(rate=1.0 + np.sqrt(2.0) / TORUS_PERIOD, twist=0.5)
        plane = periodic_plane()
        seed = plane.lift([[0.02, -0.01]])[0]
        report, section = persistence_witness(
            field, plane, seed, annulus_radius=0.1, n_returns=20
        )
        assert_allclose(report.centre, [0.0, 0.0], atol=1e-6)
        assert report.tube_ratio <= 1.5
        assert report.closure <= 1e-4
        assert report.rotation_consistent
        assert report.passed
        assert len(section.coordinates) == 9
        assert report.as_dict()["passed"] is True

    def test_failing_report(self) -> None:
        """
        Test a wide tube fails the report.
        """
        report = PersistenceReport(
            np.zeros(2), 0.1, 0.2, 1e-6, (1, 1), returns=10
        )
        assert report.tube_ratio == pytest.approx(2.0)
        assert not report.passed
        assert not PersistenceReport(
            np.zeros(2), 0.1, 0.1, 1e-6, (1, -1), returns=10
        ).rotation_consistent

    def test_preconditions(self) -> None:
        """
        Test the seed count and radius contract.
        """
        plane = periodic_plane()
        with pytest.raises(PreconditionError):
            persistence_witness(Vortex(), plane, [0, 0, 0], 0.0)
        with pytest.raises(PreconditionError):
            persistence_witness(Vortex(), plane, [0, 0, 0], 0.1, n_seeds=1)
