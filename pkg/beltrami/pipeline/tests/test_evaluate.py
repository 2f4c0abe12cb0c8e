import numpy as np
import pytest

from beltrami import TORUS_PERIOD
from beltrami.config.pipeline_config import OutputConfig
from beltrami.lib.s3.beltrami_field import pushforward_rescale
from beltrami.lib.s3.chart import exp_chart
from beltrami.lib.s3.tests.fixtures import lifted_field
from beltrami.lib.t3.torus_field import TorusBeltramiField
from beltrami.output.descriptors import Descriptor, descriptor_from_dict
from beltrami.pipeline.build import build
from beltrami.pipeline.evaluate import evaluate_grid
from beltrami.pipeline.tests.fixtures import small_config


class TestEvaluateGrid:
    def test_zero_field(self) -> None:
        """
        Test the zero field samples to an all-zero grid.
        """
        zero = TorusBeltramiField(
            9, np.zeros((0, 3), dtype=np.int64), np.zeros((0, 3))
        )
        grid, values = evaluate_grid(
            Descriptor(zero), OutputConfig(grid_n=4)
        )
        assert len(grid) == 64
        assert values.shape == (64, 3)
        assert not np.any(values)

    def test_torus_periodic_closure(self) -> None:
        """
        Test the default torus grid closes up: the value at 0 equals the
        value at 2π along every axis.
        """
        field = build(small_config("t3")).field
        grid, values = evaluate_grid(Descriptor(field), OutputConfig(grid_n=5))
        assert grid.origin.tolist() == [0.0] * 3
        np.testing.assert_allclose(grid.upper, [TORUS_PERIOD] * 3)

        cube = values.reshape(5, 5, 5, 3)  # indexed [x3, x2, x1]
        np.testing.assert_allclose(cube[:, :, 0], cube[:, :, -1], atol=1e-12)
        np.testing.assert_allclose(cube[:, 0], cube[:, -1], atol=1e-12)
        np.testing.assert_allclose(cube[0], cube[-1], atol=1e-12)

    @pytest.mark.parametrize("threads", [1, 3])
    def test_spot_points(self, threads: int) -> None:
        """
        Test grid values match direct evaluator calls at spot points.
        """
        field = lifted_field(20)
        descriptor = descriptor_from_dict(field.descriptor())
        grid, values = evaluate_grid(
            descriptor, OutputConfig(grid_n=6), threads=threads
        )
        spots = np.random.default_rng(1).choice(len(grid), 10, replace=False)
        expected = pushforward_rescale(
            field, exp_chart(), 20, grid.points()[spots], max_radius=2.0
        )
        np.testing.assert_allclose(values[spots], expected, atol=1e-14)

    def test_base_point_extra(self) -> None:
        """
        Test the stored chart base point is the one the grid is sampled in.
        """
        field = lifted_field(20)
        base_point = [1.0, 0.0, 0.0, 0.0]
        descriptor = descriptor_from_dict(
            {**field.descriptor(), "base_points": [base_point]}
        )
        grid, values = evaluate_grid(descriptor, OutputConfig(grid_n=3))
        expected = pushforward_rescale(
            field, exp_chart(base_point), 20, grid.points(), max_radius=2.0
        )
        np.testing.assert_allclose(values, expected, atol=1e-14)
