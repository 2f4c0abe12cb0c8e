import json

import numpy as np
import pytest

from beltrami.config.pipeline_config import NormsConfig, PipelineConfig
from beltrami.pipeline.build import build, fit
from beltrami.pipeline.rates import measure_errors, measure_rates
from beltrami.pipeline.tests.fixtures import small_config


class TestMeasureErrors:
    def test_s3(self) -> None:
        """
        Test the rescaled field is measured against the limit and the
        reference on the same ball.
        """
        config = small_config()
        fitted = fit(config)
        result = build(config, fitted=fitted)
        measurement = measure_errors(
            result, fitted, NormsConfig(grid_n=5), threads=1
        )
        assert measurement.degree == 20
        assert measurement.to_limit.points == measurement.to_reference.points
        assert 0 < measurement.to_limit.aggregate < np.inf
        assert json.loads(json.dumps(measurement.as_dict()))

    def test_t3_limit_is_unsnapped(self) -> None:
        """
        Test the torus limit is the projection of the unsnapped fit, so the
        error picks up the snap displacement.
        """
        config = small_config("t3")
        fitted = fit(config)
        result = build(config, fitted=fitted)
        measurement = measure_errors(result, fitted, NormsConfig(grid_n=5))
        snapped_limit = result.limit()
        rescaled = result.rescaled()
        points = np.random.default_rng(0).uniform(-0.5, 0.5, (20, 3))
        np.testing.assert_allclose(
            rescaled(points), snapped_limit(points), atol=1e-10
        )
        assert measurement.to_limit.aggregate > 1e-6

    def test_derivative_order(self) -> None:
        """
        Test order 1 falls back to differences of the rescaled field.
        """
        config = small_config()
        fitted = fit(config)
        measurement = measure_errors(
            build(config, fitted=fitted),
            fitted,
            NormsConfig(order=1, grid_n=4),
        )
        assert len(measurement.to_limit.norms) == 2
        assert measurement.to_limit.finite_difference[0]


class TestMeasureRates:
    def test_sweep(self) -> None:
        """
        Test one fit serves every degree and the table lists them in order.
        """
        config = small_config(degree=[20, 40], norms={"grid_n": 5})
        sweep = measure_rates(config)
        assert sweep.table.degrees == (20, 40)
        assert len(sweep.builds) == 2
        assert sweep.header() == [
            "Lambda",
            "error",
            "ratio",
            "reference_error",
        ]
        assert [row[0] for row in sweep.rows()] == [20, 40]
        assert np.isnan(sweep.rows()[0][2])
        assert json.loads(json.dumps(sweep.as_dict(), default=str))

    @pytest.mark.slow
    @pytest.mark.parametrize("degree", [100, 200])
    def test_s3_rate(self, degree: int) -> None:
        """
        Test the order-0 error of the rescaled field halves within
        [1.4, 2.8] when Λ doubles.
        """
        config = PipelineConfig.from_dict(
            {"degree": [degree, 2 * degree], "threads": 4}
        )
        sweep = measure_rates(config)
        assert sweep.table.within(1.4, 2.8), sweep.table.as_dict()

    @pytest.mark.slow
    def test_atom_fit_quality(self) -> None:
        """
        Test the default fit is within 5% of the reference in C^0 of the
        unit ball.
        """
        result = build(PipelineConfig.from_dict({"threads": 4}))
        fit_errors = result.report["fit"]
        assert fit_errors["c0_error"] <= 0.05 * fit_errors["c0_reference"]
