import numpy as np
import pytest
from numpy.testing import assert_allclose

from beltrami.errors.beltrami_errors import (
    DerivativeUnavailableError,
    PreconditionError,
)
from beltrami.lib.r3_fields.fields import (
    ABCField,
    ChandrasekharKendallField,
    HelmholtzMode,
    beltrami_projection,
    curl_jets,
    divergence,
    laplacian,
    reference_beltrami,
)


def random_ball_points(n: int, radius: float = 2.0, seed: int = 0):
    rng = np.random.default_rng(seed)
    directions = rng.normal(size=(n, 3))
    directions /= np.linalg.norm(directions, axis=-1, keepdims=True)
    return directions * radius * rng.uniform(0, 1, (n, 1)) ** (1 / 3)


CK_PARAMETERS = [
    {},
    {"l": 1, "m": 0},
    {"l": 2, "m": 1, "axis": (0.3, -0.4, 0.8)},
    {"l": 3, "m": -2, "axis": (1.0, 0.0, 0.0)},
]


class TestABCField:
    def test_closed_form(self) -> None:
        """
        Test the unit ABC field against its trigonometric formula.
        """
        x = random_ball_points(100)
        expected = np.stack(
            [
                np.sin(x[:, 2]) + np.cos(x[:, 1]),
                np.sin(x[:, 0]) + np.cos(x[:, 2]),
                np.sin(x[:, 1]) + np.cos(x[:, 0]),
            ],
            axis=-1,
        )
        assert_allclose(
            reference_beltrami("abc-type")(x), expected, atol=1e-15
        )

    @pytest.mark.parametrize("coefficients", [(1, 1, 1), (0.5, -2.0, 1.5)])
    def test_curl_equals_field(self, coefficients) -> None:
        """
        Test curl v = v for arbitrary ABC coefficients.
        """
        a, b, c = coefficients
        field = ABCField(a, b, c)
        x = random_ball_points(100, seed=1)
        assert_allclose(field.curl(x), field(x), atol=1e-10)

    def test_derivatives_match_finite_differences(self) -> None:
        """
        Test the analytic gradient against central differences.
        """
        field = ABCField(0.7, 1.1, -0.3)
        x = random_ball_points(10, seed=2)
        step = 1e-6
        gradient = field.derivative(x, 1)
        for axis in range(3):
            shift = np.zeros(3)
            shift[axis] = step
            difference = (field(x + shift) - field(x - shift)) / (2 * step)
            assert_allclose(gradient[..., axis], difference, atol=1e-8)


class TestChandrasekharKendallField:
    @pytest.mark.parametrize("params", CK_PARAMETERS)
    def test_curl_equals_field(self, params: dict) -> None:
        """
        Test curl v = v with analytic derivatives in B_2.
        """
        field = reference_beltrami("chandrasekhar-kendall", **params)
        x = random_ball_points(100, seed=3)
        assert_allclose(field.curl(x), field(x), atol=1e-9)

    @pytest.mark.parametrize("params", CK_PARAMETERS)
    def test_helmholtz_and_divergence_free(self, params: dict) -> None:
        """
        Test Δv + v = 0 and div v = 0.
        """
        field = ChandrasekharKendallField(**params)
        jets = field.jets(random_ball_points(100, seed=4), 2)
        assert_allclose(laplacian(jets) + jets[0], 0.0, atol=1e-8)
        assert_allclose(divergence(jets), 0.0, atol=1e-9)

    def test_axisymmetric_mode_is_parallel_on_axis(self) -> None:
        """
        Test the l=1 axisymmetric field is parallel to its axis on the axis.
        """
        field = ChandrasekharKendallField(l=1, m=0)
        z = np.linspace(-1.8, 1.8, 13)
        values = field(np.stack([0 * z, 0 * z, z], axis=-1))
        assert_allclose(values[:, :2], 0.0, atol=1e-14)

    def test_default_field_is_axial_at_origin(self) -> None:
        """
        Test the default mode points along e3 at the origin.
        """
        value = ChandrasekharKendallField()(np.zeros(3))
        assert_allclose(value[:2], 0.0, atol=1e-15)
        assert abs(value[2]) > 0.1

    def test_higher_derivatives_match_finite_differences(self) -> None:
        """
        Test the analytic third partials against differences of second ones.
        """
        field = ChandrasekharKendallField(l=2, m=1)
        x = random_ball_points(5, seed=5)
        step = 1e-5
        third = field.derivative(x, 3)
        for axis in range(3):
            shift = np.zeros(3)
            shift[axis] = step
            difference = (
                field.derivative(x + shift, 2) - field.derivative(x - shift, 2)
            ) / (2 * step)
            assert_allclose(third[..., axis], difference, atol=1e-7)

    def test_zero_axis(self) -> None:
        """
        Test a zero axis is rejected.
        """
        with pytest.raises(PreconditionError, match="axis"):
            ChandrasekharKendallField(axis=(0, 0, 0))


class TestHelmholtzMode:
    @pytest.mark.parametrize("l,m", [(0, 0), (1, 1), (3, -1), (4, 4)])
    def test_helmholtz(self, l: int, m: int) -> None:
        """
        Test j_l Y_lm b solves Δw + w = 0.
        """
        mode = HelmholtzMode(l, m, (0.2, -1.0, 0.5))
        jets = mode.jets(random_ball_points(100, seed=6), 2)
        assert_allclose(laplacian(jets) + jets[0], 0.0, atol=1e-8)

    def test_invalid_indices(self) -> None:
        """
        Test |m| > l is rejected.
        """
        with pytest.raises(PreconditionError):
            HelmholtzMode(1, 2)


class TestReferenceBeltrami:
    def test_unknown_kind(self) -> None:
        """
        Test an unknown kind raises a stage-tagged precondition error.
        """
        with pytest.raises(PreconditionError, match=r"\[reference\]"):
            reference_beltrami("hopf")

    def test_invalid_parameters(self) -> None:
        """
        Test unexpected parameters are reported as precondition errors.
        """
        with pytest.raises(PreconditionError, match="invalid parameters"):
            reference_beltrami("abc-type", d=1.0)

    def test_order_above_maximum(self) -> None:
        """
        Test requesting derivatives beyond the available order.
        """
        with pytest.raises(DerivativeUnavailableError):
            ABCField().jets(np.zeros(3), 5)

    def test_scalar_point_shape(self) -> None:
        """
        Test a single point evaluates to a vector of shape (3,).
        """
        assert reference_beltrami("abc-type")(np.ones(3)).shape == (3,)


class TestBeltramiProjection:
    def test_projection_is_eigenfield(self) -> None:
        """
        Test ½(curl curl w + curl w) of a Helmholtz mode has curl = value.
        """
        projection = beltrami_projection(HelmholtzMode(2, 1, (1.0, 0.5, 0.0)))
        x = random_ball_points(50, seed=7)
        assert_allclose(projection.curl(x), projection(x), atol=1e-9)

    def test_projection_fixes_beltrami_fields(self) -> None:
        """
        Test a field with curl v = v is its own projection.
        """
        field = ABCField(1.0, 0.5, 2.0)
        x = random_ball_points(20, seed=8)
        assert_allclose(beltrami_projection(field)(x), field(x), atol=1e-12)

    def test_max_order_shrinks(self) -> None:
        """
        Test the projection exposes two derivative orders fewer.
        """
        assert beltrami_projection(ABCField()).max_order == 2

    def test_curl_jets_shapes(self) -> None:
        """
        Test curl jets are one order shorter than the input jets.
        """
        jets = ABCField().jets(np.zeros((4, 3)), 3)
        curls = curl_jets(jets)
        assert [c.shape for c in curls] == [
            (4, 3),
            (4, 3, 3),
            (4, 3, 3, 3),
        ]
