import numpy as np
import pytest
import sympy
from numpy.testing import assert_allclose
from scipy.special import eval_gegenbauer

from beltrami.errors.beltrami_errors import DomainError, UnsupportedDegreeError
from beltrami.lib.specfun.gegenbauer import (
    GegenbauerEvaluator,
    chebyshev_closed_form,
    darboux_residual,
    gegenbauer4,
)


class TestGegenbauer4:
    @pytest.mark.parametrize("degree", [0, 1, 2, 17, 400, 10_000])
    def test_normalization(self, degree: int) -> None:
        """
        Test C_Λ(1) = 1 for every degree.
        """
        assert gegenbauer4(degree, 1.0) == pytest.approx(1.0, abs=1e-12)

    def test_degree_one_is_identity(self) -> None:
        """
        Test C_1(t) = t against the normalized symbolic Jacobi polynomial.
        """
        t = sympy.symbols("t")
        jacobi = sympy.jacobi(1, sympy.Rational(1, 2), sympy.Rational(1, 2), t)
        normalized = sympy.simplify(jacobi / jacobi.subs(t, 1))
        assert normalized == t
        samples = np.linspace(-1.0, 1.0, 11)
        assert_allclose(gegenbauer4(1, samples), samples, atol=1e-15)

    @pytest.mark.parametrize("theta", [0.3, 1.0, 2.5])
    def test_degree_seven_closed_form(self, theta: float) -> None:
        """
        Test C_7(cos θ) = sin(8θ) / (8 sin θ).
        """
        assert gegenbauer4(7, np.cos(theta)) == pytest.approx(
            np.sin(8 * theta) / (8 * np.sin(theta)), abs=1e-14
        )

    @pytest.mark.parametrize("degree", [2, 31, 128, 512])
    def test_random_angles_match_closed_form(self, degree: int) -> None:
        """
        Test agreement with the Chebyshev closed form at 200 random angles.
        """
        rng = np.random.default_rng(degree)
        theta = rng.uniform(0.01, np.pi - 0.01, 200)
        assert_allclose(
            gegenbauer4(degree, np.cos(theta)),
            chebyshev_closed_form(degree, theta),
            atol=1e-9,
        )

    def test_matches_scipy_gegenbauer(self) -> None:
        """
        Test C_Λ = C_Λ^(1) / (Λ + 1) with scipy's Gegenbauer polynomial.
        """
        t = np.linspace(-1.0, 1.0, 51)
        assert_allclose(
            gegenbauer4(40, t), eval_gegenbauer(40, 1.0, t) / 41, atol=1e-12
        )

    def test_bounded_by_one(self) -> None:
        """
        Test |C_Λ(t)| <= 1 on [-1, 1].
        """
        t = np.linspace(-1.0, 1.0, 2001)
        for degree in (3, 50, 333):
            assert np.max(np.abs(gegenbauer4(degree, t))) <= 1.0 + 1e-12

    @pytest.mark.parametrize("order", [1, 2, 3])
    def test_derivatives_match_finite_differences(self, order: int) -> None:
        """
        Test order-k output against central differences of order k-1.
        """
        rng = np.random.default_rng(order)
        t = rng.uniform(-0.95, 0.95, 100)
        step = 1e-6
        evaluator = GegenbauerEvaluator(12)
        difference = (
            evaluator(t + step, order - 1) - evaluator(t - step, order - 1)
        ) / (2 * step)
        assert_allclose(evaluator(t, order), difference, rtol=1e-6, atol=1e-6)

    def test_first_derivative_at_one(self) -> None:
        """
        Test C_Λ'(1) = Λ(Λ + 2) / 3, the Laplacian eigenvalue over
        dimension.
        """
        for degree in (1, 5, 100):
            assert gegenbauer4(degree, 1.0, 1) == pytest.approx(
                degree * (degree + 2) / 3, rel=1e-12
            )

    def test_jets_shape(self) -> None:
        """
        Test jets stacks all orders in front of the argument shape.
        """
        jets = GegenbauerEvaluator(9).jets(np.zeros((2, 3)), max_order=3)
        assert jets.shape == (4, 2, 3)

    def test_outside_domain(self) -> None:
        """
        Test arguments outside [-1, 1] raise a domain error.
        """
        with pytest.raises(DomainError):
            gegenbauer4(3, 1.01)

    def test_unsupported_order(self) -> None:
        """
        Test derivative orders above three are rejected.
        """
        with pytest.raises(UnsupportedDegreeError):
            gegenbauer4(3, 0.5, order=4)


class TestDarbouxResidual:
    def test_bound(self) -> None:
        """
        Test the residual at Λ=100, R=2 is positive and at most 5/Λ.
        """
        residual = darboux_residual(100, 2.0)
        assert 0.0 < residual <= 5.0 / 100

    def test_rate(self) -> None:
        """
        Test the residual halves when Λ doubles from 50 to 100.
        """
        ratio = darboux_residual(50, 2.0) / darboux_residual(100, 2.0)
        assert 1.4 <= ratio <= 2.8

    @pytest.mark.parametrize("degree,radius", [(2, 2.0), (10, 0.0)])
    def test_invalid_parameters(self, degree: int, radius: float) -> None:
        """
        Test Λ <= R and R <= 0 are rejected.
        """
        with pytest.raises(DomainError):
            darboux_residual(degree, radius)

    @pytest.mark.slow
    def test_acceptance_sweep(self) -> None:
        """
        Test the residual on [0, 4] for Λ in 50..400 is bounded by 5/Λ and
        halves per doubling.
        """
        degrees = [50, 100, 200, 400]
        residuals = [darboux_residual(degree, 2.0) for degree in degrees]
        for degree, residual in zip(degrees, residuals):
            assert residual <= 5.0 / degree
        for coarse, fine in zip(residuals, residuals[1:]):
            assert 1.4 <= coarse / fine <= 2.8
