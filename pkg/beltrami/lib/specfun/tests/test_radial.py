import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.special import spherical_jn

from beltrami.lib.specfun.radial import (
    radial_derivative_tensor,
    radial_kernel,
    radial_kernels,
)


class TestRadialKernel:
    @pytest.mark.parametrize("k", [0, 1, 2, 5])
    def test_matches_bessel_quotient(self, k: int) -> None:
        """
        Test φ^(k) = (-1)^k j_k(r) / r^k on both sides of the series radius.
        """
        r = np.linspace(0.05, 12.0, 80)
        assert_allclose(
            radial_kernel(k, r),
            (-1) ** k * spherical_jn(k, r) / r**k,
            rtol=1e-10,
            atol=1e-14,
        )

    def test_origin_values(self) -> None:
        """
        Test φ^(k)(0) = (-1)^k / (2k + 1)!!.
        """
        kernels = radial_kernels(3, 0.0)
        assert_allclose(kernels, [1.0, -1 / 3, 1 / 15, -1 / 105], rtol=1e-14)

    def test_kernel_is_derivative_in_s(self) -> None:
        """
        Test φ^(k+1) = dφ^(k)/ds with s = r^2 / 2.
        """
        r = np.linspace(0.3, 6.0, 30)
        step = 1e-5
        s = r**2 / 2
        upper = radial_kernels(2, np.sqrt(2 * (s + step)))
        lower = radial_kernels(2, np.sqrt(2 * (s - step)))
        assert_allclose(
            (upper[1] - lower[1]) / (2 * step),
            radial_kernels(2, r)[2],
            atol=1e-8,
        )


class TestRadialDerivativeTensor:
    def test_order_zero_is_kernel(self) -> None:
        """
        Test the order-0 tensor is the kernel itself.
        """
        y = np.array([[0.3, -1.2, 2.0], [0.0, 0.0, 0.0]])
        assert_allclose(
            radial_derivative_tensor(0, y, 0),
            np.sinc(np.linalg.norm(y, axis=-1) / np.pi),
        )

    def test_gradient_vanishes_at_origin(self) -> None:
        """
        Test the gradient of j_0(|y|) is zero at the origin.
        """
        gradient = radial_derivative_tensor(0, np.zeros((1, 3)), 1)
        assert_allclose(gradient, 0.0, atol=1e-16)

    def test_helmholtz_trace(self) -> None:
        """
        Test the Laplacian of j_0(|y|) equals -j_0(|y|).
        """
        rng = np.random.default_rng(3)
        y = rng.uniform(-3.0, 3.0, (50, 3))
        hessian = radial_derivative_tensor(0, y, 2)
        value = radial_derivative_tensor(0, y, 0)
        laplacian = np.trace(hessian, axis1=-2, axis2=-1)
        assert_allclose(laplacian, -value, atol=1e-13)

    @pytest.mark.parametrize("k0,order", [(0, 1), (0, 3), (2, 2), (1, 4)])
    def test_matches_finite_differences(self, k0: int, order: int) -> None:
        """
        Test each order against central differences of the previous order.
        """
        rng = np.random.default_rng(order)
        y = rng.uniform(-2.0, 2.0, (20, 3))
        step = 1e-5
        tensor = radial_derivative_tensor(k0, y, order)
        for axis in range(3):
            shift = np.zeros(3)
            shift[axis] = step
            difference = (
                radial_derivative_tensor(k0, y + shift, order - 1)
                - radial_derivative_tensor(k0, y - shift, order - 1)
            ) / (2 * step)
            assert_allclose(tensor[..., axis], difference, atol=1e-7)

    def test_tensor_is_symmetric(self) -> None:
        """
        Test mixed partials do not depend on the differentiation order.
        """
        y = np.array([[0.4, 1.1, -0.7]])
        tensor = radial_derivative_tensor(1, y, 3)
        assert_allclose(tensor, np.transpose(tensor, (0, 3, 1, 2)))
        assert_allclose(tensor, np.transpose(tensor, (0, 2, 1, 3)))
