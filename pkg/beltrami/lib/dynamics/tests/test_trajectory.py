import numpy as np
import pytest
from numpy.testing import assert_allclose

from beltrami import TORUS_PERIOD
from beltrami.errors.beltrami_errors import PreconditionError
from beltrami.lib.dynamics.trajectory import (
    trace_field_line,
    trace_field_lines,
    wrap_torus,
)
from beltrami.lib.r3_fields.fields import ABCField
from beltrami.lib.s3.beltrami_field import ConstantFrameField
from beltrami.lib.s3.hopf import hopf_flow
from beltrami.lib.s3.tests.fixtures import lifted_field, random_sphere_points
from beltrami.lib.t3.torus_field import TorusBeltramiField


def single_pair(degree: int = 3) -> TorusBeltramiField:
    amplitude = np.array([0.0, 0.5, 0.5j])
    return TorusBeltramiField(
        degree**2,
        [[degree, 0, 0], [-degree, 0, 0]],
        [amplitude, np.conj(amplitude)],
    )


class TestSphere:
    def test_hopf_orbit_closes(self) -> None:
        """
        Test the h_1 orbit through (0, 0, 0, 1) returns after 2π.
        """
        seed = np.array([0.0, 0.0, 0.0, 1.0])
        trajectory = trace_field_line(
            ConstantFrameField([1, 0, 0]), seed, 2 * np.pi, tol=1e-10
        )
        assert trajectory.manifold == "sphere"
        assert trajectory.duration == 2 * np.pi
        assert np.linalg.norm(trajectory.positions[-1] - seed) <= 1e-8

    def test_matches_exact_flow(self) -> None:
        """
        Test samples and dense output follow cos t p + sin t H_1 p.
        """
        seed = random_sphere_points(1, seed=3)[0]
        trajectory = trace_field_line(
            ConstantFrameField([1, 0, 0]), seed, 3.0, tol=1e-10
        )
        exact = hopf_flow(1, seed[None], trajectory.times)
        assert_allclose(trajectory.positions, exact, atol=1e-8)
        assert_allclose(
            trajectory.at(1.234), hopf_flow(1, seed[None], 1.234)[0], atol=1e-6
        )

    def test_stays_on_sphere(self) -> None:
        """
        Test samples of a lifted field stay on S^3 with increasing times.
        """
        trajectory = trace_field_line(
            lifted_field(30), [0.01, 0.0, 0.02, 1.0], 0.5, tol=1e-8
        )
        assert_allclose(
            np.linalg.norm(trajectory.positions, axis=-1), 1.0, atol=1e-9
        )
        assert np.all(np.diff(trajectory.times) > 0)
        assert trajectory.windings is None
        assert trajectory.header() == ["t", "x1", "x2", "x3", "x4"]


class TestTorus:
    def test_wrapping_and_windings(self) -> None:
        """
        Test samples stay in [0, 2π)^3 and unwrap with integer windings.
        """
        seed = np.array([0.1, 0.2, 0.3])
        trajectory = trace_field_line(single_pair(), seed, 100.0, tol=1e-9)
        assert trajectory.manifold == "torus"
        assert np.all(trajectory.positions >= 0.0)
        assert np.all(trajectory.positions < TORUS_PERIOD)
        assert trajectory.windings.dtype == np.int64
        # u = (0, cos 3x_1, -sin 3x_1) is constant along the line
        velocity = np.array([0.0, np.cos(0.3), -np.sin(0.3)])
        expected = seed + trajectory.times[:, None] * velocity
        assert_allclose(trajectory.unwrapped(), expected, atol=1e-9)
        assert np.any(trajectory.windings[-1] != 0)
        assert trajectory.header()[-3:] == ["w1", "w2", "w3"]
        assert len(trajectory.rows()[0]) == 7

    def test_zero_field_is_stationary(self) -> None:
        """
        Test the empty mode sum leaves the seed in place.
        """
        field = TorusBeltramiField(9, np.zeros((0, 3)), np.zeros((0, 3)))
        trajectory = trace_field_line(field, [1.0, 2.0, 3.0], 10.0)
        assert trajectory.completed
        assert_allclose(trajectory.positions, np.array([[1.0, 2.0, 3.0]]))

    def test_wrap_edge(self) -> None:
        """
        Test values just below a multiple of 2π never wrap onto 2π itself.
        """
        wrapped, windings = wrap_torus(np.array([[-1e-17, TORUS_PERIOD, 0.0]]))
        assert np.all(wrapped < TORUS_PERIOD)
        assert_allclose(
            wrapped + TORUS_PERIOD * windings,
            [[-1e-17, TORUS_PERIOD, 0.0]],
            atol=1e-15,
        )


class TestEuclidean:
    def test_batch_matches_single(self) -> None:
        """
        Test batched seeds trace the same lines as one by one.
        """
        field = ABCField()
        seeds = np.random.default_rng(0).uniform(0, 1, (3, 3))
        batch = trace_field_lines(field, seeds, 2.0, tol=1e-9)
        for seed, trajectory in zip(seeds, batch):
            single = trace_field_line(field, seed, 2.0, tol=1e-9)
            assert_allclose(trajectory.positions, single.positions, atol=1e-12)

    def test_abc_straight_line(self) -> None:
        """
        Test the ABC field with B = C = 0 moves along the constant vector
        (sin x_3, cos x_3, 0).
        """
        seed = np.array([0.3, 0.2, 0.1])
        trajectory = trace_field_line(ABCField(1.0, 0.0, 0.0), seed, 1.0)
        velocity = np.array([np.sin(0.1), np.cos(0.1), 0.0])
        expected = seed + trajectory.times[:, None] * velocity
        assert_allclose(trajectory.positions, expected, atol=1e-12)

    def test_invalid_arguments(self) -> None:
        """
        Test negative durations and unknown manifolds are refused.
        """
        with pytest.raises(PreconditionError):
            trace_field_line(ABCField(), [0, 0, 0], -1.0)
        with pytest.raises(PreconditionError):
            trace_field_line(ABCField(), [0, 0, 0], 1.0, manifold="klein")
        with pytest.raises(PreconditionError):
            trace_field_line(lambda x: x, [0, 0, 0], 1.0)

    def test_dense_output_bounds(self) -> None:
        """
        Test dense output refuses times outside the trace.
        """
        trajectory = trace_field_line(ABCField(), [0, 0, 0], 1.0)
        with pytest.raises(PreconditionError):
            trajectory.at(1.5)
        assert_allclose(trajectory.at(1.0), trajectory.positions[-1])
