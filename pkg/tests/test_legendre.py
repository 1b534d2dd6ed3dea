"""Bregman-geometry primitives: worked examples plus sampled identities."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from bregopt.legendre import (
    DomainError,
    Euclidean,
    NegEntropy,
    ScalarPower,
    ScalarQuartic,
    bregman_distance,
    combine_dual,
    four_point_residual,
    grad,
    grad_conj,
    three_point_residual,
    total_convexity_modulus,
    v_fn,
)

EUC1 = Euclidean(1)
EUC2 = Euclidean(2)
QUARTIC = ScalarQuartic()
POWER3 = ScalarPower(3.0)
ENTROPY = NegEntropy(2)

ALL_1D = [EUC1, QUARTIC, POWER3]


def fd_gradient(f, x, h=1e-6):
    """Central finite differences, the independent oracle for grad."""
    x = np.asarray(x, dtype=float)
    g = np.zeros_like(x)
    for i in range(len(x)):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (f.value(x + e) - f.value(x - e)) / (2 * h)
    return g


def invert_gradient_1d(f, u, bracket=10.0):
    """Root-find grad f(x) = u, the oracle for grad_conj in 1-D."""
    fn = lambda t: f.gradient(np.array([t]))[0] - u
    lo, hi = -bracket, bracket
    while fn(lo) > 0:
        lo *= 2
    while fn(hi) < 0:
        hi *= 2
    return brentq(fn, lo, hi, xtol=1e-14)


class TestGrad:
    def test_euclidean_identity(self):
        assert np.allclose(grad(EUC2, [3.0, -1.0]), [3.0, -1.0])

    def test_quartic(self):
        # d/dx x^4/4 = x^3; cross-check by finite differences
        assert grad(QUARTIC, [2.0])[0] == pytest.approx(8.0, abs=1e-12)
        assert grad(QUARTIC, [2.0])[0] == pytest.approx(fd_gradient(QUARTIC, [2.0])[0], abs=1e-4)

    def test_power3(self):
        assert grad(POWER3, [-2.0])[0] == pytest.approx(-4.0, abs=1e-12)
        assert grad(POWER3, [-2.0])[0] == pytest.approx(fd_gradient(POWER3, [-2.0])[0], abs=1e-4)

    def test_entropy_domain_rejected(self):
        with pytest.raises(DomainError):
            grad(ENTROPY, [1.0, -0.5])

    def test_nan_rejected(self):
        with pytest.raises(DomainError):
            grad(EUC1, [np.nan])


class TestGradConj:
    def test_euclidean_self_inverse(self):
        assert np.allclose(grad_conj(EUC2, [3.0, -1.0]), [3.0, -1.0])

    def test_quartic_cube_root(self):
        assert grad_conj(QUARTIC, [8.0])[0] == pytest.approx(2.0, abs=1e-12)
        assert grad_conj(QUARTIC, [8.0])[0] == pytest.approx(
            invert_gradient_1d(QUARTIC, 8.0), abs=1e-10
        )

    def test_power3(self):
        assert grad_conj(POWER3, [-4.0])[0] == pytest.approx(-2.0, abs=1e-12)
        assert grad_conj(POWER3, [-4.0])[0] == pytest.approx(
            invert_gradient_1d(POWER3, -4.0), abs=1e-10
        )

    @pytest.mark.parametrize("f", ALL_1D + [ENTROPY])
    def test_round_trip(self, f):
        rng = np.random.default_rng(1)
        for _ in range(1000):
            x = 0.1 + 2.0 * rng.random(f.dim) if f is ENTROPY else -2.0 + 4.0 * rng.random(f.dim)
            back = grad_conj(f, grad(f, x))
            assert np.linalg.norm(back - x) <= 1e-9 * (1.0 + np.linalg.norm(x))


class TestBregmanDistance:
    def test_euclidean_scalar(self):
        assert bregman_distance(EUC1, [3.0], [1.0]) == pytest.approx(2.0, abs=1e-12)

    @pytest.mark.parametrize("f", ALL_1D)
    def test_zero_at_equal_points(self, f):
        assert bregman_distance(f, [0.7], [0.7]) == pytest.approx(0.0, abs=1e-14)

    def test_quartic_value(self):
        # 2^4/4 - 1/4 - 1*(2-1) = 2.75
        assert bregman_distance(QUARTIC, [2.0], [1.0]) == pytest.approx(2.75, abs=1e-12)

    @pytest.mark.parametrize("f", ALL_1D)
    def test_nonnegativity_and_separation(self, f):
        rng = np.random.default_rng(2)
        for _ in range(1000):
            x, y = -2.0 + 4.0 * rng.random(1), -2.0 + 4.0 * rng.random(1)
            d = bregman_distance(f, x, y)
            assert d >= -1e-12
            if np.linalg.norm(x - y) > 1e-9:
                assert d > 1e-12


class TestVfn:
    def test_gradient_point(self):
        assert v_fn(EUC1, [1.0], [1.0]) == pytest.approx(0.0, abs=1e-14)

    def test_euclidean_value(self):
        assert v_fn(EUC1, [3.0], [1.0]) == pytest.approx(2.0, abs=1e-12)

    def test_quartic_matches_distance(self):
        expect = bregman_distance(QUARTIC, [2.0], grad_conj(QUARTIC, [1.0]))
        assert v_fn(QUARTIC, [2.0], [1.0]) == pytest.approx(expect, abs=1e-12)
        assert expect == pytest.approx(2.75, abs=1e-12)

    @pytest.mark.parametrize("f", ALL_1D)
    def test_identity_sampled(self, f):
        rng = np.random.default_rng(3)
        for _ in range(200):
            x = -2.0 + 4.0 * rng.random(1)
            ustar = grad(f, -2.0 + 4.0 * rng.random(1))
            assert v_fn(f, x, ustar) == pytest.approx(
                bregman_distance(f, x, grad_conj(f, ustar)), abs=1e-9
            )

    @pytest.mark.parametrize("f", ALL_1D)
    def test_subdifferential_inequality(self, f):
        rng = np.random.default_rng(4)
        for _ in range(200):
            x = -2.0 + 4.0 * rng.random(1)
            ustar = grad(f, -2.0 + 4.0 * rng.random(1))
            ystar = rng.standard_normal(1)
            slack = (
                v_fn(f, x, ustar + ystar)
                - v_fn(f, x, ustar)
                - float(np.dot(ystar, grad_conj(f, ustar) - x))
            )
            assert slack >= -1e-9


class TestCombineDual:
    def test_euclidean_mean(self):
        assert combine_dual(EUC1, [0.5, 0.5], [[2.0], [4.0]])[0] == pytest.approx(3.0, abs=1e-12)

    def test_singleton(self):
        assert combine_dual(QUARTIC, [1.0], [[0.37]])[0] == pytest.approx(0.37, abs=1e-12)

    def test_quartic_cube_root(self):
        # grad f(1) + grad f(2) weighted: 0.5*1 + 0.5*8 = 4.5; inverse is cbrt
        got = combine_dual(QUARTIC, [0.5, 0.5], [[1.0], [2.0]])[0]
        assert got == pytest.approx(invert_gradient_1d(QUARTIC, 4.5), abs=1e-10)
        assert got == pytest.approx(1.6510, abs=1e-4)

    def test_bad_weights(self):
        with pytest.raises(ValueError):
            combine_dual(EUC1, [0.6, 0.6], [[1.0], [2.0]])

    @pytest.mark.parametrize("f", ALL_1D)
    def test_distance_bound(self, f):
        rng = np.random.default_rng(5)
        for _ in range(200):
            w = rng.random(3) + 0.05
            w /= w.sum()
            xs = [-2.0 + 4.0 * rng.random(1) for _ in range(3)]
            zbar = combine_dual(f, w, xs)
            z = -2.0 + 4.0 * rng.random(1)
            bound = sum(t * bregman_distance(f, z, xi) for t, xi in zip(w, xs))
            assert bregman_distance(f, z, zbar) <= bound + 1e-9


class TestPointIdentities:
    @pytest.mark.parametrize("f", ALL_1D)
    def test_degenerate(self, f):
        assert three_point_residual(f, [0.5], [0.5], [0.5]) == pytest.approx(0.0, abs=1e-14)

    def test_euclidean_triple(self):
        assert three_point_residual(EUC1, [1.0], [2.0], [3.0]) <= 1e-12

    @pytest.mark.parametrize("f", ALL_1D + [EUC2, ENTROPY])
    def test_random(self, f):
        rng = np.random.default_rng(6)
        for _ in range(1000):
            if f is ENTROPY:
                pts = [0.1 + 2.0 * rng.random(f.dim) for _ in range(4)]
            else:
                pts = [-2.0 + 4.0 * rng.random(f.dim) for _ in range(4)]
            x, y, z, w = pts
            assert three_point_residual(f, x, y, z) <= 1e-9
            assert four_point_residual(f, y, w, x, z) <= 1e-9

    @given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2))
    @settings(max_examples=200, deadline=None)
    def test_three_point_hypothesis(self, x, y, z):
        assert three_point_residual(QUARTIC, [x], [y], [z]) <= 1e-9

    @given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2))
    @settings(max_examples=200, deadline=None)
    def test_four_point_hypothesis(self, y, w, x, z):
        assert four_point_residual(POWER3, [y], [w], [x], [z]) <= 1e-9


class TestTotalConvexity:
    def test_euclidean_exact(self):
        assert total_convexity_modulus(EUC1, [0.3], 1.0) == pytest.approx(0.5, abs=1e-12)
        assert total_convexity_modulus(EUC2, [0.3, -1.0], 2.0) == pytest.approx(2.0, abs=1e-12)

    def test_quartic_two_point_sphere(self):
        expect = min(
            bregman_distance(QUARTIC, [1.5], [1.0]), bregman_distance(QUARTIC, [0.5], [1.0])
        )
        assert total_convexity_modulus(QUARTIC, [1.0], 0.5) == pytest.approx(expect, abs=1e-12)

    @pytest.mark.parametrize("f", ALL_1D)
    def test_positive_for_strictly_convex(self, f):
        assert total_convexity_modulus(f, [1.0], 0.25) > 0.0
