"""Regions, halfspace cuts, and Bregman projections."""

import numpy as np
import pytest

from bregopt.legendre import Euclidean, ScalarQuartic, bregman_distance
from bregopt.regions import (
    BaseSet,
    EmptyRegionError,
    Halfspace,
    Region,
    RegionError,
    bregman_project,
    cut_from_bregman_vi,
    cut_from_distance_test,
)

EUC1 = Euclidean(1)
EUC2 = Euclidean(2)
QUARTIC = ScalarQuartic()


class TestHalfspace:
    def test_satisfied(self):
        h = Halfspace(np.array([1.0, 0.0]), 0.5)
        assert h.satisfied(np.array([0.5, 9.0]))
        assert not h.satisfied(np.array([0.6, 0.0]))

    def test_degenerate_empty_rejected(self):
        with pytest.raises(RegionError):
            Halfspace(np.array([0.0]), -1.0)

    def test_degenerate_vacuous_ok(self):
        h = Halfspace(np.array([0.0]), 0.0)
        assert h.satisfied(np.array([42.0]))


class TestBaseSet:
    def test_kinds(self):
        assert BaseSet.interval(-1.5, 0.0).kind == "interval"
        assert BaseSet.box([-1, -1], [1, 1]).kind == "box"
        assert BaseSet.whole_space(3).kind == "whole-space"

    def test_contains_and_clip(self):
        c = BaseSet.interval(-1.5, 0.0)
        assert c.contains([-1.0])
        assert not c.contains([0.1])
        assert c.clip([-2.0])[0] == -1.5

    def test_empty_rejected(self):
        with pytest.raises(RegionError):
            BaseSet.interval(1.0, 0.0)


class TestRegionFold:
    def test_cut_folding_1d(self):
        r = Region(BaseSet.interval(-2.0, 2.0))
        r = r.with_cut(Halfspace(np.array([1.0]), 1.0))  # z <= 1
        r = r.with_cut(Halfspace(np.array([-1.0]), 0.5))  # z >= -0.5
        assert r.fold == (-0.5, 1.0)
        assert r.cuts == ()
        assert r.contains([0.0]) and not r.contains([1.5])

    def test_fold_matches_explicit_membership(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            region = Region(BaseSet.interval(-2.0, 2.0))
            cuts = []
            for _ in range(8):
                a, b = rng.standard_normal(), rng.standard_normal()
                if abs(a) < 1e-3:
                    continue
                h = Halfspace(np.array([a]), b)
                cuts.append(h)
                region = region.with_cut(h)
            for z in np.linspace(-2.5, 2.5, 61):
                explicit = (-2.0 <= z <= 2.0) and all(
                    h.satisfied(np.array([z]), 0.0) for h in cuts
                )
                assert region.contains([z], 0.0) == explicit

    def test_empty_detection(self):
        r = Region(BaseSet.interval(-2.0, 2.0))
        r = r.with_cut(Halfspace(np.array([1.0]), -1.0))  # z <= -1
        r = r.with_cut(Halfspace(np.array([-1.0]), -1.0))  # z >= 1
        assert r.is_empty()
        with pytest.raises(EmptyRegionError):
            bregman_project(EUC1, r, [0.0])

    def test_intersect(self):
        a = Region(BaseSet.interval(-2.0, 2.0)).with_cut(Halfspace(np.array([1.0]), 1.0))
        b = Region(BaseSet.interval(-1.0, 3.0)).with_cut(Halfspace(np.array([-1.0]), 0.0))
        assert a.intersect(b).fold == (0.0, 1.0)


class TestDistanceTestCut:
    def test_euclidean_values(self):
        # x0 = x_n = -1, u = -0.4455556, alpha = 1/3
        h = cut_from_distance_test(EUC1, [-0.4455556], [-1.0], [-1.0], 1.0 / 3.0)
        assert h.a[0] == pytest.approx(-0.5544444, abs=1e-9)
        assert h.b == pytest.approx(0.5 * (1.0 - 0.4455556**2), abs=1e-9)

    def test_vacuous_when_u_equals_iterates(self):
        h = cut_from_distance_test(EUC1, [-0.7], [-0.7], [-0.7], 0.5)
        assert h.a[0] == 0.0 and h.b >= 0.0

    def test_2d_example(self):
        h = cut_from_distance_test(EUC2, [0.0, 0.0], [1.0, 0.0], [0.0, 1.0], 0.5)
        assert np.allclose(h.a, [0.5, 0.5])
        assert h.b == pytest.approx(0.5, abs=1e-12)

    @pytest.mark.parametrize("f", [EUC1, QUARTIC])
    def test_halfspace_matches_distance_inequality(self, f):
        # membership in the halfspace must agree with the nonlinear
        # distance comparison it linearizes, for any Legendre f
        rng = np.random.default_rng(8)
        for _ in range(200):
            x0, xn, u = (-2.0 + 4.0 * rng.random(1) for _ in range(3))
            alpha = 0.05 + 0.9 * rng.random()
            h = cut_from_distance_test(f, u, x0, xn, alpha)
            z = -2.0 + 4.0 * rng.random(1)
            lhs = bregman_distance(f, z, u)
            rhs = alpha * bregman_distance(f, z, x0) + (1 - alpha) * bregman_distance(f, z, xn)
            assert h.satisfied(z, 1e-10) == (lhs <= rhs + 1e-10)

    def test_alpha_range_enforced(self):
        with pytest.raises(ValueError):
            cut_from_distance_test(EUC1, [0.0], [1.0], [1.0], 1.5)


class TestBregmanVICut:
    def test_euclidean_values(self):
        h = cut_from_bregman_vi(EUC1, [-1.0], [-0.9])
        assert h.a[0] == pytest.approx(-0.1, abs=1e-12)
        assert h.b == pytest.approx(0.09, abs=1e-12)

    def test_quartic_values(self):
        # a = grad f(-1) - grad f(-0.5) = -1 + 0.125 = -0.875, b = a * (-0.5)
        h = cut_from_bregman_vi(QUARTIC, [-1.0], [-0.5])
        assert h.a[0] == pytest.approx(-0.875, abs=1e-12)
        assert h.b == pytest.approx(0.4375, abs=1e-12)

    @pytest.mark.parametrize("f", [EUC1, QUARTIC])
    def test_contains_xn_boundary(self, f):
        h = cut_from_bregman_vi(f, [-1.0], [-0.5])
        assert h.satisfied(np.array([-0.5]), 1e-12)


class TestProjection:
    @pytest.mark.parametrize("f", [EUC1, QUARTIC])
    def test_interval_clamp(self, f):
        r = Region(BaseSet.interval(-1.5, 0.0))
        assert bregman_project(f, r, [-2.0])[0] == -1.5
        assert bregman_project(f, r, [0.5])[0] == 0.0
        assert bregman_project(f, r, [-0.7])[0] == -0.7

    def test_folded_region(self):
        r = Region(BaseSet.interval(-1.5, 0.0)).with_cut(
            Halfspace(np.array([-1.0]), 0.7227778)
        )
        assert bregman_project(EUC1, r, [-1.0])[0] == pytest.approx(-0.7227778, abs=1e-12)

    def test_2d_single_halfspace(self):
        r = Region(BaseSet.whole_space(2)).with_cut(Halfspace(np.array([1.0, 0.0]), 0.0))
        z = bregman_project(EUC2, r, [1.0, 1.0])
        assert np.allclose(z, [0.0, 1.0], atol=1e-9)

    def test_2d_dykstra_box_and_cut(self):
        r = Region(BaseSet.box([-1, -1], [1, 1])).with_cut(
            Halfspace(np.array([1.0, 1.0]), 0.0)
        )
        z = bregman_project(EUC2, r, [1.0, 1.0])
        # symmetric problem: projection onto the line x + y = 0 inside the box
        assert np.allclose(z, [0.0, 0.0], atol=1e-8)
        assert r.contains(z, 1e-8)

    @pytest.mark.parametrize("f", [EUC1, QUARTIC])
    def test_variational_characterization(self, f):
        rng = np.random.default_rng(9)
        r = Region(BaseSet.interval(-1.0, 1.0))
        for _ in range(100):
            x = np.array([-3.0 + 6.0 * rng.random()])
            z = bregman_project(f, r, x)
            for _ in range(10):
                y = np.array([-1.0 + 2.0 * rng.random()])
                inner = float(np.dot(f.gradient(x) - f.gradient(z), z - y))
                assert inner >= -1e-10

    @pytest.mark.parametrize("f", [EUC1, QUARTIC])
    def test_pythagoras(self, f):
        rng = np.random.default_rng(10)
        r = Region(BaseSet.interval(-1.0, 1.0))
        for _ in range(100):
            x = np.array([-3.0 + 6.0 * rng.random()])
            y = np.array([-1.0 + 2.0 * rng.random()])
            z = bregman_project(f, r, x)
            gap = (
                bregman_distance(f, y, z)
                + bregman_distance(f, z, x)
                - bregman_distance(f, y, x)
            )
            assert gap <= 1e-9

    def test_idempotence(self):
        r = Region(BaseSet.interval(-1.0, 1.0))
        z = bregman_project(QUARTIC, r, [0.3])
        assert z[0] == 0.3
