"""Feasible regions: base boxes, halfspace cuts, and Bregman projections.

A Region is a base box/interval intersected with accumulated halfspace
cuts.  In 1-D every cut folds into running interval bounds (O(1) memory,
exact), which is what makes million-iteration runs cheap.  In d > 1 cuts
are kept explicitly and projections are iterative.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .legendre import Euclidean, as_vector, bregman_distance, grad

__all__ = [
    "RegionError",
    "EmptyRegionError",
    "ProjectionError",
    "Halfspace",
    "BaseSet",
    "Region",
    "cut_from_distance_test",
    "cut_from_bregman_vi",
    "bregman_project",
]

FOLD_TOL = 0.0  # 1-D folds are exact; no slack is added


class RegionError(ValueError):
    pass


class EmptyRegionError(RegionError):
    """Region proved empty; carries the conflicting bounds."""


class ProjectionError(RuntimeError):
    """Iterative projection failed to reach its tolerance."""


@dataclass(frozen=True)
class Halfspace:
    """{z : <a, z> <= b}.  A zero coefficient vector must have b >= 0."""

    a: np.ndarray
    b: float

    def __post_init__(self):
        a = as_vector(self.a)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", float(self.b))
        if not np.isfinite(self.b):
            raise RegionError("halfspace offset must be finite")
        if np.all(a == 0.0) and self.b < 0.0:
            raise RegionError("degenerate halfspace 0.z <= %g is empty" % self.b)

    def satisfied(self, z, tol=0.0):
        return float(np.dot(self.a, z)) <= self.b + tol

    @property
    def dim(self):
        return self.a.shape[0]


@dataclass(frozen=True)
class BaseSet:
    """Axis-aligned box [lo, hi] (componentwise); +-inf bounds allowed.

    Covers the three base-set kinds: interval (d = 1), box, and whole
    space (all bounds infinite).
    """

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lo, dtype=float))
        hi = np.atleast_1d(np.asarray(self.hi, dtype=float))
        if lo.shape != hi.shape or lo.ndim != 1:
            raise RegionError("lo/hi must be 1-D arrays of equal length")
        if np.any(lo > hi):
            raise RegionError("empty base set: lo > hi on some axis")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def interval(cls, lo, hi):
        return cls(np.array([lo]), np.array([hi]))

    @classmethod
    def box(cls, lo, hi):
        return cls(np.asarray(lo, dtype=float), np.asarray(hi, dtype=float))

    @classmethod
    def whole_space(cls, dim):
        return cls(np.full(dim, -np.inf), np.full(dim, np.inf))

    @property
    def dim(self):
        return self.lo.shape[0]

    @property
    def kind(self):
        if np.all(np.isinf(self.lo)) and np.all(np.isinf(self.hi)):
            return "whole-space"
        return "interval" if self.dim == 1 else "box"

    def contains(self, z, tol=0.0):
        z = as_vector(z)
        return bool(np.all(z >= self.lo - tol) and np.all(z <= self.hi + tol))

    def clip(self, z):
        return np.clip(as_vector(z), self.lo, self.hi)


@dataclass(frozen=True)
class Region:
    """Base set intersected with halfspace cuts.

    Immutable: with_cut returns a new region.  In 1-D the cuts are folded
    into (fold_lo, fold_hi) so the cut list stays empty no matter how many
    cuts are applied.
    """

    base: BaseSet
    cuts: tuple = field(default_factory=tuple)
    fold_lo: float = None
    fold_hi: float = None
    max_cuts: int = 100_000

    def __post_init__(self):
        if self.base.dim == 1:
            if self.fold_lo is None:
                object.__setattr__(self, "fold_lo", float(self.base.lo[0]))
            if self.fold_hi is None:
                object.__setattr__(self, "fold_hi", float(self.base.hi[0]))

    @property
    def dim(self):
        return self.base.dim

    @property
    def fold(self):
        """Folded interval bounds (1-D only)."""
        if self.dim != 1:
            raise RegionError("fold is only defined in 1-D")
        return (self.fold_lo, self.fold_hi)

    def is_empty(self):
        if self.dim == 1:
            return self.fold_lo > self.fold_hi
        return False  # d > 1: emptiness is detected by the projection probe

    def with_cut(self, h):
        if h.dim != self.dim:
            raise RegionError("cut dimension mismatch")
        if self.dim == 1:
            a, b = float(h.a[0]), h.b
            lo, hi = self.fold_lo, self.fold_hi
            if a > 0.0:
                hi = min(hi, b / a)
            elif a < 0.0:
                lo = max(lo, b / a)
            # a == 0: constructor already rejected b < 0, cut is vacuous
            return Region(self.base, self.cuts, lo, hi, self.max_cuts)
        if len(self.cuts) + 1 > self.max_cuts:
            raise RegionError("cut cap %d exceeded" % self.max_cuts)
        return Region(self.base, self.cuts + (h,), None, None, self.max_cuts)

    def contains(self, z, tol=1e-12):
        z = as_vector(z)
        if self.dim == 1:
            return bool(self.fold_lo - tol <= z[0] <= self.fold_hi + tol)
        if not self.base.contains(z, tol):
            return False
        return all(c.satisfied(z, tol) for c in self.cuts)

    def intersect(self, other):
        if other.base.dim != self.dim:
            raise RegionError("region dimension mismatch")
        if self.dim == 1:
            lo = max(self.fold_lo, other.fold_lo, float(other.base.lo[0]))
            hi = min(self.fold_hi, other.fold_hi, float(other.base.hi[0]))
            return Region(self.base, (), lo, hi, self.max_cuts)
        base = BaseSet(
            np.maximum(self.base.lo, other.base.lo),
            np.minimum(self.base.hi, other.base.hi),
        )
        return Region(base, self.cuts + other.cuts, None, None, self.max_cuts)


def cut_from_distance_test(f, u_n, x0, x_n, alpha_n):
    """Halfspace form of {z : D_f(z,u) <= a D_f(z,x0) + (1-a) D_f(z,x_n)}.

    The f(z) terms cancel because the distance coefficients sum to one,
    so the set is exactly linear in z for any Legendre f.
    """
    if not 0.0 < alpha_n < 1.0:
        raise ValueError("alpha_n must lie in (0,1), got %r" % alpha_n)
    u = f.check_primal(u_n)
    p0 = f.check_primal(x0)
    pn = f.check_primal(x_n)
    g0, gn, gu = f.gradient(p0), f.gradient(pn), f.gradient(u)
    a = alpha_n * g0 + (1.0 - alpha_n) * gn - gu
    b = (
        alpha_n * (float(np.dot(g0, p0)) - f.value(p0))
        + (1.0 - alpha_n) * (float(np.dot(gn, pn)) - f.value(pn))
        - (float(np.dot(gu, u)) - f.value(u))
    )
    if np.all(a == 0.0) and b < 0.0:
        b = 0.0  # exact-cancellation roundoff; the inequality is vacuous
    return Halfspace(a, b)


def cut_from_bregman_vi(f, x0, x_n):
    """Halfspace {z : <grad f(x0) - grad f(x_n), z - x_n> <= 0}."""
    p0 = f.check_primal(x0)
    pn = f.check_primal(x_n)
    a = f.gradient(p0) - f.gradient(pn)
    return Halfspace(a, float(np.dot(a, pn)))


# ---------------------------------------------------------------------------
# Projections


def _project_halfspace_euclidean(h, x):
    viol = float(np.dot(h.a, x)) - h.b
    if viol <= 0.0:
        return x
    nsq = float(np.dot(h.a, h.a))
    if nsq == 0.0:
        return x
    return x - (viol / nsq) * h.a


def _dykstra(region, x, tol=1e-12, max_cycles=100_000):
    """Dykstra's cyclic projection onto box-and-halfspace intersections (euclidean)."""
    sets = [region.base] + list(region.cuts)
    z = as_vector(x).copy()
    incs = [np.zeros_like(z) for _ in sets]
    for _ in range(max_cycles):
        z_prev = z.copy()
        for i, s in enumerate(sets):
            y = z + incs[i]
            if isinstance(s, BaseSet):
                z = s.clip(y)
            else:
                z = _project_halfspace_euclidean(s, y)
            incs[i] = y - z
        if np.max(np.abs(z - z_prev)) < tol:
            if region.contains(z, 1e-8):
                return z
            raise EmptyRegionError(
                "cyclic projection stalled at an infeasible point; region is likely empty"
            )
    raise ProjectionError("Dykstra did not converge within %d cycles" % max_cycles)


def _bregman_project_halfspace(f, h, x):
    """Bregman projection of x onto a single halfspace via dual root-find."""
    gx = f.gradient(x)
    if h.satisfied(x, 0.0):
        return x

    def resid(lam):
        z = f.conj_gradient(gx - lam * h.a)
        return float(np.dot(h.a, z)) - h.b

    lam_hi = 1.0
    for _ in range(200):
        if resid(lam_hi) <= 0.0:
            break
        lam_hi *= 2.0
    else:
        raise ProjectionError("halfspace dual bracket expansion failed")
    lam = brentq(resid, 0.0, lam_hi, xtol=1e-15, rtol=8.9e-16)
    return f.conj_gradient(gx - lam * h.a)


def _bregman_cyclic(f, region, x, tol=1e-12, max_cycles=100_000):
    """Cyclic Bregman projections in d > 1 for non-euclidean f.

    Converges to a feasible point; for a single active constraint it is
    the exact projection, otherwise an approximation (separable f assumed
    for the box clamp).
    """
    z = as_vector(x).copy()
    for _ in range(max_cycles):
        z_prev = z.copy()
        z = region.base.clip(z)
        for h in region.cuts:
            z = _bregman_project_halfspace(f, h, z)
        if np.max(np.abs(z - z_prev)) < tol:
            if region.contains(z, 1e-8):
                return z
            raise EmptyRegionError(
                "cyclic Bregman projection stalled infeasible; region is likely empty"
            )
    raise ProjectionError("cyclic Bregman projection did not converge")


def bregman_project(f, region, x):
    """proj^f_region(x): the unique minimizer of D_f(., x) over the region.

    1-D: exact monotone clamp onto the folded interval (D_f(., x) has
    derivative grad f(y) - grad f(x), strictly increasing through y = x).
    d > 1: Dykstra for euclidean f; cyclic Bregman projection otherwise.
    """
    xv = f.check_primal(x)
    if region.dim != xv.shape[0]:
        raise RegionError("point/region dimension mismatch")
    if region.dim == 1:
        lo, hi = region.fold
        if lo > hi:
            raise EmptyRegionError(
                "empty 1-D region: folded bounds [%r, %r]" % (lo, hi)
            )
        return np.array([min(max(xv[0], lo), hi)])
    if isinstance(f, Euclidean):
        return _dykstra(region, xv)
    return _bregman_cyclic(f, region, xv)
