"""Legendre function instances and Bregman-geometry primitives.

All computation lives in R^d with the dual space identified with R^d.
Every instance exposes the quadruple (f, grad f, f*, grad f*) in closed
form; grad f and grad f* are mutual inverses on the interiors of their
domains, which is what every identity in this module leans on.
"""

import numpy as np

__all__ = [
    "DomainError",
    "LegendreFunction",
    "Euclidean",
    "ScalarPower",
    "ScalarQuartic",
    "NegEntropy",
    "as_vector",
    "grad",
    "grad_conj",
    "bregman_distance",
    "v_fn",
    "combine_dual",
    "three_point_residual",
    "four_point_residual",
    "total_convexity_modulus",
]


class DomainError(ValueError):
    """Argument lies outside the (interior of the) required domain."""


def as_vector(x):
    """Coerce to a finite 1-D float array; scalars become length-1 vectors."""
    v = np.atleast_1d(np.asarray(x, dtype=float))
    if v.ndim != 1:
        raise ValueError("expected a scalar or 1-D vector, got shape %s" % (v.shape,))
    if not np.all(np.isfinite(v)):
        raise DomainError("vector has non-finite coordinates: %s" % v)
    return v


class LegendreFunction:
    """Convex Legendre function with closed-form conjugate machinery.

    Subclasses implement value/gradient and the conjugate pair; the
    Bregman-geometry operations below are generic over this interface.
    """

    kind = "abstract"
    dim = None

    def value(self, x):
        raise NotImplementedError

    def gradient(self, x):
        raise NotImplementedError

    def conj_value(self, u):
        raise NotImplementedError

    def conj_gradient(self, u):
        raise NotImplementedError

    def in_interior(self, x):
        """Is x in int(dom f)?  Default: everywhere."""
        return True

    def in_dual_interior(self, u):
        """Is u in int(dom f*)?  Default: everywhere."""
        return True

    def _check_dim(self, v):
        if self.dim is not None and v.shape[0] != self.dim:
            raise DomainError(
                "dimension mismatch: expected %d, got %d" % (self.dim, v.shape[0])
            )

    def check_primal(self, x, interior=True):
        v = as_vector(x)
        self._check_dim(v)
        if interior and not self.in_interior(v):
            raise DomainError("%s: point outside int(dom f): %s" % (self.kind, v))
        return v

    def check_dual(self, u):
        v = as_vector(u)
        self._check_dim(v)
        if not self.in_dual_interior(v):
            raise DomainError("%s: point outside int(dom f*): %s" % (self.kind, v))
        return v

    def __repr__(self):
        return "%s(dim=%s)" % (type(self).__name__, self.dim)


class Euclidean(LegendreFunction):
    """f(x) = ||x||^2 / 2; self-conjugate, gradient is the identity."""

    kind = "euclidean"

    def __init__(self, dim=1):
        if dim < 1:
            raise ValueError("dim must be >= 1")
        self.dim = dim

    def value(self, x):
        return 0.5 * float(np.dot(x, x))

    def gradient(self, x):
        return np.array(x, dtype=float)

    def conj_value(self, u):
        return 0.5 * float(np.dot(u, u))

    def conj_gradient(self, u):
        return np.array(u, dtype=float)


class ScalarPower(LegendreFunction):
    """f(x) = |x|^p / p on R (d = 1), p > 1.

    Conjugate is |u|^q / q with 1/p + 1/q = 1; both gradients are
    odd power maps and invert each other exactly.
    """

    kind = "scalar-power"
    dim = 1

    def __init__(self, p):
        if not p > 1:
            raise ValueError("exponent p must satisfy p > 1, got %r" % p)
        self.p = float(p)
        self.q = self.p / (self.p - 1.0)

    def value(self, x):
        return float(np.abs(x[0]) ** self.p / self.p)

    def gradient(self, x):
        t = x[0]
        return np.array([np.sign(t) * np.abs(t) ** (self.p - 1.0)])

    def conj_value(self, u):
        return float(np.abs(u[0]) ** self.q / self.q)

    def conj_gradient(self, u):
        t = u[0]
        return np.array([np.sign(t) * np.abs(t) ** (self.q - 1.0)])

    def __repr__(self):
        return "ScalarPower(p=%g)" % self.p


class ScalarQuartic(LegendreFunction):
    """f(x) = x^4 / 4 on R (d = 1); grad f* is the real cube root."""

    kind = "scalar-quartic"
    dim = 1

    def value(self, x):
        return float(x[0] ** 4 / 4.0)

    def gradient(self, x):
        return np.array([x[0] ** 3])

    def conj_value(self, u):
        # f*(u) = (3/4)|u|^{4/3}
        return float(0.75 * np.abs(u[0]) ** (4.0 / 3.0))

    def conj_gradient(self, u):
        return np.array([np.cbrt(u[0])])


class NegEntropy(LegendreFunction):
    """f(x) = sum(x log x - x) on the positive orthant; D_f is the KL divergence."""

    kind = "neg-entropy"

    def __init__(self, dim=1):
        if dim < 1:
            raise ValueError("dim must be >= 1")
        self.dim = dim

    def in_interior(self, x):
        return bool(np.all(x > 0.0))

    def value(self, x):
        if np.any(x < 0.0):
            raise DomainError("neg-entropy: negative coordinate")
        # x log x extends to 0 at x = 0
        with np.errstate(divide="ignore", invalid="ignore"):
            xlogx = np.where(x > 0.0, x * np.log(np.where(x > 0.0, x, 1.0)), 0.0)
        return float(np.sum(xlogx - x))

    def gradient(self, x):
        return np.log(x)

    def conj_value(self, u):
        return float(np.sum(np.exp(u)))

    def conj_gradient(self, u):
        return np.exp(u)


# ---------------------------------------------------------------------------
# Bregman-geometry operations


def grad(f, x):
    """Gradient of f at x; rejects points outside int(dom f)."""
    return f.gradient(f.check_primal(x))


def grad_conj(f, u):
    """Gradient of the conjugate f* at u; the inverse map of grad."""
    return f.conj_gradient(f.check_dual(u))


def bregman_distance(f, x, y):
    """D_f(x, y) = f(x) - f(y) - <grad f(y), x - y>; nonnegative, asymmetric."""
    xv = f.check_primal(x, interior=False)
    yv = f.check_primal(y)
    return f.value(xv) - f.value(yv) - float(np.dot(f.gradient(yv), xv - yv))


def v_fn(f, x, ustar):
    """V_f(x, u*) = f(x) - <u*, x> + f*(u*); equals D_f(x, grad_conj(u*))."""
    xv = f.check_primal(x, interior=False)
    uv = f.check_dual(ustar)
    return f.value(xv) - float(np.dot(uv, xv)) + f.conj_value(uv)


def combine_dual(f, weights, points):
    """Dual convex combination: grad f*( sum_i t_i grad f(x_i) ).

    Weights must lie in (0, 1] and sum to 1; the result zbar satisfies
    D_f(z, zbar) <= sum_i t_i D_f(z, x_i) for every z.
    """
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or len(w) == 0:
        raise ValueError("weights must be a nonempty 1-D sequence")
    if np.any(w <= 0.0) or np.any(w > 1.0):
        raise ValueError("weights must lie in (0, 1], got %s" % w)
    if abs(float(np.sum(w)) - 1.0) > 1e-12:
        raise ValueError("weights must sum to 1 within 1e-12, got sum %r" % float(np.sum(w)))
    if len(points) != len(w):
        raise ValueError("weights and points length mismatch")
    acc = None
    for t, p in zip(w, points):
        g = grad(f, p)
        acc = t * g if acc is None else acc + t * g
    return grad_conj(f, acc)


def three_point_residual(f, x, y, z):
    """|LHS - RHS| of D_f(x,y) + D_f(y,z) - D_f(x,z) = <grad f(z) - grad f(y), x - y>."""
    xv = f.check_primal(x, interior=False)
    yv = f.check_primal(y)
    zv = f.check_primal(z)
    lhs = (
        bregman_distance(f, xv, yv)
        + bregman_distance(f, yv, zv)
        - bregman_distance(f, xv, zv)
    )
    rhs = float(np.dot(f.gradient(zv) - f.gradient(yv), xv - yv))
    return abs(lhs - rhs)


def four_point_residual(f, y, w, x, z):
    """|LHS - RHS| of D_f(y,x) - D_f(y,z) - D_f(w,x) + D_f(w,z) = <grad f(z) - grad f(x), y - w>."""
    yv = f.check_primal(y, interior=False)
    wv = f.check_primal(w, interior=False)
    xv = f.check_primal(x)
    zv = f.check_primal(z)
    lhs = (
        bregman_distance(f, yv, xv)
        - bregman_distance(f, yv, zv)
        - bregman_distance(f, wv, xv)
        + bregman_distance(f, wv, zv)
    )
    rhs = float(np.dot(f.gradient(zv) - f.gradient(xv), yv - wv))
    return abs(lhs - rhs)


def total_convexity_modulus(f, x, t, samples=64, seed=0):
    """Sampled estimate of inf{ D_f(y, x) : ||y - x|| = t }.

    Exact in d = 1 (the sphere has two points).  In d > 1 the 2d axis
    points plus `samples` random sphere directions give an upper estimate;
    this is a strict-convexity diagnostic, not an algorithm component.
    """
    if not t > 0.0:
        raise ValueError("radius t must be positive")
    xv = f.check_primal(x)
    d = xv.shape[0]
    candidates = []
    for i in range(d):
        for s in (-1.0, 1.0):
            y = xv.copy()
            y[i] += s * t
            candidates.append(y)
    if d > 1 and samples > 0:
        rng = np.random.default_rng(seed)
        dirs = rng.standard_normal((samples, d))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        candidates.extend(xv + t * u for u in dirs)
    best = np.inf
    for y in candidates:
        try:
            best = min(best, bregman_distance(f, y, xv))
        except DomainError:
            continue  # sphere point left dom f (e.g. neg-entropy boundary)
    if not np.isfinite(best):
        raise DomainError("no sphere point of radius %g lies in dom f" % t)
    return best
