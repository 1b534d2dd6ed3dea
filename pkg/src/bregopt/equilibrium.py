"""Equilibrium problems (theta, phi, psi), mixed resolvents, and oracles.

The problem is: find x in C with
    theta(x, y) + <psi(x), y - x> + phi(y) >= phi(x)   for all y in C.
The mixed resolvent regularizes this with the <grad f(z) - grad f(x), y - z>
term; its fixed points are exactly the solutions.  Closed-form and
bisection solvers cover the affine-quadratic family; grid oracles verify
every output against the defining inequality directly.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.stats import qmc

from .legendre import Euclidean, as_vector, bregman_distance, grad
from .regions import BaseSet, Region, bregman_project

__all__ = [
    "AffineTheta",
    "FoldedTheta",
    "QuadraticPhi",
    "ZeroOperator",
    "SinOperator",
    "LinearOperator",
    "GmepProblem",
    "ResolventConfig",
    "ResolventError",
    "resolvent",
    "verify_resolvent",
    "gmep_violation",
    "bfne_gap",
    "resolvent_pythagoras_gap",
    "probe_grid",
    "check_axioms",
    "make_problem",
    "PROBLEM_NAMES",
]


class ResolventError(RuntimeError):
    """Inner solver failed or the method does not apply to the problem family."""


@dataclass(frozen=True)
class AffineTheta:
    """Bifunction theta(x, y) = coeff * <x, y - x>; monotone for coeff >= 0."""

    coeff: float = 1.0

    def __call__(self, x, y):
        x, y = as_vector(x), as_vector(y)
        return self.coeff * float(np.dot(x, y - x))

    def d2(self, x, y):
        """Gradient in the second argument."""
        return self.coeff * as_vector(x)


@dataclass(frozen=True)
class QuadraticPhi:
    """phi(y) = coeff * ||y||^2; convex for coeff >= 0."""

    coeff: float = 1.0

    def __call__(self, y):
        y = as_vector(y)
        return self.coeff * float(np.dot(y, y))

    def deriv(self, y):
        return 2.0 * self.coeff * as_vector(y)


@dataclass(frozen=True)
class ZeroOperator:
    def __call__(self, x):
        return np.zeros_like(as_vector(x))


@dataclass(frozen=True)
class SinOperator:
    """psi(x) = sin(x) componentwise; monotone on [-pi/2, pi/2]."""

    def __call__(self, x):
        return np.sin(as_vector(x))


@dataclass(frozen=True)
class LinearOperator:
    slope: float = 1.0

    def __call__(self, x):
        return self.slope * as_vector(x)


@dataclass(frozen=True)
class FoldedTheta:
    """Mixed problem folded into a single bifunction:

        H(x, y) = theta(x, y) + phi(y) - phi(x) + <psi(x), y - x>.

    H vanishes on the diagonal and stays monotone (for monotone psi), and
    the bare equilibrium problem for H has the same solution set as the
    mixed problem -- but its resolvent differs: psi is now evaluated at
    the inner point z rather than frozen at the outer point x.
    """

    theta: AffineTheta
    phi: QuadraticPhi
    psi: object

    def __call__(self, x, y):
        x, y = as_vector(x), as_vector(y)
        return (
            self.theta(x, y)
            + self.phi(y)
            - self.phi(x)
            + float(np.dot(self.psi(x), y - x))
        )

    def d2(self, x, y):
        return self.theta.d2(x, y) + self.phi.deriv(y) + self.psi(x)


ZERO_THETA = AffineTheta(0.0)
ZERO_PHI = QuadraticPhi(0.0)
ZERO_PSI = ZeroOperator()


@dataclass(frozen=True)
class GmepProblem:
    """The triple (theta, phi, psi) over a base box C."""

    base: BaseSet
    theta: AffineTheta = ZERO_THETA
    phi: QuadraticPhi = ZERO_PHI
    psi: object = ZERO_PSI

    @property
    def dim(self):
        return self.base.dim

    def is_zero(self):
        return (
            getattr(self.theta, "coeff", None) == 0.0
            and getattr(self.phi, "coeff", None) == 0.0
            and isinstance(self.psi, ZeroOperator)
        )


@dataclass(frozen=True)
class ResolventConfig:
    method: str = "auto"  # auto | closed-form | bisection
    inner_tol: float = 1e-14
    max_inner: int = 200

    def __post_init__(self):
        if self.inner_tol <= 0.0:
            raise ValueError("inner_tol must be positive")
        if self.method not in ("auto", "closed-form", "bisection"):
            raise ValueError("unknown resolvent method %r" % self.method)


DEFAULT_CFG = ResolventConfig()


def _closed_form_applicable(f, problem):
    return (
        isinstance(f, Euclidean)
        and isinstance(problem.theta, AffineTheta)
        and isinstance(problem.phi, QuadraticPhi)
        and problem.theta.coeff >= 0.0
        and problem.phi.coeff >= 0.0
    )


def _resolvent_closed_form(f, problem, x):
    # KKT for the separable quadratic inner problem: the stationarity map
    # (a + 2c + 1) z + psi(x) - x is increasing per coordinate, so the box
    # clamp of the interior root is exact.
    denom = problem.theta.coeff + 2.0 * problem.phi.coeff + 1.0
    z = (x - problem.psi(x)) / denom
    return np.clip(z, problem.base.lo, problem.base.hi)


def _resolvent_bisection(f, problem, x, cfg):
    if problem.dim != 1:
        raise ResolventError("bisection resolvent requires a 1-D problem")
    lo, hi = float(problem.base.lo[0]), float(problem.base.hi[0])
    if not (np.isfinite(lo) and np.isfinite(hi)):
        raise ResolventError("bisection resolvent requires a bounded interval")
    psi_x = problem.psi(x)
    gx = f.gradient(as_vector(x))

    def fk(z):
        zv = np.array([z])
        val = (
            problem.theta.d2(zv, zv)
            + problem.phi.deriv(zv)
            + psi_x
            + f.gradient(zv)
            - gx
        )
        return float(val[0])

    flo, fhi = fk(lo), fk(hi)
    if flo >= 0.0:
        return np.array([lo])
    if fhi <= 0.0:
        return np.array([hi])
    root = brentq(fk, lo, hi, xtol=cfg.inner_tol, rtol=8.9e-16, maxiter=cfg.max_inner)
    return np.array([root])


def resolvent(f, problem, x, cfg=DEFAULT_CFG):
    """The mixed resolvent: the unique z in C solving the regularized inequality

        theta(z,y) + phi(y) + <psi(x), y-z> + <grad f(z) - grad f(x), y-z> >= phi(z)

    for all y in C.  Note psi is evaluated at the *outer* point x.
    """
    xv = f.check_primal(x)
    if problem.is_zero():
        return bregman_project(f, Region(problem.base), xv)
    method = cfg.method
    if method == "auto":
        method = "closed-form" if _closed_form_applicable(f, problem) else "bisection"
    if method == "closed-form":
        if not _closed_form_applicable(f, problem):
            raise ResolventError(
                "closed-form resolvent needs euclidean f with the affine-quadratic family"
            )
        return _resolvent_closed_form(f, problem, xv)
    return _resolvent_bisection(f, problem, xv, cfg)


def verify_resolvent(f, problem, x, z, probes):
    """Brute-force check of the resolvent inequality: worst violation over probes.

    Returns max over probe y of
        phi(z) - theta(z,y) - phi(y) - <psi(x), y-z> - <grad f(z)-grad f(x), y-z>;
    a valid resolvent output stays <= tol.
    """
    xv, zv = as_vector(x), as_vector(z)
    psi_x = problem.psi(xv)
    gdiff = f.gradient(zv) - f.gradient(xv)
    phi_z = problem.phi(zv)
    worst = -np.inf
    for y in probes:
        yv = as_vector(y)
        val = (
            phi_z
            - problem.theta(zv, yv)
            - problem.phi(yv)
            - float(np.dot(psi_x, yv - zv))
            - float(np.dot(gdiff, yv - zv))
        )
        worst = max(worst, val)
    return worst


def gmep_violation(problem, x, probes):
    """Worst violation of the equilibrium inequality at x over the probe set."""
    xv = as_vector(x)
    if not problem.base.contains(xv, 1e-12):
        raise ValueError("x lies outside the base set C")
    psi_x = problem.psi(xv)
    phi_x = problem.phi(xv)
    worst = -np.inf
    for y in probes:
        yv = as_vector(y)
        val = phi_x - problem.theta(xv, yv) - float(np.dot(psi_x, yv - xv)) - problem.phi(yv)
        worst = max(worst, val)
    return worst


def bfne_gap(f, problem, cfg, x, y):
    """Firm-nonexpansiveness gap of the resolvent; nonpositive up to numerics.

    gap = <grad f(Tx) - grad f(Ty), Tx - Ty> - <grad f(x) - grad f(y), Tx - Ty>.
    """
    tx = resolvent(f, problem, x, cfg)
    ty = resolvent(f, problem, y, cfg)
    d = tx - ty
    lhs = float(np.dot(f.gradient(tx) - f.gradient(ty), d))
    rhs = float(np.dot(f.gradient(as_vector(x)) - f.gradient(as_vector(y)), d))
    return lhs - rhs


def resolvent_pythagoras_gap(f, problem, cfg, p, x):
    """D_f(p, Res x) + D_f(Res x, x) - D_f(p, x) for a known solution p; <= 0."""
    rx = resolvent(f, problem, x, cfg)
    return (
        bregman_distance(f, p, rx)
        + bregman_distance(f, rx, x)
        - bregman_distance(f, p, x)
    )


def probe_grid(base, n=1000):
    """Deterministic probe points covering C: uniform grid (1-D) or Halton (d > 1)."""
    if base.dim == 1:
        lo, hi = float(base.lo[0]), float(base.hi[0])
        return [np.array([t]) for t in np.linspace(lo, hi, n)]
    sampler = qmc.Halton(d=base.dim, scramble=False, seed=0)
    pts = qmc.scale(sampler.random(n), base.lo, base.hi)
    return [p for p in pts]


def check_axioms(problem, samples=200, seed=0, tol=1e-12):
    """Sampled check of the bifunction axioms and phi/psi structure.

    Returns a dict of worst slacks: theta_diagonal, theta_monotone,
    psi_monotone, phi_midpoint.  All should be <= tol.
    """
    rng = np.random.default_rng(seed)
    lo = np.where(np.isfinite(problem.base.lo), problem.base.lo, -1.0)
    hi = np.where(np.isfinite(problem.base.hi), problem.base.hi, 1.0)

    def sample():
        return lo + (hi - lo) * rng.random(problem.dim)

    worst = {"theta_diagonal": 0.0, "theta_monotone": -np.inf,
             "psi_monotone": -np.inf, "phi_midpoint": -np.inf}
    for _ in range(samples):
        x, y = sample(), sample()
        worst["theta_diagonal"] = max(worst["theta_diagonal"], abs(problem.theta(x, x)))
        worst["theta_monotone"] = max(
            worst["theta_monotone"], problem.theta(x, y) + problem.theta(y, x)
        )
        worst["psi_monotone"] = max(
            worst["psi_monotone"],
            -float(np.dot(problem.psi(x) - problem.psi(y), x - y)),
        )
        mid = 0.5 * (x + y)
        worst["phi_midpoint"] = max(
            worst["phi_midpoint"],
            problem.phi(mid) - 0.5 * (problem.phi(x) + problem.phi(y)),
        )
    return worst


# ---------------------------------------------------------------------------
# Problem registry

PROBLEM_NAMES = (
    "paper-example-gmep",
    "paper-example-ep",
    "paper-example-ep-plain",
    "affine-quadratic",
)

_PSI_TAGS = {"zero": ZeroOperator, "sin": SinOperator}


def make_problem(name, **params):
    """Build a registered problem.  Returns (problem, known_solution or None).

    Registered names:
      paper-example-gmep     theta(x,y) = x(y-x), phi(x) = x^2, psi = sin, C = [-1.5, 0]
      paper-example-ep       the same data folded into one bifunction (phi = psi = 0);
                             the comparison-algorithm form of the same problem
      paper-example-ep-plain bare theta(x,y) = x(y-x) with phi = psi = 0
      affine-quadratic       params a, c, psi ("zero"/"sin"/float slope), dim, lo, hi
    """
    if name == "paper-example-gmep":
        base = BaseSet.interval(-1.5, 0.0)
        return GmepProblem(base, AffineTheta(1.0), QuadraticPhi(1.0), SinOperator()), np.array([0.0])
    if name == "paper-example-ep":
        base = BaseSet.interval(-1.5, 0.0)
        folded = FoldedTheta(AffineTheta(1.0), QuadraticPhi(1.0), SinOperator())
        return GmepProblem(base, folded, ZERO_PHI, ZERO_PSI), np.array([0.0])
    if name == "paper-example-ep-plain":
        base = BaseSet.interval(-1.5, 0.0)
        return GmepProblem(base, AffineTheta(1.0), ZERO_PHI, ZERO_PSI), np.array([0.0])
    if name == "affine-quadratic":
        a = float(params.get("a", 1.0))
        c = float(params.get("c", 0.0))
        dim = int(params.get("dim", 1))
        lo = params.get("lo", -1.0)
        hi = params.get("hi", 1.0)
        psi = params.get("psi", "zero")
        if isinstance(psi, str):
            try:
                psi_op = _PSI_TAGS[psi]()
            except KeyError:
                raise ValueError("unknown psi tag %r" % psi) from None
        else:
            psi_op = LinearOperator(float(psi))
        base = BaseSet.box(np.full(dim, float(lo)), np.full(dim, float(hi)))
        sol = np.zeros(dim) if base.contains(np.zeros(dim)) else None
        return GmepProblem(base, AffineTheta(a), QuadraticPhi(c), psi_op), sol
    raise KeyError("unknown problem name %r (registered: %s)" % (name, ", ".join(PROBLEM_NAMES)))
