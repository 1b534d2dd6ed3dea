"""Sampled property suites over every module, with worst-violation reporting.

Each check draws deterministic samples (seeded generator), evaluates an
identity or inequality, and reports the worst slack seen.  The suites are
what `bregopt verify` runs and what the acceptance tests assert; a
`resolvent_fn` override exists as a self-test hook so a deliberately
broken resolvent makes the operator checks fail.
"""

from dataclasses import dataclass

import numpy as np

from . import equilibrium as eq
from .legendre import (
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
    v_fn,
)
from .regions import (
    BaseSet,
    Halfspace,
    Region,
    bregman_project,
    cut_from_bregman_vi,
    cut_from_distance_test,
)

__all__ = ["PropertyResult", "run_suite", "PROPERTY_NAMES"]


@dataclass(frozen=True)
class PropertyResult:
    name: str
    samples: int
    worst: float
    tol: float

    @property
    def passed(self):
        return self.worst <= self.tol

    def line(self):
        tag = "PASS" if self.passed else "FAIL"
        return "%s %-48s samples=%-6d worst=%.3e tol=%.0e" % (
            tag, self.name, self.samples, self.worst, self.tol
        )


# instance tag -> (function, sampling box lo, hi)
INSTANCES = {
    "euclidean-1d": (lambda: Euclidean(1), -2.0, 2.0),
    "euclidean-3d": (lambda: Euclidean(3), -2.0, 2.0),
    "scalar-power-3": (lambda: ScalarPower(3.0), -2.0, 2.0),
    "scalar-quartic": (lambda: ScalarQuartic(), -2.0, 2.0),
    "neg-entropy-2d": (lambda: NegEntropy(2), 0.1, 3.0),
}


def _sampler(f, lo, hi, rng):
    d = f.dim

    def sample():
        return lo + (hi - lo) * rng.random(d)

    return sample


def _geometry_checks(tag, n_samples, rng):
    make, lo, hi = INSTANCES[tag]
    f = make()
    sample = _sampler(f, lo, hi, rng)
    results = []

    worst_neg, worst_zero = 0.0, 0.0
    for _ in range(n_samples):
        x, y = sample(), sample()
        d = bregman_distance(f, x, y)
        worst_neg = max(worst_neg, -d)
        if np.linalg.norm(x - y) > 1e-9 and d <= 1e-12:
            worst_zero = max(worst_zero, 1.0)  # distinct points collapsed to zero
    results.append(PropertyResult("%s/nonnegativity" % tag, n_samples, worst_neg, 1e-12))
    results.append(PropertyResult("%s/separation" % tag, n_samples, worst_zero, 0.0))

    worst = 0.0
    for _ in range(n_samples):
        x = sample()
        back = grad_conj(f, grad(f, x))
        worst = max(worst, np.linalg.norm(back - x) / (1.0 + np.linalg.norm(x)))
    results.append(PropertyResult("%s/gradient-round-trip" % tag, n_samples, worst, 1e-9))

    worst3 = worst4 = 0.0
    for _ in range(n_samples):
        x, y, z, w = sample(), sample(), sample(), sample()
        worst3 = max(worst3, three_point_residual(f, x, y, z))
        worst4 = max(worst4, four_point_residual(f, y, w, x, z))
    results.append(PropertyResult("%s/three-point-identity" % tag, n_samples, worst3, 1e-9))
    results.append(PropertyResult("%s/four-point-identity" % tag, n_samples, worst4, 1e-9))

    worst_v = worst_sub = 0.0
    for _ in range(n_samples):
        x = sample()
        ustar = grad(f, sample())
        ystar = grad(f, sample()) - grad(f, sample())
        worst_v = max(
            worst_v, abs(v_fn(f, x, ustar) - bregman_distance(f, x, grad_conj(f, ustar)))
        )
        slack = (
            v_fn(f, x, ustar + ystar)
            - v_fn(f, x, ustar)
            - float(np.dot(ystar, grad_conj(f, ustar) - x))
        )
        worst_sub = max(worst_sub, -slack)
    results.append(PropertyResult("%s/v-fn-identity" % tag, n_samples, worst_v, 1e-9))
    results.append(PropertyResult("%s/subdifferential-inequality" % tag, n_samples, worst_sub, 1e-9))

    worst_cc = 0.0
    for _ in range(n_samples):
        w = rng.random(3) + 0.05
        w /= w.sum()
        xs = [sample() for _ in range(3)]
        zbar = combine_dual(f, w, xs)
        z = sample()
        bound = sum(t * bregman_distance(f, z, xi) for t, xi in zip(w, xs))
        worst_cc = max(worst_cc, bregman_distance(f, z, zbar) - bound)
    results.append(PropertyResult("%s/convex-combination-bound" % tag, n_samples, worst_cc, 1e-9))

    # sequential-consistency proxy: calibrate delta(eps) as the smallest
    # sphere distance over the box, then check D <= delta forces closeness
    eps = 0.1
    delta = np.inf
    for _ in range(200):
        x = sample()
        dirs = rng.standard_normal(f.dim)
        dirs /= np.linalg.norm(dirs)
        y = x + eps * dirs
        if np.all(y > lo - 1e-12) or f.dim == 1:
            try:
                delta = min(delta, bregman_distance(f, y, x))
            except Exception:
                continue
    worst_sc = 0.0
    for _ in range(n_samples):
        x, y = sample(), sample()
        if bregman_distance(f, y, x) <= 0.5 * delta and np.linalg.norm(y - x) > eps:
            worst_sc = max(worst_sc, np.linalg.norm(y - x) - eps)
    results.append(PropertyResult("%s/sequential-consistency" % tag, n_samples, worst_sc, 0.0))
    return results


# vectorized f(z) over 1-D grids, keyed like INSTANCES
_VEC_VALUE = {
    "euclidean-1d": lambda z: 0.5 * z * z,
    "scalar-quartic": lambda z: z**4 / 4.0,
    "scalar-power-3": lambda z: np.abs(z) ** 3 / 3.0,
}


def _grid_argmin(tag, f, lo, hi, x, n=20001):
    zs = np.linspace(lo, hi, n)
    fz = _VEC_VALUE[tag](zs)
    fx = f.value(x)
    gx = f.gradient(x)[0]
    vals = fz - fx - gx * (zs - x[0])
    return zs[int(np.argmin(vals))]


def _projection_checks(n_samples, rng):
    results = []
    for tag in ("euclidean-1d", "scalar-quartic", "scalar-power-3"):
        make, _, _ = INSTANCES[tag]
        f = make()
        worst_opt = worst_vi = worst_pyth = worst_idem = 0.0
        for _ in range(max(10, n_samples // 20)):
            lo = -1.5 + rng.random()
            hi = lo + 0.5 + rng.random()
            region = Region(BaseSet.interval(lo, hi))
            x = np.array([-3.0 + 6.0 * rng.random()])
            z = bregman_project(f, region, x)
            worst_opt = max(
                worst_opt,
                bregman_distance(f, z, x)
                - bregman_distance(f, [_grid_argmin(tag, f, lo, hi, x)], x),
            )
            for _ in range(20):
                y = np.array([lo + (hi - lo) * rng.random()])
                gxz = float(np.dot(grad(f, x) - grad(f, z), z - y))
                worst_vi = max(worst_vi, -gxz)
                worst_pyth = max(
                    worst_pyth,
                    bregman_distance(f, y, z)
                    + bregman_distance(f, z, x)
                    - bregman_distance(f, y, x),
                )
            inside = np.array([lo + (hi - lo) * rng.random()])
            worst_idem = max(
                worst_idem, float(np.abs(bregman_project(f, region, inside) - inside)[0])
            )
        results.append(PropertyResult("projection/%s/optimality" % tag, n_samples, worst_opt, 1e-8))
        results.append(PropertyResult("projection/%s/variational" % tag, n_samples, worst_vi, 1e-8))
        results.append(PropertyResult("projection/%s/pythagoras" % tag, n_samples, worst_pyth, 1e-8))
        results.append(PropertyResult("projection/%s/idempotence" % tag, n_samples, worst_idem, 1e-12))

    # 1-D fold vs explicit cut evaluation
    worst_fold = 0.0
    trials = max(10, n_samples // 20)
    for _ in range(trials):
        region = Region(BaseSet.interval(-2.0, 2.0))
        cuts = []
        for _ in range(8):
            a = rng.standard_normal()
            b = rng.standard_normal()
            if abs(a) < 1e-3:
                continue
            h = Halfspace(np.array([a]), b)
            cuts.append(h)
            region = region.with_cut(h)
        for z in np.linspace(-2.5, 2.5, 101):
            via_fold = region.contains([z], 0.0)
            explicit = (-2.0 <= z <= 2.0) and all(h.satisfied(np.array([z]), 0.0) for h in cuts)
            if via_fold != explicit:
                worst_fold = max(worst_fold, 1.0)
    results.append(PropertyResult("projection/fold-exactness", trials, worst_fold, 0.0))

    # 2-D Dykstra vs closed-form single-halfspace projection
    f2 = Euclidean(2)
    worst_dyk = 0.0
    for _ in range(trials):
        a = rng.standard_normal(2)
        a /= np.linalg.norm(a)
        b = rng.standard_normal()
        x = 3.0 * rng.standard_normal(2)
        region = Region(BaseSet.whole_space(2)).with_cut(Halfspace(a, b))
        z = bregman_project(f2, region, x)
        viol = max(0.0, float(np.dot(a, x)) - b)
        closed = x - viol * a
        worst_dyk = max(worst_dyk, float(np.linalg.norm(z - closed)))
    results.append(PropertyResult("projection/dykstra-vs-closed-form", trials, worst_dyk, 1e-9))
    return results


RESOLVENT_PROBLEMS = (
    "paper-example-gmep",
    "paper-example-ep",
    "paper-example-ep-plain",
)


def _resolvent_checks(n_samples, rng, resolvent_fn):
    f = Euclidean(1)
    cfg = eq.ResolventConfig()
    results = []
    for name in RESOLVENT_PROBLEMS:
        problem, q = eq.make_problem(name)
        lo, hi = float(problem.base.lo[0]), float(problem.base.hi[0])
        probes = eq.probe_grid(problem.base, 1000)

        def rand_x():
            return np.array([lo + (hi - lo) * rng.random()])

        worst_vi = -np.inf
        pairs = max(10, n_samples // 10)
        for _ in range(pairs):
            x = rand_x()
            z = resolvent_fn(f, problem, x, cfg)
            worst_vi = max(worst_vi, eq.verify_resolvent(f, problem, x, z, probes))
        results.append(PropertyResult("resolvent/%s/vi-oracle" % name, pairs, worst_vi, 1e-8))

        worst_bfne = worst_eq5 = worst_pyth = -np.inf
        for _ in range(pairs):
            x, y = rand_x(), rand_x()
            tx = resolvent_fn(f, problem, x, cfg)
            ty = resolvent_fn(f, problem, y, cfg)
            d = tx - ty
            gap = float(np.dot(grad(f, tx) - grad(f, ty), d)) - float(
                np.dot(grad(f, x) - grad(f, y), d)
            )
            worst_bfne = max(worst_bfne, gap)
            eq5 = (
                bregman_distance(f, tx, ty)
                + bregman_distance(f, ty, tx)
                + bregman_distance(f, tx, x)
                + bregman_distance(f, ty, y)
                - bregman_distance(f, tx, y)
                - bregman_distance(f, ty, x)
            )
            worst_eq5 = max(worst_eq5, eq5)
            if q is not None:
                worst_pyth = max(
                    worst_pyth,
                    bregman_distance(f, q, tx)
                    + bregman_distance(f, tx, x)
                    - bregman_distance(f, q, x),
                )
        results.append(PropertyResult("resolvent/%s/bfne-gap" % name, pairs, worst_bfne, 1e-10))
        results.append(PropertyResult("resolvent/%s/firm-four-term" % name, pairs, worst_eq5, 1e-9))
        if q is not None:
            results.append(
                PropertyResult("resolvent/%s/pythagoras-gap" % name, pairs, worst_pyth, 1e-10)
            )
            fp = resolvent_fn(f, problem, q, cfg)
            results.append(
                PropertyResult(
                    "resolvent/%s/fixed-point" % name, 1, float(np.linalg.norm(fp - q)), 1e-10
                )
            )

    # closed form vs bisection on the affine-quadratic family
    worst_agree = 0.0
    trials = max(10, n_samples // 10)
    for _ in range(trials):
        problem, _ = eq.make_problem(
            "affine-quadratic", a=1.0 + rng.random(), c=rng.random(), psi="sin", lo=-1.5, hi=0.0
        )
        x = np.array([-1.5 * rng.random()])
        zc = eq.resolvent(f, problem, x, eq.ResolventConfig(method="closed-form"))
        zb = eq.resolvent(f, problem, x, eq.ResolventConfig(method="bisection"))
        worst_agree = max(worst_agree, float(np.linalg.norm(zc - zb)))
    results.append(
        PropertyResult("resolvent/closed-form-vs-bisection", trials, worst_agree, 1e-12)
    )

    # reduction: gmep data with phi = psi = 0 equals the bare bifunction problem
    gmep_reduced = eq.GmepProblem(
        BaseSet.interval(-1.5, 0.0), eq.AffineTheta(1.0), eq.QuadraticPhi(0.0), eq.ZeroOperator()
    )
    plain, _ = eq.make_problem("paper-example-ep-plain")
    worst_red = 0.0
    for _ in range(trials):
        x = np.array([-1.5 * rng.random()])
        worst_red = max(
            worst_red,
            float(np.linalg.norm(eq.resolvent(f, gmep_reduced, x, cfg) - eq.resolvent(f, plain, x, cfg))),
        )
    results.append(PropertyResult("resolvent/reduction-consistency", trials, worst_red, 1e-12))

    # bifunction axioms on the registered problems
    for name in RESOLVENT_PROBLEMS:
        problem, _ = eq.make_problem(name)
        worst_ax = max(v for v in eq.check_axioms(problem, samples=200, seed=rng.integers(2**31)).values())
        results.append(PropertyResult("axioms/%s" % name, 200, worst_ax, 1e-12))
    return results


def run_suite(seed=0, n_samples=1000, select=None, resolvent_fn=None):
    """Run all property checks; returns a list of PropertyResult.

    select: optional substring filter on property names.
    resolvent_fn: override of equilibrium.resolvent (self-test hook).
    """
    rng = np.random.default_rng(seed)
    resolvent_fn = resolvent_fn or eq.resolvent
    results = []
    for tag in INSTANCES:
        results.extend(_geometry_checks(tag, n_samples, rng))
    results.extend(_projection_checks(n_samples, rng))
    results.extend(_resolvent_checks(n_samples, rng, resolvent_fn))
    if select:
        results = [r for r in results if select in r.name]
    return results


PROPERTY_NAMES = None  # populated lazily by run_suite callers when needed
