"""Hybrid shrinking-projection iteration.

Each step blends the contraction output and the current iterate in the
dual space, applies the mixed resolvent, appends one distance-test cut and
one variational-inequality cut to the running regions, and projects the
initial point onto their intersection.  Accumulated cuts shrink the
regions around the solution set, which forces strong convergence.

Two engines share the same semantics: the generic object-based `step`/`run`
below (any Legendre instance, any registered problem), and the compiled
scalar kernel in fastpath.py used automatically for long 1-D euclidean
runs.  They are regression-tested against each other.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import fastpath
from .equilibrium import (
    DEFAULT_CFG,
    AffineTheta,
    FoldedTheta,
    GmepProblem,
    LinearOperator,
    QuadraticPhi,
    ResolventConfig,
    SinOperator,
    ZeroOperator,
    resolvent,
)
from .legendre import Euclidean, as_vector, bregman_distance, combine_dual
from .regions import (
    EmptyRegionError,
    Region,
    bregman_project,
    cut_from_bregman_vi,
    cut_from_distance_test,
)

__all__ = [
    "ScheduleError",
    "InvariantViolation",
    "Schedule",
    "LinearContraction",
    "IterationState",
    "TraceRecord",
    "RunConfig",
    "RunResult",
    "initial_state",
    "step",
    "run",
    "check_monotone_df",
]


class ScheduleError(ValueError):
    pass


class InvariantViolation(RuntimeError):
    """A runtime invariant of the iteration failed (solver bug or bad problem)."""


@dataclass(frozen=True)
class Schedule:
    """Closed-form parameter rules alpha_n = 1/(n + a0), beta_n = blim - 1/(n + b0).

    alpha is decreasing to 0, beta increasing to blim; both must stay in
    (0, 1) for every n, and (1 - alpha_n) beta_n must stay bounded away
    from 0 in the tail.
    """

    alpha_offset: float = 3.0
    beta_limit: float = 0.99
    beta_offset: float = 2.0

    def alpha(self, n):
        return 1.0 / (n + self.alpha_offset)

    def beta(self, n):
        return self.beta_limit - 1.0 / (n + self.beta_offset)

    def validate(self, max_iter=10_000_000):
        # both rules are monotone in n, so endpoint checks cover all n
        for n in (0, 1, max_iter):
            a, b = self.alpha(n), self.beta(n)
            if not 0.0 < a < 1.0:
                raise ScheduleError("alpha_%d = %g outside (0,1)" % (n, a))
            if not 0.0 < b < 1.0:
                raise ScheduleError("beta_%d = %g outside (0,1)" % (n, b))
        if not self.beta_limit > 0.0:
            raise ScheduleError("liminf (1-alpha_n) beta_n = %g must be > 0" % self.beta_limit)
        return self

    def check_asymptotics(self, n_probe=1_000_000, alpha_cap=1e-5, product_floor=0.4):
        """Finite-prefix check: alpha decayed below cap, (1-alpha) beta above floor."""
        a = self.alpha(n_probe)
        prod = (1.0 - a) * self.beta(n_probe)
        return a < alpha_cap and prod >= product_floor


@dataclass(frozen=True)
class LinearContraction:
    """T(x) = kappa x with kappa in (0,1); fixed point 0."""

    kappa: float = 2.0 / 3.0
    dim: int = 1

    def __post_init__(self):
        if not 0.0 < self.kappa < 1.0:
            raise ValueError("kappa must lie in (0,1), got %r" % self.kappa)

    def __call__(self, x):
        return self.kappa * as_vector(x)

    @property
    def fixed_point(self):
        return np.zeros(self.dim)

    def maps_into(self, base, samples=100, seed=0):
        rng = np.random.default_rng(seed)
        lo = np.where(np.isfinite(base.lo), base.lo, -1.0)
        hi = np.where(np.isfinite(base.hi), base.hi, 1.0)
        for _ in range(samples):
            x = lo + (hi - lo) * rng.random(base.dim)
            if not base.contains(self(x), 1e-12):
                return False
        return True


@dataclass(frozen=True)
class IterationState:
    n: int
    x: np.ndarray
    z: np.ndarray
    y: np.ndarray
    u: np.ndarray
    region_c: Region
    region_q: Region
    last_step: float


@dataclass(frozen=True)
class TraceRecord:
    n: int
    x: float
    step_norm: float
    d_x0: float
    d_sol: float
    fp_residual: float


@dataclass(frozen=True)
class RunConfig:
    tol: float = 1e-10
    max_iter: int = 10_000_000
    trace_every: int = 10_000
    check_invariants_every: int = 1_000
    resolvent: ResolventConfig = DEFAULT_CFG
    use_fast_path: bool = True
    known_solution: object = None  # vector, or None when no solution is registered


@dataclass(frozen=True)
class RunResult:
    result: np.ndarray
    iterations: int
    status: str  # converged | maxed
    trace: tuple
    final_step: float

    @property
    def final_fp_residual(self):
        return self.trace[-1].fp_residual if self.trace else math.nan


def initial_state(problem, x0):
    """State at n = 0: x = x0, regions are the bare base set C.

    The theorem's C_0 cut (distance test without the alpha blend) is
    produced by the first step automatically: with x_n = x0 the blended
    distance test collapses to D_f(z, u_0) <= D_f(z, x_0).
    """
    x0 = as_vector(x0)
    if not problem.base.contains(x0, 1e-12):
        raise ValueError("x0 = %s lies outside the base set C" % x0)
    base_region = Region(problem.base)
    return IterationState(0, x0, None, None, None, base_region, base_region, math.inf)


def step(f, problem, T, sched, state, x0, cfg=RunConfig()):
    """One iteration: dual blends, resolvent, two cuts, projection of x0."""
    n = state.n
    alpha, beta = sched.alpha(n), sched.beta(n)
    x0 = as_vector(x0)
    tx = T(state.x)
    z = combine_dual(f, [beta, 1.0 - beta], [tx, state.x])
    y = combine_dual(f, [alpha, 1.0 - alpha], [x0, z])
    u = resolvent(f, problem, y, cfg.resolvent)
    region_c = state.region_c.with_cut(cut_from_distance_test(f, u, x0, state.x, alpha))
    region_q = state.region_q.with_cut(cut_from_bregman_vi(f, x0, state.x))
    x_next = bregman_project(f, region_c.intersect(region_q), x0)
    last_step = float(np.linalg.norm(x_next - state.x))
    return IterationState(n + 1, x_next, z, y, u, region_c, region_q, last_step)


def _check_invariants(state, x0, f, q, d_prev):
    if q is not None:
        if not (state.region_c.contains(q, 1e-10) and state.region_q.contains(q, 1e-10)):
            raise InvariantViolation(
                "registered solution %s left the cut regions at n=%d" % (q, state.n)
            )
    d_now = bregman_distance(f, state.x, x0)
    if d_now < d_prev - 1e-12:
        raise InvariantViolation(
            "D_f(x_n, x0) decreased at n=%d (%r -> %r)" % (state.n, d_prev, d_now)
        )
    return d_now


_PSI_FAST_TAGS = {ZeroOperator: fastpath.PSI_ZERO, SinOperator: fastpath.PSI_SIN,
                  LinearOperator: fastpath.PSI_LINEAR}


def _fast_kernel_params(problem):
    """(res_denom, psi_tag, psi_param, psi_at) for the kernel, or None.

    Plain affine-quadratic problems freeze psi at the outer point; a
    FoldedTheta problem carries psi inside the bifunction, so the kernel
    solves denom*u + psi(u) = y instead.
    """
    theta, phi, psi = problem.theta, problem.phi, problem.psi
    psi_at = fastpath.PSI_AT_OUTER
    if isinstance(theta, FoldedTheta):
        if not (
            getattr(phi, "coeff", None) == 0.0
            and isinstance(psi, ZeroOperator)
            and isinstance(theta.theta, AffineTheta)
            and isinstance(theta.phi, QuadraticPhi)
            and type(theta.psi) in _PSI_FAST_TAGS
        ):
            return None
        theta, phi, psi = theta.theta, theta.phi, theta.psi
        psi_at = fastpath.PSI_AT_INNER
    if not (
        isinstance(theta, AffineTheta)
        and isinstance(phi, QuadraticPhi)
        and type(psi) in _PSI_FAST_TAGS
        and theta.coeff >= 0.0
        and phi.coeff >= 0.0
    ):
        return None
    denom = theta.coeff + 2.0 * phi.coeff + 1.0
    return denom, _PSI_FAST_TAGS[type(psi)], getattr(psi, "slope", 0.0), psi_at


def _fast_path_applicable(f, problem, T, sched, cfg):
    return (
        cfg.use_fast_path
        and fastpath.HAVE_NUMBA
        and isinstance(f, Euclidean)
        and f.dim == 1
        and problem.dim == 1
        and isinstance(T, LinearContraction)
        and _fast_kernel_params(problem) is not None
        and np.isfinite(problem.base.lo[0])
        and np.isfinite(problem.base.hi[0])
    )


_FAST_STATUS = {
    fastpath.STATUS_CONVERGED: "converged",
    fastpath.STATUS_MAXED: "maxed",
}


def _run_fast(f, problem, T, sched, x0, cfg):
    q = cfg.known_solution
    denom, psi_tag, psi_param, psi_at = _fast_kernel_params(problem)
    out = fastpath.hybrid_scalar_kernel(
        float(as_vector(x0)[0]),
        T.kappa,
        denom,
        psi_tag,
        psi_param,
        psi_at,
        float(problem.base.lo[0]),
        float(problem.base.hi[0]),
        sched.alpha_offset,
        sched.beta_limit,
        sched.beta_offset,
        cfg.tol,
        cfg.max_iter,
        cfg.trace_every,
        cfg.check_invariants_every,
        float(as_vector(q)[0]) if q is not None else 0.0,
        q is not None,
    )
    (status, iters, x, last_step, clo, chi, qlo, qhi,
     tn, tx, tstep, tdx0, tdsol, tres) = out
    if status == fastpath.STATUS_EMPTY:
        raise EmptyRegionError(
            "empty region at n=%d: C fold [%r, %r], Q fold [%r, %r]"
            % (iters, clo, chi, qlo, qhi)
        )
    if status == fastpath.STATUS_MEMBERSHIP_VIOLATION:
        raise InvariantViolation("registered solution left the cut regions at n=%d" % iters)
    if status == fastpath.STATUS_MONOTONE_VIOLATION:
        raise InvariantViolation("D_f(x_n, x0) decreased at n=%d" % iters)
    trace = tuple(
        TraceRecord(int(tn[i]), float(tx[i]), float(tstep[i]), float(tdx0[i]),
                    float(tdsol[i]), float(tres[i]))
        for i in range(len(tn))
    )
    return RunResult(np.array([x]), iters, _FAST_STATUS[status], trace, last_step)


def run(f, problem, T, sched, x0, cfg=RunConfig()):
    """Iterate until the step norm drops below cfg.tol or max_iter is hit.

    Returns a RunResult; raises EmptyRegionError / InvariantViolation on
    the corresponding failures.  A solution registered in
    cfg.known_solution enables membership checks and the d_sol trace column.
    """
    sched.validate(cfg.max_iter)
    if _fast_path_applicable(f, problem, T, sched, cfg):
        return _run_fast(f, problem, T, sched, x0, cfg)

    x0 = as_vector(x0)
    q = as_vector(cfg.known_solution) if cfg.known_solution is not None else None
    state = initial_state(problem, x0)
    trace = []
    d_prev = -math.inf

    def record(st, step_norm):
        d_sol = bregman_distance(f, q, st.x) if q is not None else math.nan
        trace.append(
            TraceRecord(
                st.n,
                float(st.x[0]) if st.x.shape[0] == 1 else float(np.linalg.norm(st.x)),
                step_norm,
                bregman_distance(f, st.x, x0),
                d_sol,
                float(np.linalg.norm(st.x - T(st.x))),
            )
        )

    status = "maxed"
    while state.n < cfg.max_iter:
        new_state = step(f, problem, T, sched, state, x0, cfg)
        if state.n % cfg.trace_every == 0:
            record(state, new_state.last_step)
        if state.n % cfg.check_invariants_every == 0:
            d_prev = _check_invariants(new_state, x0, f, q, d_prev)
        state = new_state
        if state.last_step < cfg.tol:
            status = "converged"
            break
    record(state, state.last_step)
    return RunResult(state.x, state.n, status, tuple(trace), state.last_step)


def check_monotone_df(trace, d_sol_bound=None, slack=1e-12):
    """Is D_f(x_n, x0) nondecreasing along the trace (and below the bound)?"""
    prev = -math.inf
    for rec in trace:
        if rec.d_x0 < prev - slack:
            return False
        prev = rec.d_x0
        if d_sol_bound is not None and rec.d_x0 > d_sol_bound + 1e-10:
            return False
    return True
