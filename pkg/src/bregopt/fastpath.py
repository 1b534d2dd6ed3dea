"""Compiled scalar kernel for the hybrid shrinking-projection iteration.

The long benchmark runs are 1-D with euclidean geometry, a linear
contraction, and an affine-quadratic equilibrium problem; there the whole
iteration collapses to scalar arithmetic with interval folding, which
numba compiles to a tight loop (millions of iterations per second).
The generic object-based engine in solver.py is the reference; the two
are regression-tested against each other on truncated runs.
"""

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap if not (args and callable(args[0])) else args[0]


PSI_ZERO = 0
PSI_SIN = 1
PSI_LINEAR = 2

STATUS_CONVERGED = 0
STATUS_MAXED = 1
STATUS_EMPTY = 2
STATUS_MEMBERSHIP_VIOLATION = 3
STATUS_MONOTONE_VIOLATION = 4


PSI_AT_OUTER = 0  # resolvent freezes psi at the outer point: u = (y - psi(y)) / denom
PSI_AT_INNER = 1  # folded bifunction: u solves denom*u + psi(u) = y


@njit(cache=True)
def _psi_eval(tag, param, t):
    if tag == PSI_SIN:
        return np.sin(t)
    if tag == PSI_LINEAR:
        return param * t
    return 0.0


@njit(cache=True)
def _psi_deriv(tag, param, t):
    if tag == PSI_SIN:
        return np.cos(t)
    if tag == PSI_LINEAR:
        return param
    return 0.0


@njit(cache=True)
def _resolve_inner(denom, psi_tag, psi_param, y):
    """Newton solve of denom*u + psi(u) = y; the map is strictly increasing."""
    u = y / denom
    for _ in range(60):
        fu = denom * u + _psi_eval(psi_tag, psi_param, u) - y
        du = fu / (denom + _psi_deriv(psi_tag, psi_param, u))
        u -= du
        if abs(du) < 1e-16:
            break
    return u


@njit(cache=True)
def hybrid_scalar_kernel(
    x0,
    kappa,
    res_denom,
    psi_tag,
    psi_param,
    psi_at,
    lo,
    hi,
    alpha_offset,
    beta_limit,
    beta_offset,
    tol,
    max_iter,
    trace_every,
    check_every,
    q_known,
    has_q,
):
    """Run the scalar iteration; returns status, counts, folds, and the trace.

    Per step n (x = x_n, euclidean f so grad f = id):
      z = beta*T(x) + (1-beta)*x
      y = alpha*x0 + (1-alpha)*z
      u = clamp((y - psi(y)) / res_denom, lo, hi)     (resolvent KKT clamp)
      C-cut: (alpha*x0 + (1-alpha)*x - u) z <= (alpha*x0^2 + (1-alpha)*x^2 - u^2)/2
      Q-cut: (x0 - x) z <= (x0 - x) x
      x_{n+1} = clip(x0, C-fold  intersect  Q-fold)
    """
    n_trace_cap = max_iter // trace_every + 2
    trace_n = np.empty(n_trace_cap, dtype=np.int64)
    trace_x = np.empty(n_trace_cap, dtype=np.float64)
    trace_step = np.empty(n_trace_cap, dtype=np.float64)
    trace_dx0 = np.empty(n_trace_cap, dtype=np.float64)
    trace_dsol = np.empty(n_trace_cap, dtype=np.float64)
    trace_res = np.empty(n_trace_cap, dtype=np.float64)
    n_trace = 0

    clo, chi = lo, hi  # folded C_n bounds (base set included)
    qlo, qhi = lo, hi  # folded Q_n bounds
    x = x0
    d_prev = -1.0
    status = STATUS_MAXED
    iterations = 0
    step_norm = np.inf
    n = 0
    while n < max_iter:
        beta = beta_limit - 1.0 / (n + beta_offset)
        alpha = 1.0 / (n + alpha_offset)
        tx = kappa * x
        z = beta * tx + (1.0 - beta) * x
        y = alpha * x0 + (1.0 - alpha) * z
        if psi_at == PSI_AT_INNER:
            u = _resolve_inner(res_denom, psi_tag, psi_param, y)
        else:
            u = (y - _psi_eval(psi_tag, psi_param, y)) / res_denom
        if u < lo:
            u = lo
        elif u > hi:
            u = hi

        # distance-test cut on C_n
        a_c = alpha * x0 + (1.0 - alpha) * x - u
        b_c = 0.5 * (alpha * x0 * x0 + (1.0 - alpha) * x * x - u * u)
        if a_c > 0.0:
            v = b_c / a_c
            if v < chi:
                chi = v
        elif a_c < 0.0:
            v = b_c / a_c
            if v > clo:
                clo = v

        # variational-inequality cut on Q_n
        a_q = x0 - x
        b_q = a_q * x
        if a_q > 0.0:
            if x < qhi:
                qhi = x
        elif a_q < 0.0:
            if x > qlo:
                qlo = x

        ilo = clo if clo > qlo else qlo
        ihi = chi if chi < qhi else qhi
        if ilo > ihi:
            status = STATUS_EMPTY
            break

        x_next = x0
        if x_next < ilo:
            x_next = ilo
        elif x_next > ihi:
            x_next = ihi

        step_norm = abs(x_next - x)

        if n % trace_every == 0:
            trace_n[n_trace] = n
            trace_x[n_trace] = x
            trace_step[n_trace] = step_norm
            trace_dx0[n_trace] = 0.5 * (x - x0) * (x - x0)
            trace_dsol[n_trace] = 0.5 * (q_known - x) * (q_known - x) if has_q else np.nan
            trace_res[n_trace] = abs(x - kappa * x)
            n_trace += 1

        if n % check_every == 0:
            if has_q and not (ilo - 1e-10 <= q_known <= ihi + 1e-10):
                status = STATUS_MEMBERSHIP_VIOLATION
                break
            d_now = 0.5 * (x - x0) * (x - x0)
            if d_now < d_prev - 1e-12:
                status = STATUS_MONOTONE_VIOLATION
                break
            d_prev = d_now

        x = x_next
        n += 1
        iterations = n
        if step_norm < tol:
            status = STATUS_CONVERGED
            break

    # final trace record
    trace_n[n_trace] = iterations
    trace_x[n_trace] = x
    trace_step[n_trace] = step_norm
    trace_dx0[n_trace] = 0.5 * (x - x0) * (x - x0)
    trace_dsol[n_trace] = 0.5 * (q_known - x) * (q_known - x) if has_q else np.nan
    trace_res[n_trace] = abs(x - kappa * x)
    n_trace += 1

    return (
        status,
        iterations,
        x,
        step_norm,
        clo,
        chi,
        qlo,
        qhi,
        trace_n[:n_trace],
        trace_x[:n_trace],
        trace_step[:n_trace],
        trace_dx0[:n_trace],
        trace_dsol[:n_trace],
        trace_res[:n_trace],
    )
