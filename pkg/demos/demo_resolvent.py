"""Mixed equilibrium resolvents and their brute-force verification.

Shows the registered problems, evaluates the resolvent by closed form and
by bisection, and then certifies the outputs against the defining
variational inequality on a dense probe grid -- including the firm
nonexpansiveness and Pythagoras-type inequalities the convergence proof
relies on.

Run:  python3 demos/demo_resolvent.py
"""

import numpy as np

from bregopt import (
    Euclidean,
    ResolventConfig,
    bfne_gap,
    gmep_violation,
    make_problem,
    probe_grid,
    resolvent,
    resolvent_pythagoras_gap,
    verify_resolvent,
)

F = Euclidean(1)
CFG = ResolventConfig()


def main():
    print("=== Registered problems over C = [-1.5, 0] ===")
    print("  paper-example-gmep      theta(x,y) = x(y-x), phi = x^2, psi = sin")
    print("  paper-example-ep        same data folded into one bare bifunction")
    print("  paper-example-ep-plain  bare theta(x,y) = x(y-x) alone")

    print("\n=== Resolvent values at x = -1 ===")
    for name in ("paper-example-gmep", "paper-example-ep", "paper-example-ep-plain"):
        problem, _ = make_problem(name)
        z = resolvent(F, problem, [-1.0], CFG)
        print("  %-24s Res(-1) = %+.10f" % (name, z[0]))
    print("  (gmep freezes psi at the outer point: (x - sin x)/4;")
    print("   the folded form carries psi inside: 4u + sin u = x)")

    print("\n=== Closed form vs bisection on the affine-quadratic family ===")
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(50):
        problem, _ = make_problem("affine-quadratic", a=1.0 + rng.random(),
                                  c=rng.random(), psi="sin", lo=-1.5, hi=0.0)
        x = np.array([-1.5 * rng.random()])
        zc = resolvent(F, problem, x, ResolventConfig(method="closed-form"))
        zb = resolvent(F, problem, x, ResolventConfig(method="bisection"))
        worst = max(worst, abs(zc[0] - zb[0]))
    print("  worst disagreement over 50 random instances: %.2e" % worst)

    print("\n=== Brute-force certification on a 2000-point probe grid ===")
    problem, q = make_problem("paper-example-gmep")
    probes = probe_grid(problem.base, 2000)
    worst_vi = worst_bfne = worst_pyth = -np.inf
    for _ in range(50):
        x, y = (np.array([-1.5 * rng.random()]) for _ in range(2))
        z = resolvent(F, problem, x, CFG)
        worst_vi = max(worst_vi, verify_resolvent(F, problem, x, z, probes))
        worst_bfne = max(worst_bfne, bfne_gap(F, problem, CFG, x, y))
        worst_pyth = max(worst_pyth, resolvent_pythagoras_gap(F, problem, CFG, q, x))
    print("  resolvent inequality violation: %.2e  (valid if <= ~1e-8)" % worst_vi)
    print("  firm-nonexpansiveness gap:      %.2e  (valid if <= 0 + eps)" % worst_bfne)
    print("  Pythagoras gap at solution:     %.2e  (valid if <= 0 + eps)" % worst_pyth)

    print("\n=== Equilibrium inequality at and away from the solution ===")
    print("  violation at x =  0  : %.3e" % gmep_violation(problem, [0.0], probes))
    print("  violation at x = -1  : %.3e  (not a solution)"
          % gmep_violation(problem, [-1.0], probes))


if __name__ == "__main__":
    main()
