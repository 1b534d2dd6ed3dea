"""Tour of the Bregman-geometry toolkit.

Walks through the bundled Legendre functions, the distance and V-function
they induce, the dual convex combination, and the identities that make the
solver's cut-and-project machinery exact.

Run:  python3 demos/demo_bregman_geometry.py
"""

import numpy as np

from bregopt import (
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


def main():
    print("=== Legendre functions and their gradient pairs ===")
    for f, label in [
        (Euclidean(1), "euclidean  f(x) = x^2/2"),
        (ScalarQuartic(), "quartic    f(x) = x^4/4"),
        (ScalarPower(3.0), "power-3    f(x) = |x|^3/3"),
    ]:
        x = np.array([-1.3])
        g = grad(f, x)
        back = grad_conj(f, g)
        print("  %-26s grad(-1.3) = %+.6f   grad* o grad round-trip = %+.6f"
              % (label, g[0], back[0]))

    print("\n=== Bregman distance: asymmetric, zero only on the diagonal ===")
    f = ScalarQuartic()
    for x, y in [(2.0, 1.0), (1.0, 2.0), (1.0, 1.0)]:
        print("  D_f(%g, %g) = %.6f" % (x, y, bregman_distance(f, [x], [y])))

    print("\n=== V-function: the same distance through a dual argument ===")
    x, ustar = np.array([2.0]), np.array([1.0])
    lhs = v_fn(f, x, ustar)
    rhs = bregman_distance(f, x, grad_conj(f, ustar))
    print("  V_f(2, 1) = %.6f,  D_f(2, grad*(1)) = %.6f,  gap = %.1e"
          % (lhs, rhs, abs(lhs - rhs)))

    print("\n=== Dual convex combination and its distance bound ===")
    w = [0.3, 0.7]
    pts = [np.array([-1.0]), np.array([0.5])]
    zbar = combine_dual(f, w, pts)
    z = np.array([0.1])
    bound = sum(t * bregman_distance(f, z, p) for t, p in zip(w, pts))
    print("  blend of {-1, 0.5} with weights (0.3, 0.7): %.6f" % zbar[0])
    print("  D_f(z, blend) = %.6f  <=  weighted bound %.6f"
          % (bregman_distance(f, z, zbar), bound))

    print("\n=== Three- and four-point identities (worst residual, 1000 samples) ===")
    rng = np.random.default_rng(0)
    for f2, label in [(ScalarQuartic(), "quartic"), (NegEntropy(2), "neg-entropy-2d")]:
        lo, hi = (0.1, 3.0) if isinstance(f2, NegEntropy) else (-2.0, 2.0)
        worst3 = worst4 = 0.0
        for _ in range(1000):
            p = [lo + (hi - lo) * rng.random(f2.dim) for _ in range(4)]
            worst3 = max(worst3, three_point_residual(f2, p[0], p[1], p[2]))
            worst4 = max(worst4, four_point_residual(f2, p[1], p[3], p[0], p[2]))
        print("  %-16s three-point %.2e   four-point %.2e" % (label, worst3, worst4))

    print("\n=== Total convexity modulus (positive = strictly convex geometry) ===")
    for f3, label in [(Euclidean(1), "euclidean"), (ScalarQuartic(), "quartic")]:
        print("  %-10s nu(x=1, t=0.5) = %.6f"
              % (label, total_convexity_modulus(f3, [1.0], 0.5)))


if __name__ == "__main__":
    main()
