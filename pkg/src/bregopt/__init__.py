"""Bregman-geometry toolkit with a hybrid shrinking-projection solver.

Modules:
  legendre     Legendre function instances and Bregman distance machinery
  regions      base sets, halfspace cuts, Bregman projections
  equilibrium  equilibrium problems, mixed resolvents, grid oracles
  solver       the hybrid iteration (generic engine + compiled fast path)
  verify       sampled property suites over all of the above
  cli          solve / compare / verify command line front end
"""

from .legendre import (
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
from .regions import (
    BaseSet,
    EmptyRegionError,
    Halfspace,
    Region,
    bregman_project,
    cut_from_bregman_vi,
    cut_from_distance_test,
)
from .equilibrium import (
    GmepProblem,
    ResolventConfig,
    bfne_gap,
    gmep_violation,
    make_problem,
    probe_grid,
    resolvent,
    resolvent_pythagoras_gap,
    verify_resolvent,
)
from .solver import (
    LinearContraction,
    RunConfig,
    RunResult,
    Schedule,
    check_monotone_df,
    initial_state,
    run,
    step,
)

__version__ = "0.1.0"
