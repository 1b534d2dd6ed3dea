"""Command line front end: solve, compare, verify.

Configs are JSON; command-line flags override file values.  All numeric
CSV fields use 17 significant digits so outputs round-trip exactly and
repeated runs are byte-identical.  Exit codes: 0 success, 1 runtime or
property failure, 2 usage/config error.
"""

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .equilibrium import PROBLEM_NAMES, make_problem
from .legendre import Euclidean, NegEntropy, ScalarPower, ScalarQuartic
from .solver import LinearContraction, RunConfig, Schedule, run
from .verify import run_suite

OUTPUT_DIR_ENV = "BREGOPT_OUT"

# baseline iteration counts for the bundled example (tol 1e-10)
REFERENCE_ITERATIONS = {
    ("gmep", -0.5): 1_840_206,
    ("gmep", -1.0): 2_921_737,
    ("gmep", -1.5): 3_828_937,
    ("ep", -0.5): 2_001_482,
    ("ep", -1.0): 3_177_798,
    ("ep", -1.5): 4_164_504,
}

TRACE_HEADER = "n,x,step_norm,d_x0,d_sol,fp_residual"
SUMMARY_HEADER = "x0,variant,iterations,final_x,final_step_norm,final_fp_residual,wall_time"


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    problem: object = "paper-example"  # name, or dict {"name": ..., params}
    legendre: object = "euclidean"     # tag, or dict {"kind": ..., params}
    mapping: dict = field(default_factory=lambda: {"kind": "linear-contraction", "kappa": 2.0 / 3.0})
    schedule: dict = field(default_factory=lambda: {"alpha_offset": 3.0, "beta_limit": 0.99, "beta_offset": 2.0})
    x0: list = field(default_factory=lambda: [-1.0])
    variant: str = "gmep"  # gmep | ep | both
    tol: float = 1e-10
    max_iter: int = 10_000_000
    trace_every: int = 10_000
    out: str = "runs"

    def to_dict(self):
        return {
            "problem": self.problem,
            "legendre": self.legendre,
            "mapping": dict(self.mapping),
            "schedule": dict(self.schedule),
            "x0": list(self.x0),
            "variant": self.variant,
            "tol": self.tol,
            "max_iter": self.max_iter,
            "trace_every": self.trace_every,
            "out": self.out,
        }

    @classmethod
    def from_dict(cls, d):
        cfg = cls()
        unknown = set(d) - set(cfg.to_dict())
        if unknown:
            raise ConfigError("unknown config keys: %s" % ", ".join(sorted(unknown)))
        for k, v in d.items():
            setattr(cfg, k, v)
        cfg.validate()
        return cfg

    def validate(self):
        if self.variant not in ("gmep", "ep", "both"):
            raise ConfigError("variant must be gmep, ep, or both; got %r" % self.variant)
        if not self.x0:
            raise ConfigError("x0 list is empty")
        if self.tol <= 0 or self.max_iter <= 0 or self.trace_every <= 0:
            raise ConfigError("tol, max_iter, trace_every must be positive")
        return self


def build_legendre(spec):
    if isinstance(spec, str):
        spec = {"kind": spec}
    kind = spec.get("kind")
    dim = int(spec.get("dim", 1))
    if kind == "euclidean":
        return Euclidean(dim)
    if kind == "scalar-power":
        return ScalarPower(float(spec.get("p", 2.0)))
    if kind == "scalar-quartic":
        return ScalarQuartic()
    if kind == "neg-entropy":
        return NegEntropy(dim)
    raise ConfigError("unknown legendre kind %r" % kind)


def build_mapping(spec):
    if spec.get("kind", "linear-contraction") != "linear-contraction":
        raise ConfigError("unknown mapping kind %r" % spec.get("kind"))
    return LinearContraction(float(spec.get("kappa", 2.0 / 3.0)), int(spec.get("dim", 1)))


def build_schedule(spec):
    return Schedule(
        float(spec.get("alpha_offset", 3.0)),
        float(spec.get("beta_limit", 0.99)),
        float(spec.get("beta_offset", 2.0)),
    )


def resolve_problems(cfg):
    """Expand (problem, variant) into a list of (variant_label, problem, solution)."""
    variants = ["gmep", "ep"] if cfg.variant == "both" else [cfg.variant]
    out = []
    if isinstance(cfg.problem, str) and cfg.problem == "paper-example":
        for v in variants:
            problem, q = make_problem("paper-example-%s" % v)
            out.append((v, problem, q))
        return out
    if isinstance(cfg.problem, str):
        name, params = cfg.problem, {}
    else:
        params = dict(cfg.problem)
        name = params.pop("name", None)
    if name not in PROBLEM_NAMES:
        raise ConfigError("unknown problem %r (registered: paper-example, %s)"
                          % (name, ", ".join(PROBLEM_NAMES)))
    problem, q = make_problem(name, **params)
    label = variants[0] if len(variants) == 1 else "gmep"
    return [(label, problem, q)]


def _fmt(v):
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return "%.17g" % float(v)


def _out_dir(cfg):
    base = os.environ.get(OUTPUT_DIR_ENV, ".")
    path = cfg.out if os.path.isabs(cfg.out) else os.path.join(base, cfg.out)
    os.makedirs(path, exist_ok=True)
    return path


def load_config(args):
    d = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                d = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError("cannot read config %s: %s" % (args.config, exc)) from exc
    for key in ("problem", "variant", "tol", "max_iter", "trace_every", "out"):
        v = getattr(args, key.replace("-", "_"), None)
        if v is not None:
            d[key] = v
    if getattr(args, "x0", None):
        d["x0"] = args.x0
    return ExperimentConfig.from_dict(d)


def _execute_runs(cfg):
    f = build_legendre(cfg.legendre)
    T = build_mapping(cfg.mapping)
    sched = build_schedule(cfg.schedule)
    rows = []
    for x0 in cfg.x0:
        for variant, problem, q in resolve_problems(cfg):
            rc = RunConfig(
                tol=cfg.tol,
                max_iter=cfg.max_iter,
                trace_every=cfg.trace_every,
                known_solution=q,
            )
            t0 = time.perf_counter()
            res = run(f, problem, T, sched, [x0] * f.dim if np.isscalar(x0) else x0, rc)
            wall = time.perf_counter() - t0
            rows.append((x0, variant, res, wall))
    return rows


def _write_trace(path, trace):
    with open(path, "w", newline="\n") as fh:
        fh.write(TRACE_HEADER + "\n")
        for rec in trace:
            fh.write(
                ",".join(
                    [str(rec.n)]
                    + [_fmt(v) for v in (rec.x, rec.step_norm, rec.d_x0, rec.d_sol, rec.fp_residual)]
                )
                + "\n"
            )


def cmd_solve(args):
    cfg = load_config(args)
    out = _out_dir(cfg)
    rows = _execute_runs(cfg)
    all_converged = True
    with open(os.path.join(out, "summary.csv"), "w", newline="\n") as fh:
        fh.write(SUMMARY_HEADER + "\n")
        for x0, variant, res, wall in rows:
            _write_trace(os.path.join(out, "trace_%s_x0=%g.csv" % (variant, x0)), res.trace)
            fh.write(
                ",".join(
                    [
                        _fmt(x0),
                        variant,
                        str(res.iterations),
                        _fmt(float(res.result[0])),
                        _fmt(res.final_step),
                        _fmt(res.final_fp_residual),
                        _fmt(wall),
                    ]
                )
                + "\n"
            )
            all_converged &= res.status == "converged"
            print(
                "%-5s x0=%-5g iterations=%-9d final_x=%.6e %s"
                % (variant, x0, res.iterations, res.result[0], res.status)
            )
    print("summary written to %s" % os.path.join(out, "summary.csv"))
    return 0 if all_converged else 1


def cmd_compare(args):
    args.variant = "both"
    cfg = load_config(args)
    required = {-0.5, -1.0, -1.5}
    if getattr(args, "x0", None) is None and set(cfg.x0) == {-1.0}:
        cfg.x0 = [-0.5, -1.0, -1.5]
    out = _out_dir(cfg)
    rows = _execute_runs(cfg)

    lines = []
    with open(os.path.join(out, "comparison.csv"), "w", newline="\n") as fh:
        fh.write("x0,variant,iterations,reference,deviation_pct\n")
        for x0, variant, res, _ in rows:
            ref = REFERENCE_ITERATIONS.get((variant, x0))
            dev = 100.0 * (res.iterations - ref) / ref if ref else float("nan")
            fh.write(
                "%s,%s,%d,%s,%s\n"
                % (_fmt(x0), variant, res.iterations, ref if ref else "", _fmt(dev))
            )
            lines.append(
                "%8g  %-5s  %10d  %10s  %+8.3f%%"
                % (x0, variant, res.iterations, ref if ref else "-", dev)
            )
            # decimated data for |x_n| and D_f(sol, x_n) vs n, log-scale friendly
            with open(
                os.path.join(out, "convergence_%s_x0=%g.csv" % (variant, x0)), "w", newline="\n"
            ) as ch:
                ch.write("n,abs_x,d_sol\n")
                for rec in res.trace:
                    ch.write("%d,%s,%s\n" % (rec.n, _fmt(abs(rec.x)), _fmt(rec.d_sol)))

    header = "%8s  %-5s  %10s  %10s  %9s" % ("x0", "variant", "iterations", "reference", "deviation")
    text = "\n".join([header, "-" * len(header)] + lines) + "\n"
    with open(os.path.join(out, "comparison.txt"), "w", newline="\n") as fh:
        fh.write(text)
    print(text, end="")
    if not required.issubset(set(cfg.x0)):
        print("warning: comparison grid missing some of the baseline initial points", file=sys.stderr)
    return 0


def _faulty_resolvent(f, problem, x, cfg):
    # self-test hook: an expansive map, which is not firmly nonexpansive
    # and does not satisfy the resolvent inequality
    from .legendre import as_vector

    return 1.2 * as_vector(x) + 0.05


def cmd_verify(args):
    resolvent_fn = _faulty_resolvent if args.inject_faulty_resolvent else None
    results = run_suite(seed=args.seed, select=args.select, resolvent_fn=resolvent_fn)
    for r in results:
        print(r.line())
    n_fail = sum(not r.passed for r in results)
    print("%d checks, %d failed" % (len(results), n_fail))
    return 1 if n_fail else 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="bregopt",
        description="Hybrid shrinking-projection solver and Bregman-geometry verification suite",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--problem", help="registered problem name")
    common.add_argument("--variant", choices=["gmep", "ep", "both"])
    common.add_argument("--x0", type=float, action="append", help="initial point (repeatable)")
    common.add_argument("--tol", type=float)
    common.add_argument("--max-iter", type=int, dest="max_iter")
    common.add_argument("--trace-every", type=int, dest="trace_every")
    common.add_argument("--out", help="output directory (relative to $%s)" % OUTPUT_DIR_ENV)

    sub.add_parser("solve", parents=[common], help="run the solver, write trace + summary CSVs")
    sub.add_parser(
        "compare", parents=[common], help="run the benchmark grid, compare with baseline counts"
    )
    pv = sub.add_parser("verify", help="run the property-verification suites")
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--select", help="substring filter on property names")
    pv.add_argument(
        "--inject-faulty-resolvent", action="store_true", help=argparse.SUPPRESS
    )

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already
        raise
    try:
        if args.command == "solve":
            return cmd_solve(args)
        if args.command == "compare":
            return cmd_compare(args)
        return cmd_verify(args)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2
    except Exception as exc:  # solver/runtime failures
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
