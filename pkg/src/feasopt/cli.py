"""Command-line front end.

``feasopt solve`` runs one algorithm on a problem file and writes its
trace; ``feasopt bench`` reproduces one of the lower-bound studies and
writes measured values next to the closed forms and bounds.

Exit status is 0 on success, 1 on bad input and 2 when a solver fails.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import haugazeau, strongcvx, subgrad
from .errors import FeasoptError, SolverError
from .fileformat import load_problem
from .trace import fmt

ALGORITHMS = ("subgrad-1a", "subgrad-1b", "haugazeau", "haugazeau-alt", "strongcvx",
              "analyze-lower-bdd")
BENCH_CASES = ("model-lb", "two-halfspace", "no-regularity")
BENCH_COLUMNS = ("k", "measured", "closed_form", "upper_bound", "lower_bound")

EXIT_OK, EXIT_INPUT, EXIT_SOLVER = 0, 1, 2


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


@dataclass(frozen=True)
class RunConfig:
    algorithm: str
    max_iters: int
    out: str
    alpha: float = 1.0
    window: int = 1
    seed: int | None = None
    inner_cap: int = 1_000_000

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise InputError(f"unknown algorithm {self.algorithm!r}")
        if self.max_iters < 1:
            raise InputError("--max-iters must be positive")
        if not self.alpha > 0:
            raise InputError("--alpha must be positive")
        if self.window < 1:
            raise InputError("--window must be positive")
        if self.inner_cap < 1:
            raise InputError("--inner-cap must be positive")


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _table(columns, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


# --------------------------------------------------------------------------
# solve


def _model_params(p):
    """Recover ``ModelProblemParams`` from a problem in the lower-bound family."""
    from .analysis import ModelProblemParams

    obj = p.objective
    if obj.kind != "pnorm-shift":
        raise InputError("analyze-lower-bdd needs a pnorm-shift objective")
    n, eps = p.dim, None
    if p.m != n - 1:
        raise InputError(f"analyze-lower-bdd needs n-1 = {n - 1} constraints, got {p.m}")
    seen = set()
    for i, g in enumerate(p.constraints):
        if g.kind != "affine" or g.params["b"] != 0.0:
            raise InputError(f"constraints[{i}]: expected affine with b = 0")
        a = g.params["a"]
        nz = np.flatnonzero(a[1:]) + 1
        if a[0] != 1.0 or nz.size != 1 or int(nz[0]) in seen:
            raise InputError(f"constraints[{i}]: expected normal e_1 + eps e_j")
        seen.add(int(nz[0]))
        e = float(a[nz[0]])
        if eps is None:
            eps = e
        elif e != eps:
            raise InputError(f"constraints[{i}]: eps differs from earlier constraints")
    try:
        return ModelProblemParams(n, int(obj.params["p"]), eps)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _analyze_lower_bdd(p, cfg):
    from .analysis import lower_bound_fk, run_analyze_lower_bdd

    params = _model_params(p)
    m = params.n - 1
    order = list(range(1, m + 1))
    if cfg.seed is not None:
        order = [int(j) for j in np.random.default_rng(cfg.seed).permutation(order)]
    order = order[:cfg.max_iters]
    values = run_analyze_lower_bdd(params, order)
    rows = [(k, v, 0.0, "reveal", 0.0, 0, order[k - 1], lower_bound_fk(k, params))
            for k, v in enumerate(values, start=1)]
    return _table(("k", "f", "viol", "step", "dist", "inner", "revealed", "closed_form"), rows)


def cmd_solve(cfg, path):
    """Run one algorithm and write its CSV trace to ``cfg.out``."""
    p = load_problem(path)
    if cfg.algorithm == "analyze-lower-bdd":
        _write(cfg.out, _analyze_lower_bdd(p, cfg))
        return EXIT_OK
    order = None
    if cfg.seed is not None:
        order = np.random.default_rng(cfg.seed).permutation(p.m)
    if cfg.algorithm in ("subgrad-1a", "subgrad-1b"):
        mode = "1A" if cfg.algorithm == "subgrad-1a" else "1B"
        tr = subgrad.run_subgradient(p, mode, cfg.max_iters, window=cfg.window, order=order)
    elif cfg.algorithm in ("haugazeau", "haugazeau-alt"):
        variant = "classic" if cfg.algorithm == "haugazeau" else "alternative"
        tr = haugazeau.run(p, variant, cfg.max_iters)
    else:
        tr = strongcvx.run_algorithm53(p, cfg.alpha, cfg.max_iters, inner_cap=cfg.inner_cap)
    tr.write_csv(cfg.out)
    return EXIT_OK


# --------------------------------------------------------------------------
# bench


def _bench_model_lb(args):
    from .analysis import ModelProblemParams, lower_bound_fk, run_analyze_lower_bdd

    try:
        params = ModelProblemParams(args.n, args.p, args.eps)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    K = min(args.max_iters or params.n - 1, params.n - 1)
    values = run_analyze_lower_bdd(params, range(1, K + 1))
    rows = [(k, v, lower_bound_fk(k, params), None, None) for k, v in enumerate(values, 1)]
    err = max(abs(r[1] - r[2]) for r in rows)
    return rows, [f"max |measured - closed_form| = {err:.3g}"]


def _bench_two_halfspace(args):
    from .analysis import (haugazeau_eps_bar, run_two_halfspace, search_M2, seq_lower_bound,
                           seq_upper_bound, two_halfspace_gamma, fit_power_law)

    theta = args.theta
    if not 0 < theta < math.pi / 2:
        raise InputError("--theta must lie in (0, pi/2)")
    if not 0 < args.alpha1 < math.cos(theta):
        raise InputError("--alpha1 must lie in (0, cos(theta))")
    K = args.max_iters or 10_000
    res = run_two_halfspace(theta, K, args.alpha1)
    k, alpha = res["k"], res["alpha"]
    c = math.cos(theta)
    # delta_k = f* - f(x_k) = (1 - ||x_0 - x_k||^2) / 2, bounded from index 1 on
    eb = min(haugazeau_eps_bar(1.0, 1.0 / math.sin(theta), 1.0).values())
    delta = seq_upper_bound(res["one_minus_f"][0] / 2, eb, k - 1)
    upper = c - np.sqrt(np.maximum(c * c - 2 * delta, 0.0))
    gamma = two_halfspace_gamma(theta, args.alpha1)
    M2 = search_M2(alpha, 1, gamma)
    lower = (seq_lower_bound(k, 1, gamma, M2) if M2 is not None
             else np.full(alpha.shape, np.nan))
    rows = [(int(ki), a, pr if np.isfinite(pr) else None, u, lo if np.isfinite(lo) else None)
            for ki, a, pr, u, lo in zip(k, alpha, res["predicted"], upper, lower)]
    err = float(np.nanmax(np.abs(alpha - res["predicted"]))) if len(alpha) > 1 else 0.0
    sel = k >= min(100, k[-1])
    e, _ = fit_power_law(k[sel], alpha[sel])
    return rows, [f"max recurrence error = {err:.3g}", f"gamma = {gamma:.6g}, M2 = {M2}",
                  f"fitted exponent of alpha_k = {e:.4f} (expected -1)"]


def _bench_no_regularity(args):
    from .analysis import fit_power_law, run_no_regularity

    if not args.p >= 1:
        raise InputError("--p must be >= 1 for no-regularity")
    K = args.max_iters or 10_000
    res = run_no_regularity(args.p, K)
    k, u = res["k"], res["u"]
    sel = k >= min(100, k[-1])
    e, const = fit_power_law(k[sel], u[sel])
    rows = [(int(ki), ui, const * ki ** e, None, b if np.isfinite(b) else None)
            for ki, ui, b in zip(k, u, res["bound"])]
    target = -1.0 / (2 * args.p - 1)
    return rows, [f"fitted exponent = {e:.4f} (expected {target:.4f})"]


def cmd_bench(args):
    """Run one study and write its CSV report to ``args.out``."""
    if args.max_iters is not None and args.max_iters < 1:
        raise InputError("--max-iters must be positive")
    run = {"model-lb": _bench_model_lb, "two-halfspace": _bench_two_halfspace,
           "no-regularity": _bench_no_regularity}[args.case]
    rows, notes = run(args)
    _write(args.out, _table(BENCH_COLUMNS, rows))
    for line in notes:
        print(line)
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser():
    ap = _Parser(prog="feasopt", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="run an algorithm on a problem file")
    s.add_argument("file")
    s.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    s.add_argument("--max-iters", type=int, required=True)
    s.add_argument("--alpha", type=float, default=1.0, help="accuracy schedule (strongcvx)")
    s.add_argument("--window", type=int, default=1, help="sweep window (subgrad-1b)")
    s.add_argument("--seed", type=int, default=None,
                   help="shuffle the constraint order (subgradient, analyze-lower-bdd)")
    s.add_argument("--inner-cap", type=int, default=1_000_000,
                   help="inner iterations per outer step (strongcvx)")
    s.add_argument("--out", required=True)

    b = sub.add_parser("bench", help="reproduce a lower-bound study")
    b.add_argument("--case", required=True, choices=BENCH_CASES)
    b.add_argument("--theta", type=float, default=math.pi / 4)
    b.add_argument("--alpha1", type=float, default=0.1)
    b.add_argument("--p", type=float, default=2)
    b.add_argument("--n", type=int, default=6)
    b.add_argument("--eps", type=float, default=1.0)
    b.add_argument("--max-iters", type=int, default=None)
    b.add_argument("--out", required=True)
    return ap


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        if args.command == "solve":
            cfg = RunConfig(args.algorithm, args.max_iters, args.out, args.alpha, args.window,
                            args.seed, args.inner_cap)
            return cmd_solve(cfg, args.file)
        if args.case == "model-lb" and args.p != int(args.p):
            raise InputError("--p must be an even integer for model-lb")
        if args.case == "model-lb":
            args.p = int(args.p)
        return cmd_bench(args)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except SolverError as exc:
        print(f"feasopt: solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (InputError, FeasoptError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"feasopt: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
